#pragma once
#include <map>
#include <string>
#include <vector>

#include "qsm/linalg.hpp"
#include "qsm/rational.hpp"

namespace qsm {

// A generator of a free graded-commutative algebra (or a letter of a free
// graded-commutative coalgebra word basis -- the same monomial machinery
// serves both).
struct Generator {
  int id;            // dense ids 0..n-1
  std::string name;  // unique, printable
  int degree;        // >= 1
};

// Monomial over a generator table: factor ids sorted ascending; odd-degree
// generators appear at most once. The empty monomial is the unit.
// The canonical order -- word length first, then lexicographic on the sorted
// factor lists -- is what every basis/column enumeration in the engine uses,
// which keeps all reductions deterministic.
struct Monomial {
  std::vector<int> factors;
  bool operator==(const Monomial& o) const { return factors == o.factors; }
  bool operator<(const Monomial& o) const {
    if (factors.size() != o.factors.size())
      return factors.size() < o.factors.size();
    return factors < o.factors;
  }
};

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return a < b; }
};

using Polynomial = std::map<Monomial, Q, MonoLess>;

struct GenTable {
  std::vector<Generator> gens;  // gens[i].id == i

  int degree(int id) const { return gens[static_cast<std::size_t>(id)].degree; }
  bool odd(int id) const { return degree(id) % 2 != 0; }
  const std::string& name(int id) const {
    return gens[static_cast<std::size_t>(id)].name;
  }
  int size() const { return static_cast<int>(gens.size()); }
  int mono_degree(const Monomial& m) const {
    int d = 0;
    for (int f : m.factors) d += degree(f);
    return d;
  }
};

GenTable make_gen_table(std::vector<Generator> gens);

// Koszul sign testing hook: when enabled, the odd-odd transposition sign used
// by monomial normalization is deliberately flipped. Used only by the
// self-test mutation check. RAII so the flag can never leak.
struct KoszulFlipGuard {
  KoszulFlipGuard();
  ~KoszulFlipGuard();
  KoszulFlipGuard(const KoszulFlipGuard&) = delete;
  KoszulFlipGuard& operator=(const KoszulFlipGuard&) = delete;
};
bool koszul_flipped();

struct NormResult {
  bool zero = false;  // odd generator repeated
  int sign = 1;       // +1 or -1
  Monomial mono;      // sorted factors
};

// Sort a factor list into canonical form, computing the Koszul sign of the
// permutation (a transposition of adjacent factors of degrees p,q contributes
// (-1)^{pq}). A repeated odd generator yields zero.
NormResult normalize_monomial(const GenTable& T, std::vector<int> factors);

Polynomial poly_zero();
Polynomial mono_poly(Monomial m, Q c);
bool poly_is_zero(const Polynomial& p);
void poly_add_term(Polynomial& p, const Monomial& m, const Q& c);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);
// a += c*b
void poly_axpy(Polynomial& a, const Q& c, const Polynomial& b);
Polynomial poly_scale(const Q& c, const Polynomial& a);
Polynomial poly_mul(const GenTable& T, const Polynomial& a, const Polynomial& b);
// Degree of a homogeneous polynomial; -1 for zero. Throws internal_error if
// the polynomial is not homogeneous.
int poly_degree(const GenTable& T, const Polynomial& p);
// Component whose monomials have exactly `len` factors.
Polynomial wordlength_part(const Polynomial& p, std::size_t len);
// Largest factor count appearing; 0 for zero polynomial.
std::size_t max_wordlength(const Polynomial& p);

// Extend a generator assignment to an (anti)derivation of degree r:
// D(g1...gk) = sum_i (-1)^{r(|g1|+...+|g_{i-1}|)} g1...D(g_i)...gk.
// `values` maps generator id to D(gen); missing ids mean D(gen) = 0.
Polynomial apply_derivation(const GenTable& T, const std::map<int, Polynomial>& values,
                            int r, const Polynomial& p);

// Substitute: algebra map sending generator id -> images[id] (must cover every
// generator occurring in p); extended multiplicatively. Image polynomials live
// over the table `target`.
Polynomial substitute(const GenTable& target, const std::vector<Polynomial>& images,
                      const Polynomial& p);

std::string poly_to_string(const GenTable& T, const Polynomial& p);

// All monomials of the given total degree, in canonical order. `allowed` may
// restrict the usable generators (empty = all).
std::vector<Monomial> monomial_basis(const GenTable& T, int degree,
                                     const std::vector<int>& allowed = {});

// Coordinates of a homogeneous polynomial over monomial_basis(T, degree,
// allowed). Throws internal_error if p has a monomial outside the basis.
Vec poly_coords(const GenTable& T, const Polynomial& p,
                const std::vector<Monomial>& basis);
Polynomial coords_poly(const std::vector<Monomial>& basis, const Vec& v);

// A free CDGA (Sullivan-type algebra): free graded-commutative on the table's
// generators with a degree +1 differential given on generators.
struct FreeCDGA {
  GenTable T;
  std::map<int, Polynomial> diff;  // id -> d(gen); missing = 0
  int cap = 0;                     // degrees < cap are trusted/enumerable

  Polynomial d(const Polynomial& p) const { return apply_derivation(T, diff, 1, p); }
  Polynomial d_gen(int id) const {
    auto it = diff.find(id);
    return it == diff.end() ? poly_zero() : it->second;
  }
  std::vector<Monomial> basis(int degree) const { return monomial_basis(T, degree); }
};

// Validates: ids dense, names unique, degrees >= 1, each d(gen) homogeneous of
// degree |gen|+1 over declared generators, and d(d(gen)) == 0 for every
// generator of degree <= dd_top (exact, independent of cap; the default
// checks every generator). Truncated constructions whose top-degree
// differentials are intentionally unset pass a finite dd_top.
FreeCDGA make_cdga(std::vector<Generator> gens, std::map<int, Polynomial> diff,
                   int cap, int dd_top = 1 << 30);

}  // namespace qsm
