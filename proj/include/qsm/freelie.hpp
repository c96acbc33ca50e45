#pragma once
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qsm/linalg.hpp"

namespace qsm {

struct LieGenerator {
  int id;            // dense ids 0..n-1
  std::string name;  // unique
  int degree;        // >= 1
};

// A formal (binary) bracket word over the generators.
struct BWord {
  int gen = -1;  // leaf when >= 0
  std::shared_ptr<BWord> l, r;

  static BWord leaf(int g) {
    BWord w;
    w.gen = g;
    return w;
  }
  static BWord br(BWord a, BWord b) {
    BWord w;
    w.l = std::make_shared<BWord>(std::move(a));
    w.r = std::make_shared<BWord>(std::move(b));
    return w;
  }
  bool is_leaf() const { return gen >= 0; }
};

int bword_degree(const BWord& w, const std::vector<LieGenerator>& gens);
std::string bword_to_string(const BWord& w, const std::vector<LieGenerator>& gens);

// Element of the free graded Lie algebra, as coordinates over the canonical
// basis of one degree. Zero is represented by empty coords (any degree).
struct LieElement {
  int degree = 0;
  std::map<int, Q> coords;  // basis index within `degree` -> coefficient
  bool is_zero() const { return coords.empty(); }
};

// The free graded Lie algebra on the given generators, materialized in
// degrees 1..cap. Basis construction is greedy over tensor-algebra
// expansions; candidates are ordered by the largest generator id occurring in
// the word, so the basis of the subalgebra on generators 0..p is a prefix of
// the full basis (degreewise).
class FreeLie {
 public:
  FreeLie(std::vector<LieGenerator> gens, int cap);

  const std::vector<LieGenerator>& gens() const { return gens_; }
  int cap() const { return cap_; }
  int dim(int degree) const;
  const BWord& basis_word(int degree, int idx) const;
  // Number of generator letters in the basis word.
  int basis_word_length(int degree, int idx) const;
  // Largest generator id occurring in the basis word.
  int basis_word_maxgen(int degree, int idx) const;

  LieElement zero(int degree) const { return LieElement{degree, {}}; }
  LieElement gen_element(int id) const;
  LieElement basis_element(int degree, int idx) const;
  // Normalize a formal bracket word / linear combination onto the basis.
  LieElement normalize(const BWord& w) const;
  LieElement normalize(const std::vector<std::pair<Q, BWord>>& terms) const;
  LieElement bracket(const LieElement& a, const LieElement& b) const;
  LieElement add(const LieElement& a, const LieElement& b) const;
  LieElement scale(const Q& c, const LieElement& a) const;

  std::string element_to_string(const LieElement& e) const;
  Vec element_coords(const LieElement& e) const;  // dense over dim(degree)
  LieElement coords_element(int degree, const Vec& v) const;

 private:
  struct DegreeBasis {
    std::vector<BWord> words;
    std::vector<int> lengths;
    std::vector<int> maxgens;
    // tensor words of this degree (coordinate space for expansions)
    std::vector<std::vector<int>> twords;
    std::map<std::vector<int>, std::size_t> tindex;
    // expansion matrix rows: expansion of basis word i over twords
    std::vector<Vec> expansions;
    RowSpace span{0};
    // lazy solver for expressing tensor vectors in the basis expansions
    mutable std::shared_ptr<Solver> solver;
  };
  std::vector<LieGenerator> gens_;
  int cap_;
  std::vector<DegreeBasis> deg_;  // index 1..cap
  mutable std::map<std::tuple<int, int, int, int>, LieElement> bracket_memo_;

  Vec expand(const BWord& w, int degree) const;  // over twords of `degree`
  void build();
  LieElement solve_coords(const Vec& tensor_vec, int degree) const;
  LieElement bracket_basis(int da, int ia, int db, int ib) const;
};

// Hard guard against degenerate inputs whose tensor coordinate spaces would
// explode (e.g. many degree-1 generators with a large cap).
inline constexpr std::size_t kMaxTensorWordsPerDegree = 200000;

// A free DGL (L_W, d): differential given on generators, extended as a
// degree -1 derivation. Validated: d lowers degree by 1 and d(d(gen)) == 0.
struct FreeDGL {
  std::shared_ptr<FreeLie> lie;
  std::map<int, LieElement> diff;  // gen id -> d(gen); missing = 0
  bool minimal = true;             // no linear part in any d(gen)

  const std::vector<LieGenerator>& gens() const { return lie->gens(); }
  int cap() const { return lie->cap(); }
  LieElement d_gen(int id) const;
  LieElement d(const LieElement& e) const;
  // Matrix of d : L_degree -> L_{degree-1} (rows: target basis).
  Mat d_matrix(int degree) const;
};

FreeDGL make_dgl(std::vector<LieGenerator> gens,
                 std::map<int, LieElement> diff, int cap);
// Rebuild the same DGL with a different materialization cap.
FreeDGL dgl_with_cap(const FreeDGL& L, int cap);

// Graded Lie algebra given by structure constants on a finite graded basis
// (homology of a DGL, or the homotopy Lie algebra of a Sullivan model).
// Degrees run 1..cap; brackets landing above cap are truncated away.
class GradedLie {
 public:
  GradedLie(std::vector<int> dims, int cap);
  int cap() const { return cap_; }
  int dim(int degree) const;
  // bracket of basis elements: coords in degree a+b (empty if a+b > cap)
  void set_bracket(int da, int ia, int db, int ib, Vec coords);
  Vec bracket(int da, int ia, int db, int ib) const;
  Vec bracket_vec(int da, const Vec& a, int db, const Vec& b) const;
  // Validates antisymmetry and the graded Jacobi identity on all basis
  // triples whose total degree is <= cap.
  void validate() const;

  // Lower central series: L^{(1)} = L, L^{(n+1)} = [L, L^{(n)}].
  // Returns per-degree spanning spaces of L^{(n)}.
  std::vector<RowSpace> lcs(int n) const;
  // Largest n with [x] in L^{(n)} (bracket length); x nonzero of degree d.
  // Returns -1 for x == 0 (callers treat that separately / as infinity).
  int bracket_length(int d, const Vec& x) const;
  // Largest n with L^{(n)} != 0; 0 if L = 0. (L is finite dimensional here,
  // so this is exact.)
  int max_bracket_length() const;

 private:
  int cap_;
  std::vector<int> dims_;  // per degree 1..cap
  std::map<std::tuple<int, int, int, int>, Vec> table_;
};

// Homology of a free DGL in degrees 1..topdeg, with the induced Lie bracket.
struct DGLHomology {
  std::vector<int> dims;                     // per degree 1..topdeg
  std::vector<std::vector<LieElement>> reps; // canonical cycle representatives
  GradedLie lie;                             // induced bracket on classes
  std::vector<RowSpace> boundaries;  // per degree, image of d
  std::vector<RowSpace> rep_spaces;  // echelon residuals of reps

  // Class coordinates of a cycle z of the given degree (z may be the zero
  // element); the two-argument form reads the degree off z.
  Vec class_coords(const FreeDGL& L, const LieElement& z, int degree) const;
  Vec class_coords(const FreeDGL& L, const LieElement& z) const {
    return class_coords(L, z, z.degree);
  }
};
DGLHomology dgl_homology(const FreeDGL& L, int topdeg);

// Attach a cone along the cycle z of degree k-1: extends L with one new
// generator w of degree k with d(w) = z. New generator name supplied.
FreeDGL dgl_adjunction(const FreeDGL& L, const LieElement& z, int k,
                       const std::string& name, int cap);

}  // namespace qsm
