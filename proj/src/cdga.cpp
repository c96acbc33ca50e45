#include "qsm/cdga.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>

#include "qsm/errors.hpp"

namespace qsm {

GenTable make_gen_table(std::vector<Generator> gens) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    check_internal(gens[i].id == static_cast<int>(i), "generator ids must be dense");
    check_internal(gens[i].degree >= 1, "generator degree must be >= 1");
    check_internal(names.insert(gens[i].name).second,
                   "duplicate generator name '" + gens[i].name + "'");
  }
  return GenTable{std::move(gens)};
}

namespace {
std::atomic<bool> g_koszul_flip{false};
}

KoszulFlipGuard::KoszulFlipGuard() { g_koszul_flip = true; }
KoszulFlipGuard::~KoszulFlipGuard() { g_koszul_flip = false; }
bool koszul_flipped() { return g_koszul_flip.load(); }

NormResult normalize_monomial(const GenTable& T, std::vector<int> factors) {
  NormResult res;
  // Insertion sort, tracking the Koszul sign of each adjacent transposition.
  int sign = 1;
  const bool flip = koszul_flipped();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && factors[j - 1] > factors[j]) {
      bool both_odd = T.odd(factors[j - 1]) && T.odd(factors[j]);
      if (flip) both_odd = !both_odd;
      if (both_odd) sign = -sign;
      std::swap(factors[j - 1], factors[j]);
      --j;
    }
  }
  for (std::size_t i = 1; i < factors.size(); ++i) {
    if (factors[i] == factors[i - 1] && T.odd(factors[i])) {
      res.zero = true;
      return res;
    }
  }
  res.sign = sign;
  res.mono.factors = std::move(factors);
  return res;
}

Polynomial poly_zero() { return Polynomial(); }

Polynomial mono_poly(Monomial m, Q c) {
  Polynomial p;
  if (sgn(c) != 0) p.emplace(std::move(m), std::move(c));
  return p;
}

bool poly_is_zero(const Polynomial& p) { return p.empty(); }

void poly_add_term(Polynomial& p, const Monomial& m, const Q& c) {
  if (sgn(c) == 0) return;
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(m, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [m, c] : b) poly_add_term(r, m, c);
  return r;
}

void poly_axpy(Polynomial& a, const Q& c, const Polynomial& b) {
  if (sgn(c) == 0) return;
  for (const auto& [m, x] : b) poly_add_term(a, m, c * x);
}

Polynomial poly_scale(const Q& c, const Polynomial& a) {
  Polynomial r;
  if (sgn(c) == 0) return r;
  for (const auto& [m, x] : a) r.emplace(m, c * x);
  return r;
}

Polynomial poly_mul(const GenTable& T, const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      std::vector<int> factors = ma.factors;
      factors.insert(factors.end(), mb.factors.begin(), mb.factors.end());
      NormResult n = normalize_monomial(T, std::move(factors));
      if (n.zero) continue;
      poly_add_term(r, n.mono, ca * cb * n.sign);
    }
  }
  return r;
}

int poly_degree(const GenTable& T, const Polynomial& p) {
  int d = -1;
  for (const auto& [m, c] : p) {
    (void)c;
    int md = T.mono_degree(m);
    if (d == -1)
      d = md;
    else
      check_internal(d == md, "polynomial not homogeneous");
  }
  return d;
}

Polynomial wordlength_part(const Polynomial& p, std::size_t len) {
  Polynomial r;
  for (const auto& [m, c] : p)
    if (m.factors.size() == len) r.emplace(m, c);
  return r;
}

std::size_t max_wordlength(const Polynomial& p) {
  std::size_t w = 0;
  for (const auto& [m, c] : p) {
    (void)c;
    w = std::max(w, m.factors.size());
  }
  return w;
}

Polynomial apply_derivation(const GenTable& T, const std::map<int, Polynomial>& values,
                            int r, const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p) {
    int prefix_deg = 0;
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      int g = m.factors[i];
      auto it = values.find(g);
      if (it != values.end() && !poly_is_zero(it->second)) {
        int sign = ((r * prefix_deg) % 2 != 0) ? -1 : 1;
        // prefix * D(g) * suffix
        std::vector<int> rest;
        rest.reserve(m.factors.size() - 1);
        for (std::size_t j = 0; j < m.factors.size(); ++j)
          if (j != i) rest.push_back(m.factors[j]);
        for (const auto& [vm, vc] : it->second) {
          // Order: prefix, D(g)-monomial, suffix. The factors before position
          // i are exactly m.factors[0..i), so build that arrangement and
          // normalize.
          std::vector<int> factors;
          factors.reserve(rest.size() + vm.factors.size());
          factors.insert(factors.end(), m.factors.begin(),
                         m.factors.begin() + static_cast<std::ptrdiff_t>(i));
          factors.insert(factors.end(), vm.factors.begin(), vm.factors.end());
          factors.insert(factors.end(),
                         m.factors.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                         m.factors.end());
          NormResult n = normalize_monomial(T, std::move(factors));
          if (n.zero) continue;
          poly_add_term(out, n.mono, c * vc * sign * n.sign);
        }
      }
      prefix_deg += T.degree(g);
    }
  }
  return out;
}

Polynomial substitute(const GenTable& target, const std::vector<Polynomial>& images,
                      const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p) {
    Polynomial term = mono_poly(Monomial{}, Q(1));
    for (int g : m.factors) {
      check_internal(static_cast<std::size_t>(g) < images.size(),
                     "substitute: generator without image");
      term = poly_mul(target, term, images[static_cast<std::size_t>(g)]);
      if (poly_is_zero(term)) break;
    }
    poly_axpy(out, c, term);
  }
  return out;
}

std::string poly_to_string(const GenTable& T, const Polynomial& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p) {
    Q coef = c;
    if (first) {
      if (sgn(coef) < 0) {
        os << "-";
        coef = -coef;
      }
    } else {
      os << (sgn(coef) < 0 ? " - " : " + ");
      if (sgn(coef) < 0) coef = -coef;
    }
    first = false;
    bool need_coef = (coef != 1) || m.factors.empty();
    if (need_coef) os << q_str(coef);
    bool need_star = need_coef;
    for (int g : m.factors) {
      if (need_star) os << "*";
      os << T.name(g);
      need_star = true;
    }
  }
  return os.str();
}

namespace {
void enumerate_monomials(const GenTable& T, const std::vector<int>& usable,
                         std::size_t from, int remaining, std::vector<int>& cur,
                         std::vector<Monomial>& out) {
  if (remaining == 0) {
    out.push_back(Monomial{cur});
    return;
  }
  for (std::size_t i = from; i < usable.size(); ++i) {
    int g = usable[i];
    int d = T.degree(g);
    if (d > remaining) continue;
    if (T.odd(g) && !cur.empty() && cur.back() == g) continue;
    cur.push_back(g);
    // Odd generators may not repeat: advance `from` past g.
    enumerate_monomials(T, usable, T.odd(g) ? i + 1 : i, remaining - d, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<Monomial> monomial_basis(const GenTable& T, int degree,
                                     const std::vector<int>& allowed) {
  std::vector<int> usable;
  if (allowed.empty()) {
    usable.resize(static_cast<std::size_t>(T.size()));
    for (int i = 0; i < T.size(); ++i) usable[static_cast<std::size_t>(i)] = i;
  } else {
    usable = allowed;
    std::sort(usable.begin(), usable.end());
    usable.erase(std::unique(usable.begin(), usable.end()), usable.end());
  }
  std::vector<Monomial> out;
  if (degree < 0) return out;
  std::vector<int> cur;
  enumerate_monomials(T, usable, 0, degree, cur, out);
  std::sort(out.begin(), out.end(), MonoLess{});
  return out;
}

Vec poly_coords(const GenTable& T, const Polynomial& p,
                const std::vector<Monomial>& basis) {
  (void)T;
  std::map<Monomial, std::size_t, MonoLess> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  Vec v = zero_vec(basis.size());
  for (const auto& [m, c] : p) {
    auto it = index.find(m);
    check_internal(it != index.end(), "poly_coords: monomial outside basis");
    v[it->second] = c;
  }
  return v;
}

Polynomial coords_poly(const std::vector<Monomial>& basis, const Vec& v) {
  check_internal(basis.size() == v.size(), "coords_poly: size mismatch");
  Polynomial p;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (sgn(v[i]) != 0) p.emplace(basis[i], v[i]);
  return p;
}

FreeCDGA make_cdga(std::vector<Generator> gens, std::map<int, Polynomial> diff,
                   int cap, int dd_top) {
  FreeCDGA A;
  A.T = make_gen_table(std::move(gens));
  A.cap = cap;
  for (auto& [id, p] : diff) {
    check_internal(id >= 0 && id < A.T.size(), "differential on unknown generator");
    if (poly_is_zero(p)) continue;
    for (const auto& [m, c] : p) {
      (void)c;
      for (int f : m.factors)
        check_internal(f >= 0 && f < A.T.size(),
                       "differential uses unknown generator");
    }
    int dd = poly_degree(A.T, p);
    check_internal(dd == A.T.degree(id) + 1,
                   "d(" + A.T.name(id) + ") must raise degree by 1");
    A.diff.emplace(id, std::move(p));
  }
  for (const Generator& g : A.T.gens) {
    if (g.degree > dd_top) continue;
    Polynomial dd = A.d(A.d_gen(g.id));
    check_internal(poly_is_zero(dd),
                   "d*d != 0 on generator '" + g.name + "'");
  }
  return A;
}

}  // namespace qsm
