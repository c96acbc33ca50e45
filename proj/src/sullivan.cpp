#include "qsm/sullivan.hpp"

#include <algorithm>
#include <random>

#include "qsm/errors.hpp"

namespace qsm {

int MinimalModel::connectivity() const {
  int mind = 0;
  for (const Generator& g : A.T.gens)
    mind = mind == 0 ? g.degree : std::min(mind, g.degree);
  return mind == 0 ? A.cap - 1 : mind - 1;
}

int MinimalModel::top_generator_degree() const {
  int d = 0;
  for (const Generator& g : A.T.gens) d = std::max(d, g.degree);
  return d;
}

MinimalModel make_minimal(FreeCDGA A) {
  for (const Generator& g : A.T.gens)
    check_input(g.degree >= 2, "minimal Sullivan generator '" + g.name +
                                   "' must have degree >= 2");
  for (const auto& [id, p] : A.diff) {
    Polynomial lin = wordlength_part(p, 1);
    check_input(poly_is_zero(lin), "differential of '" + A.T.name(id) +
                                       "' has a linear part; model not minimal");
    Polynomial con = wordlength_part(p, 0);
    check_input(poly_is_zero(con), "differential of '" + A.T.name(id) +
                                       "' has a constant part");
  }
  return MinimalModel{std::move(A)};
}

Polynomial d1_gen(const MinimalModel& M, int id) {
  return wordlength_part(M.A.d_gen(id), 2);
}

int GradedSubspace::total_dim() const {
  int n = 0;
  for (const RowSpace& s : spaces) n += static_cast<int>(s.dim());
  return n;
}

bool GradedSubspace::contains_all() const {
  for (std::size_t d = 0; d < spaces.size(); ++d)
    if (spaces[d].dim() != gen_ids[d].size()) return false;
  return true;
}

namespace {

// Generators sorted into degree slots.
std::vector<std::vector<int>> degree_slots(const FreeCDGA& A, int& maxdeg) {
  maxdeg = 0;
  for (const Generator& g : A.T.gens) maxdeg = std::max(maxdeg, g.degree);
  std::vector<std::vector<int>> slots(static_cast<std::size_t>(maxdeg) + 1);
  for (const Generator& g : A.T.gens)
    slots[static_cast<std::size_t>(g.degree)].push_back(g.id);
  return slots;
}

// Polynomials of the basis vectors of a graded subspace, per degree.
std::vector<std::vector<Polynomial>> stage_polys(const FreeCDGA&,
                                                 const GradedSubspace& S) {
  std::vector<std::vector<Polynomial>> out(S.spaces.size());
  for (std::size_t d = 0; d < S.spaces.size(); ++d) {
    for (const Vec& row : S.spaces[d].rows()) {
      Polynomial p;
      for (std::size_t j = 0; j < row.size(); ++j)
        if (sgn(row[j]) != 0) {
          Monomial m;
          m.factors.push_back(S.gen_ids[d][j]);
          p.emplace(std::move(m), row[j]);
        }
      out[d].push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

D1Filtration d1_filtration(const MinimalModel& M) {
  const FreeCDGA& A = M.A;
  int maxdeg = 0;
  std::vector<std::vector<int>> slots = degree_slots(A, maxdeg);
  int total = A.T.size();

  // Quadratic values and the monomial bases they live in, per degree.
  auto quad_basis = [&](int deg) {
    std::vector<Monomial> all = monomial_basis(A.T, deg);
    std::vector<Monomial> out;
    for (const Monomial& m : all)
      if (m.factors.size() == 2) out.push_back(m);
    return out;
  };

  auto make_stage = [&]() {
    GradedSubspace S;
    S.spaces.reserve(static_cast<std::size_t>(maxdeg) + 1);
    S.gen_ids = slots;
    for (int d = 0; d <= maxdeg; ++d)
      S.spaces.emplace_back(slots[static_cast<std::size_t>(d)].size());
    return S;
  };

  D1Filtration F;
  // Stage 0: kernel of d1 per degree. Later stages: d1 x in Lambda^2 V_{i-1}.
  const GradedSubspace* prev = nullptr;
  for (int iter = 0; iter <= total + 1; ++iter) {
    GradedSubspace S = make_stage();
    std::vector<std::vector<Polynomial>> prev_polys;
    if (prev) prev_polys = stage_polys(A, *prev);
    for (int deg = 2; deg <= maxdeg; ++deg) {
      const std::vector<int>& ids = slots[static_cast<std::size_t>(deg)];
      if (ids.empty()) continue;
      std::vector<Monomial> qb = quad_basis(deg + 1);
      // Target subspace: Lambda^2(previous stage) in degree deg+1.
      RowSpace target(qb.size());
      if (prev) {
        for (std::size_t a = 0; a < prev_polys.size(); ++a)
          for (std::size_t b = a; b < prev_polys.size(); ++b) {
            if (static_cast<int>(a + b) != deg + 1) continue;
            for (const Polynomial& pa : prev_polys[a])
              for (const Polynomial& pb : prev_polys[b]) {
                Polynomial prod = poly_mul(A.T, pa, pb);
                if (!poly_is_zero(prod))
                  target.add(poly_coords(A.T, prod, qb));
              }
          }
      }
      // Kernel of gen -> residual(d1 gen).
      Mat rows(qb.size(), zero_vec(ids.size()));
      for (std::size_t j = 0; j < ids.size(); ++j) {
        Polynomial d1 = d1_gen(M, ids[j]);
        Vec r = target.residual(poly_coords(A.T, d1, qb));
        for (std::size_t i = 0; i < qb.size(); ++i) rows[i][j] = r[i];
      }
      for (const Vec& k : kernel_basis(rows, ids.size()))
        S.spaces[static_cast<std::size_t>(deg)].add(k);
    }
    bool full = S.contains_all();
    F.stages.push_back(std::move(S));
    if (full) break;
    if (F.stages.size() >= 2 &&
        F.stages[F.stages.size() - 1].total_dim() ==
            F.stages[F.stages.size() - 2].total_dim())
      fail_internal("d1 filtration failed to exhaust the generator space");
    prev = &F.stages.back();
  }
  check_internal(F.stages.back().contains_all(),
                 "d1 filtration failed to exhaust the generator space");
  F.depth = 0;
  for (std::size_t i = 1; i < F.stages.size(); ++i)
    if (F.stages[i].total_dim() > F.stages[i - 1].total_dim())
      F.depth = static_cast<int>(i);
  return F;
}

int d1_depth(const MinimalModel& M) { return d1_filtration(M).depth; }

GradedLie homotopy_lie(const MinimalModel& M) {
  const FreeCDGA& A = M.A;
  int maxdeg = 0;
  std::vector<std::vector<int>> slots = degree_slots(A, maxdeg);
  int liecap = std::max(1, maxdeg - 1);
  std::vector<int> dims(static_cast<std::size_t>(liecap) + 1, 0);
  for (int n = 1; n <= liecap; ++n)
    if (n + 1 <= maxdeg)
      dims[static_cast<std::size_t>(n)] =
          static_cast<int>(slots[static_cast<std::size_t>(n) + 1].size());
  GradedLie L(dims, liecap);
  // <v; sx> = (-1)^{deg v} sx(v): nonzero only when v is the generator dual
  // to x, giving (-1)^{deg v}.
  for (int p = 1; p <= liecap; ++p)
    for (int q = 1; q <= liecap; ++q) {
      if (p + q > liecap) continue;
      const auto& agens = slots[static_cast<std::size_t>(p) + 1];
      const auto& bgens = slots[static_cast<std::size_t>(q) + 1];
      const auto& cgens = slots[static_cast<std::size_t>(p + q) + 1];
      for (std::size_t ia = 0; ia < agens.size(); ++ia)
        for (std::size_t ib = 0; ib < bgens.size(); ++ib) {
          Vec coords = zero_vec(cgens.size());
          int va = agens[ia], vb = bgens[ib];
          for (std::size_t ic = 0; ic < cgens.size(); ++ic) {
            Polynomial d1 = d1_gen(M, cgens[ic]);
            Q pair(0);
            for (const auto& [m, coef] : d1) {
              int g = m.factors[0], h = m.factors[1];
              // <g^h; sx, sy> with x = dual(va), y = dual(vb).
              Q p1(0), p2(0);
              if (g == va && h == vb)
                p1 = Q(((A.T.degree(g) + A.T.degree(h)) % 2 != 0) ? -1 : 1);
              if (h == va && g == vb) {
                int e = A.T.degree(g) * A.T.degree(h) + A.T.degree(g) +
                        A.T.degree(h);
                p2 = Q((e % 2 != 0) ? -1 : 1);
              }
              pair += coef * (p1 + p2);
            }
            // s[x,y](v_c) = (-1)^{deg v_c} (-1)^{q+1} <d1 v_c; sx, sy>,
            // with q+1 = deg(v_b).
            int e = A.T.degree(cgens[ic]) + A.T.degree(vb);
            coords[ic] = Q((e % 2 != 0) ? -1 : 1) * pair;
          }
          L.set_bracket(p, static_cast<int>(ia), q, static_cast<int>(ib),
                        std::move(coords));
        }
    }
  L.validate();
  return L;
}

int whitehead_length(const MinimalModel& M) {
  GradedLie L = homotopy_lie(M);
  return std::max(0, L.max_bracket_length() - 1);
}

std::optional<int> d_length(const MinimalModel& M) {
  std::size_t minlen = 0;
  for (const auto& [id, p] : M.A.diff) {
    (void)id;
    for (const auto& [m, c] : p) {
      (void)c;
      if (minlen == 0 || m.factors.size() < minlen) minlen = m.factors.size();
    }
  }
  if (minlen == 0) return std::nullopt;  // d = 0: infinite
  return 1 + static_cast<int>(minlen) - 1;  // d_i raises wordlength by i
}

bool kotani_predicts_free(int cup_length_of_x, std::optional<int> dlen) {
  if (!dlen.has_value()) return true;
  return *dlen > cup_length_of_x;
}

bool check_indecomposables_match_v0(const MinimalModel& M) {
  GradedLie L = homotopy_lie(M);
  D1Filtration F = d1_filtration(M);
  const GradedSubspace& V0 = F.stages.front();
  std::vector<RowSpace> gamma2 = L.lcs(2);
  for (int n = 1; n <= L.cap(); ++n) {
    int indec = L.dim(n) - static_cast<int>(gamma2[static_cast<std::size_t>(n)].dim());
    int v0 = 0;
    if (n + 1 < static_cast<int>(V0.spaces.size()))
      v0 = static_cast<int>(V0.spaces[static_cast<std::size_t>(n) + 1].dim());
    if (indec != v0) return false;
  }
  return true;
}

bool check_d1_stage_decomposition(const MinimalModel& M) {
  const FreeCDGA& A = M.A;
  D1Filtration F = d1_filtration(M);
  std::vector<std::vector<std::vector<Polynomial>>> polys;
  for (const GradedSubspace& S : F.stages) polys.push_back(stage_polys(A, S));
  for (std::size_t s = 1; s < F.stages.size(); ++s) {
    // u in V_s: d1 u must lie in V_0 ^ V_{s-1} + Lambda^2 V_{s-2}.
    const auto& Vs = polys[s];
    const auto& V0 = polys[0];
    const auto& Vs1 = polys[s - 1];
    for (std::size_t deg = 2; deg < Vs.size(); ++deg) {
      for (const Polynomial& u : Vs[deg]) {
        Polynomial d1u;
        for (const auto& [m, c] : u) {
          Polynomial t = d1_gen(M, m.factors[0]);
          poly_axpy(d1u, c, t);
        }
        if (poly_is_zero(d1u)) continue;
        int tdeg = static_cast<int>(deg) + 1;
        std::vector<Monomial> qb;
        for (const Monomial& m : monomial_basis(A.T, tdeg))
          if (m.factors.size() == 2) qb.push_back(m);
        RowSpace target(qb.size());
        auto add_products = [&](const std::vector<std::vector<Polynomial>>& X,
                                const std::vector<std::vector<Polynomial>>& Y) {
          for (std::size_t a = 0; a < X.size(); ++a)
            for (std::size_t b = 0; b < Y.size(); ++b) {
              if (static_cast<int>(a + b) != tdeg) continue;
              for (const Polynomial& pa : X[a])
                for (const Polynomial& pb : Y[b]) {
                  Polynomial prod = poly_mul(A.T, pa, pb);
                  if (!poly_is_zero(prod)) target.add(poly_coords(A.T, prod, qb));
                }
            }
        };
        add_products(V0, Vs1);
        if (s >= 2) add_products(polys[s - 2], polys[s - 2]);
        if (!target.contains(poly_coords(A.T, d1u, qb))) return false;
      }
    }
  }
  return true;
}

MinimalModel random_minimal_model(std::uint64_t seed, int max_gens,
                                  int max_degree, int cap) {
  check_input(max_gens >= 1 && max_degree >= 2, "degenerate random model spec");
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  int n = pick(1, max_gens);
  std::vector<int> degrees;
  for (int i = 0; i < n; ++i) degrees.push_back(pick(2, max_degree));
  std::sort(degrees.begin(), degrees.end());
  std::vector<Generator> gens;
  for (int i = 0; i < n; ++i)
    gens.push_back(Generator{i, "v" + std::to_string(i + 1), degrees[static_cast<std::size_t>(i)]});
  GenTable T = make_gen_table(gens);
  std::map<int, Polynomial> diff;
  for (int i = 0; i < n; ++i) {
    std::vector<int> earlier;
    for (int j = 0; j < i; ++j) earlier.push_back(j);
    if (earlier.empty()) continue;
    std::vector<Monomial> cands;
    for (const Monomial& m : monomial_basis(T, degrees[static_cast<std::size_t>(i)] + 1, earlier))
      if (m.factors.size() >= 2) cands.push_back(m);
    if (cands.empty()) continue;
    // d of each candidate must cancel: sample from the kernel.
    std::vector<Monomial> target =
        monomial_basis(T, degrees[static_cast<std::size_t>(i)] + 2);
    Mat rows(target.size(), zero_vec(cands.size()));
    for (std::size_t j = 0; j < cands.size(); ++j) {
      Polynomial dm = apply_derivation(T, diff, 1, mono_poly(cands[j], Q(1)));
      Vec col = poly_coords(T, dm, target);
      for (std::size_t r = 0; r < target.size(); ++r) rows[r][j] = col[r];
    }
    std::vector<Vec> kern = kernel_basis(rows, cands.size());
    if (kern.empty()) continue;
    if (pick(0, 2) == 0) continue;  // keep some differentials zero
    Vec combo = zero_vec(cands.size());
    bool any = false;
    for (const Vec& k : kern) {
      if (pick(0, 1) == 0) continue;
      int c = pick(1, 2) * (pick(0, 1) == 0 ? 1 : -1);
      vec_axpy(combo, Q(c), k);
      any = true;
    }
    if (!any) vec_axpy(combo, Q(1), kern.front());
    Polynomial val = coords_poly(cands, combo);
    if (!poly_is_zero(val)) diff.emplace(i, std::move(val));
  }
  return make_minimal(make_cdga(gens, std::move(diff), cap));
}

}  // namespace qsm
