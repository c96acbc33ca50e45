#include "qsm/reduce.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <utility>

#include "qsm/errors.hpp"

namespace qsm {

namespace {

enum class Kind { W, U, N };

struct Prov {
  Kind kind;
  int ygen;
  int bdeg;  // abc stage degree n
  int idx;   // c index (W) or pair index (U/N)
};

}  // namespace

ReducedModel minimal_reduce(const BSModel& BS) {
  const BPlus& B = *BS.B;
  const FreeCDGA& A = BS.A;
  const GenTable& YT = BS.Y.A.T;
  int top = B.top_degree();

  // Target generators by (degree, declaration).
  std::vector<int> order;
  for (const Generator& g : YT.gens) order.push_back(g.id);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return YT.degree(a) < YT.degree(b); });

  // Declare the new generators stage by stage.
  std::vector<Generator> ngens;
  std::vector<Prov> prov;
  std::map<std::pair<int, int>, std::vector<int>> wid, uid, nid;
  int nw = 0, nu = 0;
  for (int v : order) {
    int vdeg = YT.degree(v);
    for (int n = 1; n <= top; ++n) {
      const BPlus::ABCBasis& S = B.abc(n);
      auto key = std::make_pair(v, n);
      for (std::size_t j = 0; j < S.c.size(); ++j) {
        int id = static_cast<int>(ngens.size());
        ngens.push_back(Generator{id, "w" + std::to_string(++nw), vdeg - n});
        prov.push_back(Prov{Kind::W, v, n, static_cast<int>(j)});
        wid[key].push_back(id);
      }
      for (std::size_t k = 0; k < S.b.size(); ++k) {
        int id = static_cast<int>(ngens.size());
        ++nu;
        ngens.push_back(Generator{id, "u" + std::to_string(nu), vdeg - n - 1});
        prov.push_back(Prov{Kind::U, v, n, static_cast<int>(k)});
        uid[key].push_back(id);
        id = static_cast<int>(ngens.size());
        ngens.push_back(Generator{id, "n" + std::to_string(nu), vdeg - n});
        prov.push_back(Prov{Kind::N, v, n, static_cast<int>(k)});
        nid[key].push_back(id);
      }
    }
  }
  GenTable NT = make_gen_table(ngens);

  // Contraction data: h(N) = U, extended as an odd derivation of degree -1.
  std::map<int, Polynomial> hvals;
  for (const auto& [key, ids] : nid)
    for (std::size_t k = 0; k < ids.size(); ++k) {
      Monomial m;
      m.factors.push_back(uid.at(key)[k]);
      hvals.emplace(ids[k], mono_poly(m, Q(1)));
    }

  // Change-of-basis solver per coalgebra degree: columns [a | b | c], where
  // the a's at degree m are the preimage vectors of abc(m-1).
  std::vector<std::shared_ptr<Solver>> basis_solver(static_cast<std::size_t>(top) + 1);
  std::vector<std::size_t> na_at(static_cast<std::size_t>(top) + 1, 0),
      nb_at(static_cast<std::size_t>(top) + 1, 0);
  for (int m = 1; m <= top; ++m) {
    std::size_t dim = B.at_degree(m).size();
    std::vector<Vec> cols;
    if (m >= 2)
      for (const Vec& a : B.abc(m - 1).a) cols.push_back(a);
    na_at[static_cast<std::size_t>(m)] = cols.size();
    const BPlus::ABCBasis& S = B.abc(m);
    nb_at[static_cast<std::size_t>(m)] = S.b.size();
    for (const Vec& b : S.b) cols.push_back(b);
    for (const Vec& c : S.c) cols.push_back(c);
    check_internal(cols.size() == dim, "homology splitting basis has wrong size");
    Mat M(dim, zero_vec(dim));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t r = 0; r < dim; ++r) M[r][j] = cols[j][r];
    basis_solver[static_cast<std::size_t>(m)] = std::make_shared<Solver>(M, dim);
    check_internal(basis_solver[static_cast<std::size_t>(m)]->rank() ==
                       static_cast<int>(dim),
                   "homology splitting basis is not a basis");
  }

  std::map<int, Polynomial> ndiff;       // new-model differential
  std::vector<Polynomial> psi(ngens.size());  // new gen -> poly in A
  // v (x) (splitting basis vector) expressed in the new model.
  std::map<std::pair<int, int>, std::vector<Polynomial>> expr_a, expr_b, expr_c;
  std::vector<Polynomial> phi_img(static_cast<std::size_t>(A.T.size()));
  std::vector<bool> phi_ready(static_cast<std::size_t>(A.T.size()), false);

  auto phi_of = [&](int agen) -> const Polynomial& {
    if (!phi_ready[static_cast<std::size_t>(agen)]) {
      auto [v, e] = BS.pair_of_gen[static_cast<std::size_t>(agen)];
      int m = B.degree(e);
      Vec u = unit_vec(B.at_degree(m).size(), B.pos(e));
      std::optional<Vec> coords = basis_solver[static_cast<std::size_t>(m)]->solve(u);
      check_internal(coords.has_value(), "splitting basis decomposition failed");
      Polynomial out;
      std::size_t na = na_at[static_cast<std::size_t>(m)];
      std::size_t nb = nb_at[static_cast<std::size_t>(m)];
      for (std::size_t i = 0; i < coords->size(); ++i) {
        const Q& c = (*coords)[i];
        if (sgn(c) == 0) continue;
        const Polynomial* part = nullptr;
        if (i < na) {
          auto it = expr_a.find({v, m - 1});
          check_internal(it != expr_a.end(), "stage used before it was built");
          part = &it->second[i];
        } else if (i < na + nb) {
          auto it = expr_b.find({v, m});
          check_internal(it != expr_b.end(), "stage used before it was built");
          part = &it->second[i - na];
        } else {
          auto it = expr_c.find({v, m});
          check_internal(it != expr_c.end(), "stage used before it was built");
          part = &it->second[i - na - nb];
        }
        poly_axpy(out, c, *part);
      }
      phi_img[static_cast<std::size_t>(agen)] = std::move(out);
      phi_ready[static_cast<std::size_t>(agen)] = true;
    }
    return phi_img[static_cast<std::size_t>(agen)];
  };
  auto phi_sub = [&](const Polynomial& p) {
    std::vector<Polynomial> images(static_cast<std::size_t>(A.T.size()));
    for (const auto& [m, c] : p) {
      (void)c;
      for (int f : m.factors) images[static_cast<std::size_t>(f)] = phi_of(f);
    }
    return substitute(NT, images, p);
  };
  auto dnew = [&](const Polynomial& p) {
    return apply_derivation(NT, ndiff, 1, p);
  };

  for (int v : order) {
    int vdeg = YT.degree(v);
    Q sigma(vdeg % 2 != 0 ? -1 : 1);
    for (int n = 1; n <= top; ++n) {
      const BPlus::ABCBasis& S = B.abc(n);
      auto key = std::make_pair(v, n);
      std::vector<Polynomial> ea, eb, ec;
      for (std::size_t k = 0; k < S.b.size(); ++k) {
        int U = uid.at(key)[k], N = nid.at(key)[k];
        Monomial mU, mN;
        mU.factors.push_back(U);
        mN.factors.push_back(N);
        ndiff[U] = mono_poly(mN, Q(1));
        psi[static_cast<std::size_t>(U)] = BS.pair_poly(v, n + 1, S.a[k]);
        psi[static_cast<std::size_t>(N)] = A.d(psi[static_cast<std::size_t>(U)]);
        ea.push_back(mono_poly(mU, Q(1)));
        // delta(v (x) a_k) = sigma (v (x) b_k) + Theta.
        Polynomial theta = psi[static_cast<std::size_t>(N)];
        poly_axpy(theta, -sigma, BS.pair_poly(v, n, S.b[k]));
        Polynomial e = mono_poly(mN, Q(1));
        poly_axpy(e, Q(-1), phi_sub(theta));
        eb.push_back(poly_scale(sigma, e));
      }
      expr_a.emplace(key, std::move(ea));
      expr_b.emplace(key, std::move(eb));
      for (std::size_t j = 0; j < S.c.size(); ++j) {
        int Wg = wid.at(key)[j];
        Monomial mW;
        mW.factors.push_back(Wg);
        Polynomial cpoly = BS.pair_poly(v, n, S.c[j]);
        Polynomial J = A.d(cpoly);
        check_internal(poly_is_zero(wordlength_part(J, 1)),
                       "differential of a homology pair has a linear part");
        Polynomial Jnew = phi_sub(J);
        Polynomial piJ, rhoJ;
        for (const auto& [m, c] : Jnew) {
          bool pure = true;
          for (int f : m.factors)
            if (prov[static_cast<std::size_t>(f)].kind != Kind::W) pure = false;
          poly_add_term(pure ? piJ : rhoJ, m, c);
        }
        check_internal(poly_is_zero(dnew(rhoJ)), "correction term is not closed");
        // Contract: xi = h(E^{-1} rhoJ) with E = (u,n)-letter count.
        Polynomial scaled;
        for (const auto& [m, c] : rhoJ) {
          int letters = 0;
          for (int f : m.factors)
            if (prov[static_cast<std::size_t>(f)].kind != Kind::W) ++letters;
          check_internal(letters > 0, "pure term in the correction part");
          poly_add_term(scaled, m, c / Q(letters));
        }
        Polynomial xi = apply_derivation(NT, hvals, -1, scaled);
        Polynomial back = dnew(xi);
        poly_axpy(back, Q(-1), rhoJ);
        check_internal(poly_is_zero(back), "contraction failed to invert");
        if (!poly_is_zero(piJ)) ndiff[Wg] = piJ;
        Polynomial im = cpoly;
        poly_axpy(im, Q(-1), substitute(A.T, psi, xi));
        psi[static_cast<std::size_t>(Wg)] = std::move(im);
        Polynomial e = mono_poly(mW, Q(1));
        poly_axpy(e, Q(1), xi);
        ec.push_back(std::move(e));
      }
      expr_c.emplace(key, std::move(ec));
    }
  }

  // Verification: phi is a dga map on the pair model.
  for (int g = 0; g < static_cast<int>(A.T.size()); ++g) {
    Monomial mg;
    mg.factors.push_back(g);
    Polynomial lhs = dnew(phi_of(g));
    poly_axpy(lhs, Q(-1), phi_sub(A.d(mono_poly(mg, Q(1)))));
    check_internal(poly_is_zero(lhs),
                   "coordinate change fails to commute with the differentials");
  }
  // Verification: psi is a dga map and phi is a retraction onto the new model.
  for (int g = 0; g < static_cast<int>(ngens.size()); ++g) {
    Polynomial lhs = A.d(psi[static_cast<std::size_t>(g)]);
    auto it = ndiff.find(g);
    Polynomial rhs =
        it == ndiff.end() ? Polynomial{} : substitute(A.T, psi, it->second);
    poly_axpy(lhs, Q(-1), rhs);
    check_internal(poly_is_zero(lhs),
                   "reduction witness fails to commute with the differentials");
    Monomial mg;
    mg.factors.push_back(g);
    Polynomial idchk = phi_sub(psi[static_cast<std::size_t>(g)]);
    poly_axpy(idchk, Q(-1), mono_poly(mg, Q(1)));
    check_internal(poly_is_zero(idchk),
                   "reduction witness is not a retraction");
  }

  // Extract the surviving model on the w generators.
  ReducedModel out;
  std::vector<int> rid(ngens.size(), -1);
  std::vector<Generator> rgens;
  for (int g = 0; g < static_cast<int>(ngens.size()); ++g)
    if (prov[static_cast<std::size_t>(g)].kind == Kind::W) {
      rid[static_cast<std::size_t>(g)] = static_cast<int>(rgens.size());
      rgens.push_back(Generator{static_cast<int>(rgens.size()),
                                ngens[static_cast<std::size_t>(g)].name,
                                ngens[static_cast<std::size_t>(g)].degree});
      out.info.push_back(ReducedGenInfo{prov[static_cast<std::size_t>(g)].ygen,
                                        prov[static_cast<std::size_t>(g)].bdeg,
                                        prov[static_cast<std::size_t>(g)].idx});
    }
  auto remap = [&](const Polynomial& p) {
    Polynomial q;
    for (const auto& [m, c] : p) {
      Monomial m2;
      for (int f : m.factors) {
        check_internal(rid[static_cast<std::size_t>(f)] >= 0,
                       "surviving differential uses an eliminated generator");
        m2.factors.push_back(rid[static_cast<std::size_t>(f)]);
      }
      q.emplace(std::move(m2), c);
    }
    return q;
  };
  std::map<int, Polynomial> rdiff;
  for (const auto& [g, p] : ndiff)
    if (prov[static_cast<std::size_t>(g)].kind == Kind::W) {
      check_internal(poly_is_zero(wordlength_part(p, 1)),
                     "reduced differential is not decomposable");
      rdiff.emplace(rid[static_cast<std::size_t>(g)], remap(p));
    }
  out.R = make_cdga(rgens, std::move(rdiff), A.cap);
  for (int g = 0; g < static_cast<int>(ngens.size()); ++g)
    if (rid[static_cast<std::size_t>(g)] >= 0)
      out.psi.emplace(rid[static_cast<std::size_t>(g)],
                      psi[static_cast<std::size_t>(g)]);
  // Retraction images: surviving part of each pair generator's expression.
  out.retract.resize(static_cast<std::size_t>(A.T.size()));
  for (int g = 0; g < static_cast<int>(A.T.size()); ++g) {
    Polynomial img;
    for (const auto& [m, c] : phi_of(g)) {
      bool pure = true;
      for (int f : m.factors)
        if (prov[static_cast<std::size_t>(f)].kind != Kind::W) pure = false;
      if (pure) poly_add_term(img, m, c);
    }
    out.retract[static_cast<std::size_t>(g)] = remap(img);
  }
  out.ranks.assign(static_cast<std::size_t>(out.R.cap) + 1, 0);
  for (const Generator& g : out.R.T.gens)
    if (g.degree <= out.R.cap) ++out.ranks[static_cast<std::size_t>(g.degree)];
  return out;
}

}  // namespace qsm
