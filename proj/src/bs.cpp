#include "qsm/bs.hpp"

#include <algorithm>

#include "qsm/errors.hpp"

namespace qsm {

namespace {

BPlus::Coords clean_coords(const BPlus::Coords& in) {
  std::map<int, Q> acc;
  for (const auto& [id, c] : in) acc[id] += c;
  BPlus::Coords out;
  for (const auto& [id, c] : acc)
    if (sgn(c) != 0) out.emplace_back(id, c);
  return out;
}

}  // namespace

BPlus::BPlus(std::vector<BElement> elems, std::map<int, Coords> diff,
             std::map<int, Tensor> coproduct)
    : elems_(std::move(elems)) {
  for (const BElement& e : elems_) {
    check_input(e.degree >= 1, "coalgebra element '" + e.name +
                                   "' must have positive degree");
    top_ = std::max(top_, e.degree);
  }
  at_degree_.assign(static_cast<std::size_t>(top_) + 1, {});
  pos_.assign(elems_.size(), 0);
  for (int id = 0; id < size(); ++id) {
    auto& slot = at_degree_[static_cast<std::size_t>(elems_[static_cast<std::size_t>(id)].degree)];
    pos_[static_cast<std::size_t>(id)] = slot.size();
    slot.push_back(id);
  }
  for (auto& [id, coords] : diff) {
    check_internal(id >= 0 && id < size(), "differential on unknown element");
    coords = clean_coords(coords);
    for (const auto& [tgt, c] : coords) {
      (void)c;
      check_internal(tgt >= 0 && tgt < size(), "differential hits unknown element");
      check_internal(degree(tgt) == degree(id) - 1,
                     "coalgebra differential must lower degree by one");
    }
    if (!coords.empty()) diff_.emplace(id, coords);
  }
  // d o d = 0.
  for (const auto& [id, coords] : diff_) {
    (void)id;
    std::map<int, Q> acc;
    for (const auto& [mid, c] : coords)
      for (const auto& [tgt, c2] : d_coords(mid)) acc[tgt] += c * c2;
    for (const auto& [tgt, c] : acc) {
      (void)tgt;
      check_internal(sgn(c) == 0, "coalgebra differential does not square to zero");
    }
  }
  for (auto& [id, t] : coproduct) {
    check_internal(id >= 0 && id < size(), "coproduct on unknown element");
    Tensor clean;
    for (const auto& [tuple, c] : t) {
      if (sgn(c) == 0) continue;
      check_internal(tuple.size() == 2, "stored coproduct must have two slots");
      int dsum = 0;
      for (int comp : tuple) {
        check_internal(comp >= 0 && comp < size(), "coproduct hits unknown element");
        check_internal(degree(comp) >= 1, "coproduct component of degree < 1");
        dsum += degree(comp);
      }
      check_internal(dsum == degree(id), "coproduct is not degree-preserving");
      clean.emplace(tuple, c);
    }
    if (!clean.empty()) delta2_.emplace(id, std::move(clean));
  }
  abc_.resize(static_cast<std::size_t>(top_) + 1);
  abc_ready_.assign(static_cast<std::size_t>(top_) + 1, false);
  dsolver_.resize(static_cast<std::size_t>(top_) + 2);
}

int BPlus::degree(int id) const {
  check_internal(id >= 0 && id < size(), "coalgebra element id out of range");
  return elems_[static_cast<std::size_t>(id)].degree;
}

const std::string& BPlus::name(int id) const {
  check_internal(id >= 0 && id < size(), "coalgebra element id out of range");
  return elems_[static_cast<std::size_t>(id)].name;
}

const std::vector<int>& BPlus::at_degree(int degree) const {
  static const std::vector<int> kEmpty;
  if (degree < 1 || degree > top_) return kEmpty;
  return at_degree_[static_cast<std::size_t>(degree)];
}

std::size_t BPlus::pos(int id) const {
  check_internal(id >= 0 && id < size(), "coalgebra element id out of range");
  return pos_[static_cast<std::size_t>(id)];
}

const BPlus::Coords& BPlus::d_coords(int id) const {
  static const Coords kEmpty;
  auto it = diff_.find(id);
  return it == diff_.end() ? kEmpty : it->second;
}

const BPlus::Tensor& BPlus::coproduct(int id, int m) const {
  check_internal(m >= 2, "reduced coproduct needs at least two slots");
  static const Tensor kEmpty;
  if (m == 2) {
    auto it = delta2_.find(id);
    return it == delta2_.end() ? kEmpty : it->second;
  }
  auto key = std::make_pair(id, m);
  auto memo = delta_memo_.find(key);
  if (memo != delta_memo_.end()) return memo->second;
  Tensor out;
  for (const auto& [tuple, c] : coproduct(id, m - 1)) {
    auto it = delta2_.find(tuple[0]);
    if (it == delta2_.end()) continue;
    for (const auto& [pair2, c2] : it->second) {
      std::vector<int> t;
      t.reserve(tuple.size() + 1);
      t.push_back(pair2[0]);
      t.push_back(pair2[1]);
      for (std::size_t i = 1; i < tuple.size(); ++i) t.push_back(tuple[i]);
      Q& slot = out[t];
      slot += c * c2;
      if (sgn(slot) == 0) out.erase(t);
    }
  }
  return delta_memo_.emplace(key, std::move(out)).first->second;
}

Mat BPlus::d_matrix(int degree) const {
  const std::vector<int>& cols = at_degree(degree);
  const std::vector<int>& rows = at_degree(degree - 1);
  Mat m(rows.size(), zero_vec(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [tgt, c] : d_coords(cols[j])) m[pos(tgt)][j] = c;
  return m;
}

const BPlus::ABCBasis& BPlus::abc(int degree) const {
  check_internal(degree >= 1 && degree <= top_, "abc: degree out of range");
  if (abc_ready_[static_cast<std::size_t>(degree)])
    return abc_[static_cast<std::size_t>(degree)];
  ABCBasis out;
  std::size_t nd = at_degree(degree).size();
  RowSpace bspace(nd);
  for (int up : at_degree(degree + 1)) {
    const Coords& d = d_coords(up);
    if (d.empty()) continue;
    Vec row = zero_vec(nd);
    for (const auto& [tgt, c] : d) row[pos(tgt)] = c;
    bspace.add(row);
  }
  for (const Vec& row : bspace.rows()) out.b.push_back(row);
  if (!out.b.empty()) {
    if (!dsolver_[static_cast<std::size_t>(degree + 1)])
      dsolver_[static_cast<std::size_t>(degree + 1)] = std::make_shared<Solver>(
          d_matrix(degree + 1), at_degree(degree + 1).size());
    for (const Vec& b : out.b) {
      std::optional<Vec> pre =
          dsolver_[static_cast<std::size_t>(degree + 1)]->solve(b);
      check_internal(pre.has_value(), "boundary without preimage");
      out.a.push_back(*pre);
    }
  }
  Mat down = d_matrix(degree);
  std::vector<Vec> kern = kernel_basis(down, nd);
  RowSpace cspace(nd);
  for (const Vec& k : kern) cspace.add(bspace.residual(k));
  for (const Vec& row : cspace.rows()) out.c.push_back(vec_scale(Q(-1), row));
  abc_[static_cast<std::size_t>(degree)] = std::move(out);
  abc_ready_[static_cast<std::size_t>(degree)] = true;
  return abc_[static_cast<std::size_t>(degree)];
}

int BPlus::homology_dim(int degree) const {
  if (degree < 1 || degree > top_) return 0;
  return static_cast<int>(abc(degree).c.size());
}

Vec BPlus::c_vec(int degree, int idx) const {
  const ABCBasis& s = abc(degree);
  check_internal(idx >= 0 && idx < static_cast<int>(s.c.size()),
                 "homology representative index out of range");
  return s.c[static_cast<std::size_t>(idx)];
}

int ChainBPlus::id_of(const Monomial& w) const {
  auto it = id_of_word.find(w);
  check_internal(it != id_of_word.end(),
                 "chain word is not part of the truncated slice");
  return it->second;
}

ChainBPlus chain_bplus(std::shared_ptr<ChainCoalgebra> C, int T,
                       int prefix_gens) {
  ChainBPlus out;
  out.C = C;
  out.TC = std::make_shared<TruncatedChains>(C, T, prefix_gens);
  std::vector<BElement> elems;
  for (int n = 2; n <= T; ++n)
    for (const Monomial& w : out.TC->kept(n)) {
      int id = static_cast<int>(elems.size());
      std::string nm;
      for (std::size_t i = 0; i < w.factors.size(); ++i) {
        if (i) nm += "^";
        nm += C->letters().name(w.factors[i]);
      }
      elems.push_back(BElement{n, nm});
      out.word_of_id.push_back(w);
      out.id_of_word.emplace(w, id);
    }
  std::map<int, BPlus::Coords> diff;
  std::map<int, BPlus::Tensor> cop;
  for (int id = 0; id < static_cast<int>(elems.size()); ++id) {
    const Monomial& w = out.word_of_id[static_cast<std::size_t>(id)];
    Polynomial dw = C->d_word(w);
    BPlus::Coords dc;
    for (const auto& [m, c] : dw) dc.emplace_back(out.id_of(m), c);
    if (!dc.empty()) diff.emplace(id, std::move(dc));
    BPlus::Tensor t;
    for (const auto& [pair2, c] : C->reduced_coproduct(w))
      t.emplace(std::vector<int>{out.id_of(pair2.first), out.id_of(pair2.second)}, c);
    if (!t.empty()) cop.emplace(id, std::move(t));
  }
  out.B = std::make_shared<BPlus>(std::move(elems), std::move(diff), std::move(cop));
  return out;
}

int BSModel::pair_gen(int ygen, int belem) const {
  auto it = gen_of_pair.find({ygen, belem});
  check_internal(it != gen_of_pair.end(), "unknown pair generator");
  return it->second;
}

Polynomial BSModel::pair_poly(int ygen, int bdegree, const Vec& coords) const {
  const std::vector<int>& ids = B->at_degree(bdegree);
  check_internal(coords.size() == ids.size(), "pair_poly: coordinate mismatch");
  Polynomial p;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (sgn(coords[i]) != 0) {
      Monomial m;
      m.factors.push_back(pair_gen(ygen, ids[i]));
      poly_add_term(p, m, coords[i]);
    }
  return p;
}

BSModel based_bs_model(const MinimalModel& Y, std::shared_ptr<BPlus> B,
                       int cap) {
  BSModel M{Y, B, FreeCDGA{}, {}, {}};
  std::vector<Generator> gens;
  for (const Generator& v : Y.A.T.gens)
    for (int e = 0; e < B->size(); ++e) {
      int deg = v.degree - B->degree(e);
      check_input(deg >= 1,
                  "pair generator " + v.name + "{" + B->name(e) +
                      "} has degree <= 0; the target is not connected enough "
                      "for this source");
      int id = static_cast<int>(gens.size());
      gens.push_back(Generator{id, v.name + "{" + B->name(e) + "}", deg});
      M.pair_of_gen.emplace_back(v.id, e);
      M.gen_of_pair.emplace(std::make_pair(v.id, e), id);
    }
  GenTable T = make_gen_table(gens);
  std::map<int, Polynomial> diff;
  for (int id = 0; id < static_cast<int>(gens.size()); ++id) {
    auto [vid, e] = M.pair_of_gen[static_cast<std::size_t>(id)];
    int vdeg = Y.A.T.degree(vid);
    Polynomial P;
    // Linear part: (-1)^{|v|} v (x) d beta.
    Q sigma(vdeg % 2 != 0 ? -1 : 1);
    for (const auto& [e2, c] : B->d_coords(e)) {
      Monomial m;
      m.factors.push_back(M.pair_gen(vid, e2));
      poly_add_term(P, m, sigma * c);
    }
    // Coproduct part, one wordlength of dv at a time.
    Polynomial dv = Y.A.d_gen(vid);
    for (int m = 2; m <= static_cast<int>(max_wordlength(dv)); ++m) {
      Polynomial part = wordlength_part(dv, m);
      if (poly_is_zero(part)) continue;
      const BPlus::Tensor& cop = B->coproduct(e, m);
      if (cop.empty()) continue;
      for (const auto& [mono, ct] : part) {
        const std::vector<int>& g = mono.factors;
        // suffix[s] = |g_{s+1}| + ... + |g_m|
        std::vector<int> suffix(g.size() + 1, 0);
        for (std::size_t s = g.size(); s-- > 0;)
          suffix[s] = suffix[s + 1] + Y.A.T.degree(g[s]);
        for (const auto& [tuple, kappa] : cop) {
          int eps = 0;
          std::vector<int> factors;
          factors.reserve(g.size());
          for (std::size_t s = 0; s < g.size(); ++s) {
            eps += B->degree(tuple[s]) * suffix[s + 1];
            factors.push_back(M.pair_gen(g[s], tuple[s]));
          }
          NormResult nr = normalize_monomial(T, factors);
          if (nr.zero) continue;
          Q coeff = ct * kappa * nr.sign;
          if (eps % 2 != 0) coeff = -coeff;
          poly_add_term(P, nr.mono, coeff);
        }
      }
    }
    if (!poly_is_zero(P)) diff.emplace(id, std::move(P));
  }
  M.A = make_cdga(gens, std::move(diff), cap);
  return M;
}

}  // namespace qsm
