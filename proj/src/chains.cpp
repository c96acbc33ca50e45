#include "qsm/chains.hpp"

#include <algorithm>
#include <functional>

#include "qsm/errors.hpp"

namespace qsm {

ChainCoalgebra::ChainCoalgebra(FreeDGL L, int cap) : L_(std::move(L)), cap_(cap) {
  check_internal(cap_ >= 0, "chains cap must be >= 0");
  check_internal(L_.cap() >= cap_ - 1,
                 "chain coalgebra needs the Lie basis through degree cap-1");
  std::vector<Generator> letters;
  int maxlie = std::min(L_.cap(), cap_ - 1);
  letter_by_pos_.assign(static_cast<std::size_t>(std::max(maxlie, 0)) + 1, {});
  for (int d = 1; d <= maxlie; ++d) {
    for (int i = 0; i < L_.lie->dim(d); ++i) {
      int id = static_cast<int>(letters.size());
      letters.push_back(Generator{
          id, "s" + bword_to_string(L_.lie->basis_word(d, i), L_.gens()), d + 1});
      letter_by_pos_[static_cast<std::size_t>(d)].push_back(id);
      lie_of_letter_.emplace_back(d, i);
    }
  }
  letters_ = make_gen_table(std::move(letters));
  words_.resize(static_cast<std::size_t>(cap_) + 1);
  words_ready_.assign(static_cast<std::size_t>(cap_) + 1, false);
}

int ChainCoalgebra::letter_of(int lie_degree, int lie_idx) const {
  check_internal(lie_degree >= 1 &&
                     lie_degree < static_cast<int>(letter_by_pos_.size()),
                 "letter_of: lie degree out of range");
  const auto& row = letter_by_pos_[static_cast<std::size_t>(lie_degree)];
  check_internal(lie_idx >= 0 && lie_idx < static_cast<int>(row.size()),
                 "letter_of: lie index out of range");
  return row[static_cast<std::size_t>(lie_idx)];
}

std::pair<int, int> ChainCoalgebra::lie_of_letter(int letter) const {
  return lie_of_letter_[static_cast<std::size_t>(letter)];
}

Polynomial ChainCoalgebra::suspend(const LieElement& e) const {
  Polynomial p;
  for (const auto& [idx, c] : e.coords) {
    Monomial m;
    m.factors.push_back(letter_of(e.degree, idx));
    p.emplace(std::move(m), c);
  }
  return p;
}

const std::vector<Monomial>& ChainCoalgebra::words(int degree) const {
  check_internal(degree >= 0 && degree <= cap_, "words: degree out of range");
  if (!words_ready_[static_cast<std::size_t>(degree)]) {
    words_[static_cast<std::size_t>(degree)] = monomial_basis(letters_, degree);
    words_ready_[static_cast<std::size_t>(degree)] = true;
  }
  return words_[static_cast<std::size_t>(degree)];
}

Polynomial ChainCoalgebra::d_word(const Monomial& w) const {
  Polynomial out;
  const std::vector<int>& f = w.factors;
  const std::size_t k = f.size();
  // Vertical part: d_v(sx1...sxk) = -sum_i (-1)^{n_i} sx1...s(d xi)...sxk.
  int ni = 0;
  for (std::size_t i = 0; i < k; ++i) {
    auto [ld, li] = lie_of_letter(f[i]);
    LieElement dxi = L_.d(L_.lie->basis_element(ld, li));
    if (!dxi.is_zero()) {
      Polynomial sdx = suspend(dxi);
      int sign = (ni % 2 != 0) ? 1 : -1;  // -(-1)^{n_i}
      for (const auto& [lm, lc] : sdx) {
        std::vector<int> factors;
        factors.reserve(k);
        factors.insert(factors.end(), f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i));
        factors.push_back(lm.factors.front());
        factors.insert(factors.end(), f.begin() + static_cast<std::ptrdiff_t>(i) + 1, f.end());
        NormResult n = normalize_monomial(letters_, std::move(factors));
        if (n.zero) continue;
        poly_add_term(out, n.mono, lc * sign * n.sign);
      }
    }
    ni += letters_.degree(f[i]);
  }
  // Horizontal part: d_h = sum_{p<q} (-1)^{|sxp| + n_pq} s[xp,xq] (rest),
  // n_pq = |l_p| n_p + |l_q| (n_q - |l_p|).
  std::vector<int> prefix(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i)
    prefix[i + 1] = prefix[i] + letters_.degree(f[i]);
  for (std::size_t p = 0; p + 1 < k; ++p) {
    for (std::size_t q = p + 1; q < k; ++q) {
      auto [pd, pi] = lie_of_letter(f[p]);
      auto [qd, qi] = lie_of_letter(f[q]);
      LieElement br = L_.lie->bracket(L_.lie->basis_element(pd, pi),
                                      L_.lie->basis_element(qd, qi));
      if (br.is_zero()) continue;
      int lp = letters_.degree(f[p]);
      int lq = letters_.degree(f[q]);
      long npq = static_cast<long>(lp) * prefix[p] +
                 static_cast<long>(lq) * (prefix[q] - lp);
      int sign = ((static_cast<long>(lp) + npq) % 2 != 0) ? -1 : 1;
      Polynomial sbr = suspend(br);
      for (const auto& [lm, lc] : sbr) {
        std::vector<int> factors;
        factors.reserve(k - 1);
        factors.push_back(lm.factors.front());
        for (std::size_t j = 0; j < k; ++j)
          if (j != p && j != q) factors.push_back(f[j]);
        NormResult n = normalize_monomial(letters_, std::move(factors));
        if (n.zero) continue;
        poly_add_term(out, n.mono, lc * sign * n.sign);
      }
    }
  }
  return out;
}

Polynomial ChainCoalgebra::d_poly(const Polynomial& p) const {
  Polynomial out;
  for (const auto& [m, c] : p) poly_axpy(out, c, d_word(m));
  return out;
}

Mat ChainCoalgebra::d_matrix(int degree) const {
  const std::vector<Monomial>& src = words(degree);
  const std::vector<Monomial>& dst = words(degree - 1);
  Mat m(dst.size(), zero_vec(src.size()));
  for (std::size_t j = 0; j < src.size(); ++j) {
    Polynomial dj = d_word(src[j]);
    Vec col = poly_coords(letters_, dj, dst);
    for (std::size_t i = 0; i < dst.size(); ++i) m[i][j] = col[i];
  }
  return m;
}

ChainCoalgebra::Tensor2 ChainCoalgebra::reduced_coproduct(const Monomial& w) const {
  Tensor2 out;
  const std::vector<int>& f = w.factors;
  const std::size_t k = f.size();
  if (k < 2) return out;
  check_internal(k < 31, "word too long for subset enumeration");
  for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
    // Positions in S go left; sign from moving each S-letter past the
    // complement letters originally before it.
    int sign = 1;
    std::vector<int> left, right;
    for (std::size_t p = 0; p < k; ++p) {
      if (mask & (1u << p)) {
        for (std::size_t q = 0; q < p; ++q) {
          if (!(mask & (1u << q))) {
            if (letters_.degree(f[p]) % 2 != 0 && letters_.degree(f[q]) % 2 != 0)
              sign = -sign;
          }
        }
        left.push_back(f[p]);
      } else {
        right.push_back(f[p]);
      }
    }
    auto key = std::make_pair(Monomial{left}, Monomial{right});
    auto it = out.find(key);
    if (it == out.end())
      out.emplace(std::move(key), Q(sign));
    else {
      it->second += sign;
      if (sgn(it->second) == 0) out.erase(it);
    }
  }
  return out;
}

ChainCoalgebra::TensorK ChainCoalgebra::reduced_coproduct_iter(const Polynomial& p,
                                                               int m) const {
  check_internal(m >= 2, "iterated coproduct needs m >= 2");
  TensorK cur;
  for (const auto& [w, c] : p) cur[{w}] = cur.count({w}) ? cur[{w}] + c : c;
  for (auto it = cur.begin(); it != cur.end();) {
    if (sgn(it->second) == 0)
      it = cur.erase(it);
    else
      ++it;
  }
  for (int step = 1; step < m; ++step) {
    TensorK next;
    for (const auto& [tuple, c] : cur) {
      Tensor2 d2 = reduced_coproduct(tuple.front());
      for (const auto& [pr, s] : d2) {
        std::vector<Monomial> nt;
        nt.reserve(tuple.size() + 1);
        nt.push_back(pr.first);
        nt.push_back(pr.second);
        for (std::size_t i = 1; i < tuple.size(); ++i) nt.push_back(tuple[i]);
        auto jt = next.find(nt);
        if (jt == next.end())
          next.emplace(std::move(nt), c * s);
        else {
          jt->second += c * s;
          if (sgn(jt->second) == 0) next.erase(jt);
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

TruncatedChains::TruncatedChains(std::shared_ptr<ChainCoalgebra> C, int T,
                                 int prefix_gens)
    : C_(std::move(C)), T_(T) {
  check_internal(T_ >= 1, "truncation degree must be >= 1");
  check_internal(C_->cap() >= T_ + 1,
                 "truncation needs chain words through degree T+1");
  build(prefix_gens);
}

void TruncatedChains::build(int prefix_gens) {
  kept_.resize(static_cast<std::size_t>(T_) + 1);
  index_.resize(static_cast<std::size_t>(T_) + 1);
  for (int n = 1; n < T_; ++n) kept_[static_cast<std::size_t>(n)] = C_->words(n);
  // Degree T: drop a complement of ker d_{T+1}'s image: the pivot words of
  // the echelonized boundary matrix d(C_{T+1}) with columns ordered so that
  // words containing "new" letters (Lie words touching generators >=
  // prefix_gens) come first.
  const std::vector<Monomial>& wordsT = C_->words(T_);
  auto word_has_new_letter = [&](const Monomial& w) {
    for (int f : w.factors) {
      auto [ld, li] = C_->lie_of_letter(f);
      if (C_->dgl().lie->basis_word_maxgen(ld, li) >= prefix_gens) return true;
    }
    return false;
  };
  std::vector<std::size_t> colorder;
  for (std::size_t j = 0; j < wordsT.size(); ++j)
    if (word_has_new_letter(wordsT[j])) colorder.push_back(j);
  for (std::size_t j = 0; j < wordsT.size(); ++j)
    if (!word_has_new_letter(wordsT[j])) colorder.push_back(j);
  // Boundary matrix rows in permuted coordinates.
  Mat rows;
  for (const Monomial& w : C_->words(T_ + 1)) {
    Polynomial dw = C_->d_word(w);
    if (poly_is_zero(dw)) continue;
    Vec v = poly_coords(C_->letters(), dw, wordsT);
    Vec pv(wordsT.size());
    for (std::size_t j = 0; j < wordsT.size(); ++j) pv[j] = v[colorder[j]];
    rows.push_back(std::move(pv));
  }
  std::vector<std::size_t> pivots = rref(rows);
  std::vector<bool> dropped(wordsT.size(), false);
  for (std::size_t p : pivots) dropped[colorder[p]] = true;
  for (std::size_t j = 0; j < wordsT.size(); ++j)
    if (!dropped[j]) kept_[static_cast<std::size_t>(T_)].push_back(wordsT[j]);
  for (int n = 1; n <= T_; ++n) {
    auto& idx = index_[static_cast<std::size_t>(n)];
    const auto& ws = kept_[static_cast<std::size_t>(n)];
    for (std::size_t j = 0; j < ws.size(); ++j) idx.emplace(ws[j], j);
  }
  abc_.resize(static_cast<std::size_t>(T_) + 1);
  abc_ready_.assign(static_cast<std::size_t>(T_) + 1, false);
  dsolver_.resize(static_cast<std::size_t>(T_) + 1);
  // The restriction must not change the image of d_T (the dropped complement
  // maps isomorphically onto nothing it adds): rank check.
  if (!kept_[static_cast<std::size_t>(T_)].empty() || !wordsT.empty()) {
    Mat full = C_->d_matrix(T_);
    Mat restr = d_matrix(T_);
    check_internal(rank(restr) == rank(full),
                   "truncation changed the boundary image at the top degree");
  }
}

const std::vector<Monomial>& TruncatedChains::kept(int degree) const {
  check_internal(degree >= 1 && degree <= T_, "kept: degree out of range");
  return kept_[static_cast<std::size_t>(degree)];
}

bool TruncatedChains::is_kept(const Monomial& w) const {
  int n = C_->letters().mono_degree(w);
  if (n < 1 || n > T_) return false;
  return index_[static_cast<std::size_t>(n)].count(w) > 0;
}

Vec TruncatedChains::coords(const Polynomial& p, int degree) const {
  const auto& idx = index_[static_cast<std::size_t>(degree)];
  Vec v = zero_vec(kept(degree).size());
  for (const auto& [m, c] : p) {
    auto it = idx.find(m);
    check_internal(it != idx.end(), "polynomial leaves the truncated slice");
    v[it->second] = c;
  }
  return v;
}

Polynomial TruncatedChains::from_coords(int degree, const Vec& v) const {
  return coords_poly(kept(degree), v);
}

Polynomial TruncatedChains::d_slice(const Polynomial& p) const {
  Polynomial dp = C_->d_poly(p);
  // Degrees below T are fully kept, so the slice is closed under d; verify.
  for (const auto& [m, c] : dp) {
    (void)c;
    check_internal(is_kept(m), "slice differential left the slice");
  }
  return dp;
}

Mat TruncatedChains::d_matrix(int degree) const {
  if (degree < 2) return Mat();  // no coordinates below degree 1
  const auto& src = kept(degree);
  std::size_t nd = kept(degree - 1).size();
  Mat m(nd, zero_vec(src.size()));
  for (std::size_t j = 0; j < src.size(); ++j) {
    Vec col = coords(C_->d_word(src[j]), degree - 1);
    for (std::size_t i = 0; i < nd; ++i) m[i][j] = col[i];
  }
  return m;
}

const TruncatedChains::ABC& TruncatedChains::abc(int degree) const {
  check_internal(degree >= 1 && degree <= T_, "abc: degree out of range");
  if (abc_ready_[static_cast<std::size_t>(degree)])
    return abc_[static_cast<std::size_t>(degree)];
  ABC out;
  std::size_t nd = kept(degree).size();
  // Image of d from one degree up (none at the top degree).
  RowSpace bspace(nd);
  if (degree < T_) {
    for (const Monomial& w : kept(degree + 1)) {
      Polynomial dw = C_->d_word(w);
      if (!poly_is_zero(dw)) bspace.add(coords(dw, degree));
    }
  }
  for (const Vec& row : bspace.rows()) out.b.push_back(row);
  // Preimages of the b's (delayed: needs the solver one degree up).
  if (!out.b.empty()) {
    if (!dsolver_[static_cast<std::size_t>(degree + 1)])
      dsolver_[static_cast<std::size_t>(degree + 1)] =
          std::make_shared<Solver>(d_matrix(degree + 1), kept(degree + 1).size());
    for (std::size_t i = 0; i < out.b.size(); ++i) {
      std::optional<Vec> pre =
          dsolver_[static_cast<std::size_t>(degree + 1)]->solve(out.b[i]);
      check_internal(pre.has_value(), "boundary without preimage");
      out.a.push_back(*pre);
    }
  }
  // Kernel of d on this degree, residuals against boundaries, echelon, negate.
  std::vector<Vec> kern;
  if (degree >= 2) {
    kern = kernel_basis(d_matrix(degree), nd);
  } else {
    for (std::size_t i = 0; i < nd; ++i) kern.push_back(unit_vec(nd, i));
  }
  RowSpace cspace(nd);
  for (const Vec& k : kern) cspace.add(bspace.residual(k));
  for (const Vec& row : cspace.rows()) out.c.push_back(vec_scale(Q(-1), row));
  abc_[static_cast<std::size_t>(degree)] = std::move(out);
  abc_ready_[static_cast<std::size_t>(degree)] = true;
  return abc_[static_cast<std::size_t>(degree)];
}

int TruncatedChains::homology_dim(int degree) const {
  return static_cast<int>(abc(degree).c.size());
}

Polynomial TruncatedChains::c_rep(int degree, int idx) const {
  return from_coords(degree, abc(degree).c[static_cast<std::size_t>(idx)]);
}

LinearizationCheck linearization_check(const FreeDGL& L, int top) {
  LinearizationCheck out;
  ChainCoalgebra C(L, top + 1);
  // Chain homology ranks.
  std::vector<int> dims(static_cast<std::size_t>(top) + 2, 0);
  std::vector<int> ranks(static_cast<std::size_t>(top) + 2, 0);  // rank d_n
  for (int n = 0; n <= top + 1; ++n)
    dims[static_cast<std::size_t>(n)] = static_cast<int>(C.words(n).size());
  for (int n = 1; n <= top + 1; ++n)
    ranks[static_cast<std::size_t>(n)] = rank(C.d_matrix(n));
  for (int n = 0; n <= top; ++n) {
    int kerdim = dims[static_cast<std::size_t>(n)] -
                 (n >= 1 ? ranks[static_cast<std::size_t>(n)] : 0);
    out.chain_ranks.push_back(kerdim - ranks[static_cast<std::size_t>(n) + 1]);
  }
  // Linear side (sW (+) Q, d0): degree 0 has the unit; degree n has the
  // generators of Lie degree n-1; d0(s g) = -s(linear part of d g).
  const auto& gens = L.gens();
  std::vector<std::vector<int>> slots(static_cast<std::size_t>(top) + 2);
  for (const LieGenerator& g : gens)
    if (g.degree + 1 <= top + 1)
      slots[static_cast<std::size_t>(g.degree + 1)].push_back(g.id);
  std::vector<Mat> d0(static_cast<std::size_t>(top) + 2);
  for (int n = 2; n <= top + 1; ++n) {
    const auto& src = slots[static_cast<std::size_t>(n)];
    const auto& dst = slots[static_cast<std::size_t>(n) - 1];
    Mat m(dst.size(), zero_vec(src.size()));
    for (std::size_t j = 0; j < src.size(); ++j) {
      LieElement dg = L.d_gen(src[j]);
      for (const auto& [idx, c] : dg.coords) {
        if (L.lie->basis_word_length(dg.degree, idx) != 1) continue;
        const BWord& w = L.lie->basis_word(dg.degree, idx);
        for (std::size_t i = 0; i < dst.size(); ++i)
          if (dst[i] == w.gen) m[i][j] = -c;
      }
    }
    d0[static_cast<std::size_t>(n)] = std::move(m);
  }
  for (int n = 0; n <= top; ++n) {
    int dim = n == 0 ? 1 : static_cast<int>(slots[static_cast<std::size_t>(n)].size());
    int rin = (n + 1 <= top + 1 && n >= 1) ? rank(d0[static_cast<std::size_t>(n) + 1]) : 0;
    int rout = n >= 2 ? rank(d0[static_cast<std::size_t>(n)]) : 0;
    out.linear_ranks.push_back(dim - rin - rout);
  }
  out.ok = out.chain_ranks == out.linear_ranks;
  return out;
}

FreeCDGA dual_cochains(const FreeDGL& L, int cap) {
  ChainCoalgebra C(L, cap);
  const GenTable& letters = C.letters();
  std::vector<Generator> dual;
  for (const Generator& g : letters.gens)
    dual.push_back(Generator{g.id, "c" + g.name, g.degree});
  GenTable DT = make_gen_table(dual);
  // Pairing of a dual monomial with a word, recursively over the first dual
  // factor: <xi_a M', w> = sum over positions p with letter a of
  //   (Koszul sign moving letter p to the front) * (-1)^{|M'| |l_p|} <M', w \ p>.
  std::function<Q(const std::vector<int>&, const std::vector<int>&)> eval =
      [&](const std::vector<int>& mono, const std::vector<int>& word) -> Q {
    if (mono.empty()) return word.empty() ? Q(1) : Q(0);
    if (mono.size() != word.size()) return Q(0);
    int a = mono.front();
    std::vector<int> mrest(mono.begin() + 1, mono.end());
    int mrest_deg = 0;
    for (int x : mrest) mrest_deg += DT.degree(x);
    Q total(0);
    for (std::size_t p = 0; p < word.size(); ++p) {
      if (word[p] != a) continue;
      int sign = 1;
      for (std::size_t q = 0; q < p; ++q)
        if (letters.degree(word[p]) % 2 != 0 && letters.degree(word[q]) % 2 != 0)
          sign = -sign;
      if (mrest_deg % 2 != 0 && letters.degree(word[p]) % 2 != 0) sign = -sign;
      std::vector<int> wrest;
      for (std::size_t q = 0; q < word.size(); ++q)
        if (q != p) wrest.push_back(word[q]);
      total += Q(sign) * eval(mrest, wrest);
    }
    return total;
  };
  std::map<int, Polynomial> diff;
  for (const Generator& g : DT.gens) {
    int n = g.degree;
    if (n + 1 > cap) continue;  // top-degree duals keep d = 0 (degree cap)
    const std::vector<Monomial>& wn1 = C.words(n + 1);
    std::vector<Monomial> monos = monomial_basis(DT, n + 1);
    Mat pair(wn1.size(), zero_vec(monos.size()));
    for (std::size_t i = 0; i < wn1.size(); ++i)
      for (std::size_t j = 0; j < monos.size(); ++j)
        pair[i][j] = eval(monos[j].factors, wn1[i].factors);
    Vec rhs = zero_vec(wn1.size());
    for (std::size_t i = 0; i < wn1.size(); ++i) {
      Polynomial dw = C.d_word(wn1[i]);
      // <xi, dw> = coefficient of the single-letter word (g.id).
      Monomial single;
      single.factors.push_back(g.id);
      auto it = dw.find(single);
      Q v = it == dw.end() ? Q(0) : it->second;
      int sign = (n % 2 != 0) ? 1 : -1;  // -(-1)^n
      rhs[i] = Q(sign) * v;
    }
    Solver solver(std::move(pair), monos.size());
    std::optional<Vec> sol = solver.solve(rhs);
    check_internal(sol.has_value(), "cochain differential: pairing solve failed");
    check_internal(solver.rank() == static_cast<int>(monos.size()),
                   "degenerate chain/cochain pairing");
    Polynomial dp = coords_poly(monos, *sol);
    if (!poly_is_zero(dp)) diff.emplace(g.id, dp);
  }
  return make_cdga(DT.gens, std::move(diff), cap - 1, cap - 2);
}

}  // namespace qsm
