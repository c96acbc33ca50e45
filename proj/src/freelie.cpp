#include "qsm/freelie.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "qsm/errors.hpp"

namespace qsm {

int bword_degree(const BWord& w, const std::vector<LieGenerator>& gens) {
  if (w.is_leaf()) return gens[static_cast<std::size_t>(w.gen)].degree;
  return bword_degree(*w.l, gens) + bword_degree(*w.r, gens);
}

std::string bword_to_string(const BWord& w, const std::vector<LieGenerator>& gens) {
  if (w.is_leaf()) return gens[static_cast<std::size_t>(w.gen)].name;
  return "[" + bword_to_string(*w.l, gens) + "," + bword_to_string(*w.r, gens) + "]";
}

namespace {
int bword_maxgen(const BWord& w) {
  if (w.is_leaf()) return w.gen;
  return std::max(bword_maxgen(*w.l), bword_maxgen(*w.r));
}
int bword_length(const BWord& w) {
  if (w.is_leaf()) return 1;
  return bword_length(*w.l) + bword_length(*w.r);
}

// Tensor-algebra elements: map from tensor word (ordered id list) to Q.
using TElt = std::map<std::vector<int>, Q>;

void tadd(TElt& a, const std::vector<int>& w, const Q& c) {
  if (sgn(c) == 0) return;
  auto it = a.find(w);
  if (it == a.end())
    a.emplace(w, c);
  else {
    it->second += c;
    if (sgn(it->second) == 0) a.erase(it);
  }
}

// T([a,b]) = T(a) tensor T(b) - (-1)^{|a||b|} T(b) tensor T(a)
TElt texpand(const BWord& w, const std::vector<LieGenerator>& gens) {
  TElt out;
  if (w.is_leaf()) {
    tadd(out, {w.gen}, Q(1));
    return out;
  }
  TElt A = texpand(*w.l, gens);
  TElt B = texpand(*w.r, gens);
  int da = bword_degree(*w.l, gens);
  int db = bword_degree(*w.r, gens);
  int sign = (da % 2 != 0 && db % 2 != 0) ? -1 : 1;
  for (const auto& [wa, ca] : A)
    for (const auto& [wb, cb] : B) {
      std::vector<int> ab = wa;
      ab.insert(ab.end(), wb.begin(), wb.end());
      tadd(out, ab, ca * cb);
      std::vector<int> ba = wb;
      ba.insert(ba.end(), wa.begin(), wa.end());
      tadd(out, ba, ca * cb * Q(-sign));
    }
  return out;
}

void enumerate_twords(const std::vector<LieGenerator>& gens, int remaining,
                      std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (const LieGenerator& g : gens) {
    if (g.degree > remaining) continue;
    cur.push_back(g.id);
    enumerate_twords(gens, remaining - g.degree, cur, out);
    cur.pop_back();
  }
}
}  // namespace

FreeLie::FreeLie(std::vector<LieGenerator> gens, int cap)
    : gens_(std::move(gens)), cap_(cap) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    check_internal(gens_[i].id == static_cast<int>(i), "lie generator ids must be dense");
    check_input(gens_[i].degree >= 1, "lie generator degree must be >= 1");
    check_input(names.insert(gens_[i].name).second,
                "duplicate lie generator name '" + gens_[i].name + "'");
  }
  check_internal(cap_ >= 0, "negative lie cap");
  build();
}

Vec FreeLie::expand(const BWord& w, int degree) const {
  const DegreeBasis& D = deg_[static_cast<std::size_t>(degree)];
  TElt t = texpand(w, gens_);
  Vec v = zero_vec(D.twords.size());
  for (const auto& [tw, c] : t) {
    auto it = D.tindex.find(tw);
    check_internal(it != D.tindex.end(), "tensor word missing from coordinate space");
    v[it->second] = c;
  }
  return v;
}

void FreeLie::build() {
  deg_.resize(static_cast<std::size_t>(cap_) + 1);
  for (int d = 1; d <= cap_; ++d) {
    DegreeBasis& D = deg_[static_cast<std::size_t>(d)];
    std::vector<int> cur;
    enumerate_twords(gens_, d, cur, D.twords);
    check_input(D.twords.size() <= kMaxTensorWordsPerDegree,
                "free Lie algebra too large to materialize at degree " +
                    std::to_string(d));
    for (std::size_t i = 0; i < D.twords.size(); ++i) D.tindex.emplace(D.twords[i], i);
    D.span = RowSpace(D.twords.size());
    // Candidates ordered by (max generator id, kind, generator id, bracket
    // argument position). Generators of this degree come before brackets with
    // the same max id.
    struct Cand {
      int maxid;
      int kind;  // 0 = generator leaf, 1 = bracket [g, basis]
      int gid;
      int bdeg;
      int bidx;
    };
    std::vector<Cand> cands;
    for (const LieGenerator& g : gens_)
      if (g.degree == d) cands.push_back(Cand{g.id, 0, g.id, 0, 0});
    for (const LieGenerator& g : gens_) {
      int bd = d - g.degree;
      if (bd < 1) continue;
      const DegreeBasis& B = deg_[static_cast<std::size_t>(bd)];
      for (std::size_t bi = 0; bi < B.words.size(); ++bi) {
        int maxid = std::max(g.id, B.maxgens[bi]);
        cands.push_back(Cand{maxid, 1, g.id, bd, static_cast<int>(bi)});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.maxid != b.maxid) return a.maxid < b.maxid;
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.gid != b.gid) return a.gid < b.gid;
      if (a.bdeg != b.bdeg) return a.bdeg < b.bdeg;
      return a.bidx < b.bidx;
    });
    for (const Cand& c : cands) {
      BWord w = c.kind == 0
                    ? BWord::leaf(c.gid)
                    : BWord::br(BWord::leaf(c.gid),
                                deg_[static_cast<std::size_t>(c.bdeg)]
                                    .words[static_cast<std::size_t>(c.bidx)]);
      Vec e = expand(w, d);
      if (is_zero_vec(e)) continue;
      Vec res = D.span.residual(e);
      if (is_zero_vec(res)) continue;
      D.span.add(e);
      D.words.push_back(w);
      D.lengths.push_back(bword_length(w));
      D.maxgens.push_back(bword_maxgen(w));
      D.expansions.push_back(std::move(e));
    }
  }
}

int FreeLie::dim(int degree) const {
  if (degree < 1 || degree > cap_) return 0;
  return static_cast<int>(deg_[static_cast<std::size_t>(degree)].words.size());
}

const BWord& FreeLie::basis_word(int degree, int idx) const {
  return deg_[static_cast<std::size_t>(degree)].words[static_cast<std::size_t>(idx)];
}

int FreeLie::basis_word_length(int degree, int idx) const {
  return deg_[static_cast<std::size_t>(degree)].lengths[static_cast<std::size_t>(idx)];
}

int FreeLie::basis_word_maxgen(int degree, int idx) const {
  return deg_[static_cast<std::size_t>(degree)].maxgens[static_cast<std::size_t>(idx)];
}

LieElement FreeLie::gen_element(int id) const {
  return normalize(BWord::leaf(id));
}

LieElement FreeLie::basis_element(int degree, int idx) const {
  LieElement e;
  e.degree = degree;
  e.coords.emplace(idx, Q(1));
  return e;
}

LieElement FreeLie::solve_coords(const Vec& tensor_vec, int degree) const {
  const DegreeBasis& D = deg_[static_cast<std::size_t>(degree)];
  LieElement e = zero(degree);
  if (!D.solver) {
    Mat m(D.twords.size(), zero_vec(D.words.size()));
    for (std::size_t j = 0; j < D.expansions.size(); ++j)
      for (std::size_t i = 0; i < D.twords.size(); ++i) m[i][j] = D.expansions[j][i];
    D.solver = std::make_shared<Solver>(std::move(m), D.words.size());
  }
  std::optional<Vec> x = D.solver->solve(tensor_vec);
  check_internal(x.has_value(), "element outside the free Lie algebra span");
  for (std::size_t i = 0; i < x->size(); ++i)
    if (sgn((*x)[i]) != 0) e.coords.emplace(static_cast<int>(i), (*x)[i]);
  return e;
}

LieElement FreeLie::normalize(const BWord& w) const {
  int d = bword_degree(w, gens_);
  check_internal(d >= 1 && d <= cap_, "bracket word degree " + std::to_string(d) +
                                          " outside materialized range");
  return solve_coords(expand(w, d), d);
}

LieElement FreeLie::normalize(const std::vector<std::pair<Q, BWord>>& terms) const {
  check_internal(!terms.empty(), "normalize: empty term list");
  int d = bword_degree(terms.front().second, gens_);
  const DegreeBasis& D = deg_[static_cast<std::size_t>(d)];
  Vec acc = zero_vec(D.twords.size());
  for (const auto& [c, w] : terms) {
    check_input(bword_degree(w, gens_) == d,
                "inhomogeneous lie expression");
    vec_axpy(acc, c, expand(w, d));
  }
  return solve_coords(acc, d);
}

LieElement FreeLie::bracket_basis(int da, int ia, int db, int ib) const {
  auto key = std::make_tuple(da, ia, db, ib);
  auto it = bracket_memo_.find(key);
  if (it != bracket_memo_.end()) return it->second;
  BWord w = BWord::br(basis_word(da, ia), basis_word(db, ib));
  LieElement e = normalize(w);
  bracket_memo_.emplace(key, e);
  return e;
}

LieElement FreeLie::bracket(const LieElement& a, const LieElement& b) const {
  int d = a.degree + b.degree;
  check_internal(d <= cap_, "bracket degree exceeds materialized range");
  LieElement out = zero(d);
  for (const auto& [ia, ca] : a.coords)
    for (const auto& [ib, cb] : b.coords) {
      LieElement t = bracket_basis(a.degree, ia, b.degree, ib);
      for (const auto& [k, c] : t.coords) {
        Q v = ca * cb * c;
        auto jt = out.coords.find(k);
        if (jt == out.coords.end())
          out.coords.emplace(k, v);
        else {
          jt->second += v;
          if (sgn(jt->second) == 0) out.coords.erase(jt);
        }
      }
    }
  return out;
}

LieElement FreeLie::add(const LieElement& a, const LieElement& b) const {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  check_internal(a.degree == b.degree, "adding lie elements of different degrees");
  LieElement out = a;
  for (const auto& [k, c] : b.coords) {
    auto it = out.coords.find(k);
    if (it == out.coords.end())
      out.coords.emplace(k, c);
    else {
      it->second += c;
      if (sgn(it->second) == 0) out.coords.erase(it);
    }
  }
  return out;
}

LieElement FreeLie::scale(const Q& c, const LieElement& a) const {
  LieElement out = zero(a.degree);
  if (sgn(c) == 0) return out;
  for (const auto& [k, x] : a.coords) out.coords.emplace(k, c * x);
  return out;
}

std::string FreeLie::element_to_string(const LieElement& e) const {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : e.coords) {
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
    if (coef != 1) os << q_str(coef) << "*";
    os << bword_to_string(basis_word(e.degree, idx), gens_);
  }
  return os.str();
}

Vec FreeLie::element_coords(const LieElement& e) const {
  Vec v = zero_vec(static_cast<std::size_t>(dim(e.degree)));
  for (const auto& [k, c] : e.coords) v[static_cast<std::size_t>(k)] = c;
  return v;
}

LieElement FreeLie::coords_element(int degree, const Vec& v) const {
  LieElement e;
  e.degree = degree;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) e.coords.emplace(static_cast<int>(i), v[i]);
  return e;
}

LieElement FreeDGL::d_gen(int id) const {
  auto it = diff.find(id);
  if (it != diff.end()) return it->second;
  LieElement z;
  z.degree = gens()[static_cast<std::size_t>(id)].degree - 1;
  return z;
}

LieElement FreeDGL::d(const LieElement& e) const {
  if (e.is_zero() || e.degree - 1 < 1) return lie->zero(e.degree - 1);
  LieElement out = lie->zero(e.degree - 1);
  // d on a bracket word, recursively: d[u,v] = [du,v] + (-1)^{|u|}[u,dv].
  std::function<LieElement(const BWord&)> dw = [&](const BWord& w) -> LieElement {
    if (w.is_leaf()) return d_gen(w.gen);
    int ldeg = bword_degree(*w.l, lie->gens());
    int rdeg = bword_degree(*w.r, lie->gens());
    LieElement result = lie->zero(ldeg + rdeg - 1);
    LieElement dl = dw(*w.l);
    if (!dl.is_zero()) result = lie->add(result, lie->bracket(dl, lie->normalize(*w.r)));
    LieElement dr = dw(*w.r);
    if (!dr.is_zero()) {
      LieElement t = lie->bracket(lie->normalize(*w.l), dr);
      result = lie->add(result, ldeg % 2 != 0 ? lie->scale(Q(-1), t) : t);
    }
    return result;
  };
  for (const auto& [idx, c] : e.coords) {
    LieElement dword = dw(lie->basis_word(e.degree, idx));
    if (!dword.is_zero()) out = lie->add(out, lie->scale(c, dword));
  }
  return out;
}

Mat FreeDGL::d_matrix(int degree) const {
  std::size_t rows = static_cast<std::size_t>(lie->dim(degree - 1));
  std::size_t cols = static_cast<std::size_t>(lie->dim(degree));
  Mat m(rows, zero_vec(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    LieElement dj = d(lie->basis_element(degree, static_cast<int>(j)));
    for (const auto& [i, c] : dj.coords) m[static_cast<std::size_t>(i)][j] = c;
  }
  return m;
}

FreeDGL make_dgl(std::vector<LieGenerator> gens, std::map<int, LieElement> diff,
                 int cap) {
  FreeDGL L;
  L.lie = std::make_shared<FreeLie>(std::move(gens), cap);
  for (auto& [id, e] : diff) {
    check_internal(id >= 0 && id < static_cast<int>(L.gens().size()),
                   "differential on unknown lie generator");
    if (e.is_zero()) continue;
    check_input(e.degree == L.gens()[static_cast<std::size_t>(id)].degree - 1,
                "d(" + L.gens()[static_cast<std::size_t>(id)].name +
                    ") must lower degree by 1");
    L.diff.emplace(id, e);
  }
  for (const LieGenerator& g : L.gens()) {
    LieElement dg = L.d_gen(g.id);
    if (dg.is_zero()) continue;
    if (dg.degree >= 2) {
      LieElement ddg = L.d(dg);
      check_input(ddg.is_zero(), "d*d != 0 on lie generator '" + g.name + "'");
    }
    // Minimality: no basis word of length 1 in the support.
    for (const auto& [idx, c] : dg.coords) {
      (void)c;
      if (L.lie->basis_word_length(dg.degree, idx) == 1) L.minimal = false;
    }
  }
  return L;
}

FreeDGL dgl_with_cap(const FreeDGL& L, int cap) {
  std::map<int, LieElement> diff;
  FreeDGL out;
  out.lie = std::make_shared<FreeLie>(L.gens(), cap);
  for (const auto& [id, e] : L.diff) {
    // Re-express coordinates in the rebuilt basis (identical construction,
    // but go through bracket words to be safe).
    std::vector<std::pair<Q, BWord>> terms;
    for (const auto& [idx, c] : e.coords)
      terms.emplace_back(c, L.lie->basis_word(e.degree, idx));
    if (!terms.empty()) diff.emplace(id, out.lie->normalize(terms));
  }
  out.diff = std::move(diff);
  out.minimal = L.minimal;
  return out;
}

GradedLie::GradedLie(std::vector<int> dims, int cap) : cap_(cap), dims_(std::move(dims)) {
  check_internal(static_cast<int>(dims_.size()) == cap_ + 1,
                 "GradedLie dims must cover 0..cap");
}

int GradedLie::dim(int degree) const {
  if (degree < 1 || degree > cap_) return 0;
  return dims_[static_cast<std::size_t>(degree)];
}

void GradedLie::set_bracket(int da, int ia, int db, int ib, Vec coords) {
  check_internal(static_cast<int>(coords.size()) == dim(da + db),
                 "bracket coords size mismatch");
  table_[std::make_tuple(da, ia, db, ib)] = std::move(coords);
}

Vec GradedLie::bracket(int da, int ia, int db, int ib) const {
  if (da + db > cap_) return Vec();
  auto it = table_.find(std::make_tuple(da, ia, db, ib));
  check_internal(it != table_.end(), "missing bracket table entry");
  return it->second;
}

Vec GradedLie::bracket_vec(int da, const Vec& a, int db, const Vec& b) const {
  Vec out = zero_vec(static_cast<std::size_t>(dim(da + db)));
  if (da + db > cap_) return out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (sgn(b[j]) == 0) continue;
      Vec t = bracket(da, static_cast<int>(i), db, static_cast<int>(j));
      vec_axpy(out, a[i] * b[j], t);
    }
  }
  return out;
}

void GradedLie::validate() const {
  // Antisymmetry: [x,y] + (-1)^{|x||y|}[y,x] = 0.
  for (int da = 1; da <= cap_; ++da)
    for (int db = da; db <= cap_; ++db) {
      if (da + db > cap_) continue;
      for (int ia = 0; ia < dim(da); ++ia)
        for (int ib = 0; ib < dim(db); ++ib) {
          Vec xy = bracket(da, ia, db, ib);
          Vec yx = bracket(db, ib, da, ia);
          int s = (da % 2 != 0 && db % 2 != 0) ? -1 : 1;
          Vec sum = xy;
          vec_axpy(sum, Q(s), yx);
          check_internal(is_zero_vec(sum), "graded antisymmetry fails");
        }
    }
  // Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]].
  for (int da = 1; da <= cap_; ++da)
    for (int db = 1; db <= cap_; ++db)
      for (int dc = 1; dc <= cap_; ++dc) {
        if (da + db + dc > cap_) continue;
        for (int ia = 0; ia < dim(da); ++ia)
          for (int ib = 0; ib < dim(db); ++ib)
            for (int ic = 0; ic < dim(dc); ++ic) {
              Vec yz = bracket(db, ib, dc, ic);
              Vec lhs = bracket_vec(da, unit_vec(static_cast<std::size_t>(dim(da)), static_cast<std::size_t>(ia)), db + dc, yz);
              Vec xy = bracket(da, ia, db, ib);
              Vec t1 = bracket_vec(da + db, xy, dc, unit_vec(static_cast<std::size_t>(dim(dc)), static_cast<std::size_t>(ic)));
              Vec xz = bracket(da, ia, dc, ic);
              Vec t2 = bracket_vec(db, unit_vec(static_cast<std::size_t>(dim(db)), static_cast<std::size_t>(ib)), da + dc, xz);
              int s = (da % 2 != 0 && db % 2 != 0) ? -1 : 1;
              Vec rhs = t1;
              vec_axpy(rhs, Q(s), t2);
              vec_axpy(rhs, Q(-1), lhs);
              check_internal(is_zero_vec(rhs), "graded Jacobi identity fails");
            }
      }
}

std::vector<RowSpace> GradedLie::lcs(int n) const {
  // L^{(1)} = L.
  std::vector<RowSpace> cur;
  for (int d = 0; d <= cap_; ++d) {
    RowSpace s(static_cast<std::size_t>(dim(d)));
    for (int i = 0; i < dim(d); ++i) s.add(unit_vec(static_cast<std::size_t>(dim(d)), static_cast<std::size_t>(i)));
    cur.push_back(std::move(s));
  }
  for (int step = 2; step <= n; ++step) {
    std::vector<RowSpace> next;
    for (int d = 0; d <= cap_; ++d) next.emplace_back(static_cast<std::size_t>(dim(d)));
    for (int da = 1; da <= cap_; ++da) {
      if (dim(da) == 0) continue;
      for (int db = 1; db <= cap_; ++db) {
        int d = da + db;
        if (d > cap_) continue;
        const RowSpace& prev = cur[static_cast<std::size_t>(db)];
        for (int ia = 0; ia < dim(da); ++ia)
          for (const Vec& y : prev.rows()) {
            Vec br = bracket_vec(da, unit_vec(static_cast<std::size_t>(dim(da)), static_cast<std::size_t>(ia)), db, y);
            if (!is_zero_vec(br)) next[static_cast<std::size_t>(d)].add(br);
          }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

int GradedLie::bracket_length(int d, const Vec& x) const {
  if (is_zero_vec(x)) return -1;
  int best = 0;
  for (int n = 1; n <= d; ++n) {
    std::vector<RowSpace> s = lcs(n);
    if (s[static_cast<std::size_t>(d)].contains(x))
      best = n;
    else
      break;
  }
  return best;
}

int GradedLie::max_bracket_length() const {
  int best = 0;
  for (int n = 1; n <= cap_; ++n) {
    std::vector<RowSpace> s = lcs(n);
    bool nonzero = false;
    for (int d = 1; d <= cap_; ++d)
      if (s[static_cast<std::size_t>(d)].dim() > 0) nonzero = true;
    if (nonzero)
      best = n;
    else
      break;
  }
  return best;
}

DGLHomology dgl_homology(const FreeDGL& L, int topdeg) {
  check_internal(topdeg + 1 <= L.cap(),
                 "dgl_homology needs boundaries from degree topdeg+1");
  DGLHomology H{{}, {}, GradedLie(std::vector<int>(static_cast<std::size_t>(topdeg) + 1, 0), topdeg), {}, {}};
  H.dims.assign(static_cast<std::size_t>(topdeg) + 1, 0);
  H.reps.resize(static_cast<std::size_t>(topdeg) + 1);
  H.boundaries.clear();
  H.rep_spaces.clear();
  for (int d = 0; d <= topdeg; ++d) {
    H.boundaries.emplace_back(static_cast<std::size_t>(L.lie->dim(d)));
    H.rep_spaces.emplace_back(static_cast<std::size_t>(L.lie->dim(d)));
  }
  for (int d = 1; d <= topdeg; ++d) {
    std::size_t nd = static_cast<std::size_t>(L.lie->dim(d));
    RowSpace& bd = H.boundaries[static_cast<std::size_t>(d)];
    for (int j = 0; j < L.lie->dim(d + 1); ++j) {
      LieElement dj = L.d(L.lie->basis_element(d + 1, j));
      if (!dj.is_zero()) bd.add(L.lie->element_coords(dj));
    }
    // Kernel of d_d.
    Mat m = L.d_matrix(d);
    std::vector<Vec> kern = kernel_basis(m, nd);
    RowSpace reps(nd);
    for (const Vec& k : kern) reps.add(bd.residual(k));
    H.rep_spaces[static_cast<std::size_t>(d)] = reps;
    for (const Vec& row : reps.rows())
      H.reps[static_cast<std::size_t>(d)].push_back(L.lie->coords_element(d, row));
    H.dims[static_cast<std::size_t>(d)] = static_cast<int>(reps.dim());
  }
  // Induced bracket.
  GradedLie G(H.dims, topdeg);
  for (int da = 1; da <= topdeg; ++da)
    for (int db = 1; db <= topdeg; ++db) {
      if (da + db > topdeg) continue;
      for (int ia = 0; ia < H.dims[static_cast<std::size_t>(da)]; ++ia)
        for (int ib = 0; ib < H.dims[static_cast<std::size_t>(db)]; ++ib) {
          LieElement br = L.lie->bracket(H.reps[static_cast<std::size_t>(da)][static_cast<std::size_t>(ia)],
                                         H.reps[static_cast<std::size_t>(db)][static_cast<std::size_t>(ib)]);
          G.set_bracket(da, ia, db, ib, H.class_coords(L, br, da + db));
        }
    }
  G.validate();
  H.lie = std::move(G);
  return H;
}

Vec DGLHomology::class_coords(const FreeDGL& L, const LieElement& z, int d) const {
  check_internal(d >= 1 && d < static_cast<int>(dims.size()),
                 "class_coords: degree out of range");
  check_internal(z.is_zero() || L.d(z).is_zero(), "class_coords: not a cycle");
  Vec v = boundaries[static_cast<std::size_t>(d)].residual(L.lie->element_coords(
      z.is_zero() ? L.lie->zero(d) : z));
  const auto& rows = rep_spaces[static_cast<std::size_t>(d)].rows();
  Vec coords = zero_vec(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t p = 0;
    while (p < rows[i].size() && sgn(rows[i][p]) == 0) ++p;
    if (p == rows[i].size()) continue;
    Q c = v[p];
    if (sgn(c) != 0) {
      coords[i] = c;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * rows[i][j];
    }
  }
  check_internal(is_zero_vec(v), "class_coords: cycle outside homology span");
  return coords;
}

FreeDGL dgl_adjunction(const FreeDGL& L, const LieElement& z, int k,
                       const std::string& name, int cap) {
  check_input(k >= 2, "cell dimension k+1 needs k >= 2");
  if (!z.is_zero()) {
    check_input(z.degree == k - 1, "attaching cycle must have degree k-1");
    check_input(L.d(z).is_zero(), "attaching element must be a cycle");
  }
  std::vector<LieGenerator> gens = L.gens();
  int wid = static_cast<int>(gens.size());
  gens.push_back(LieGenerator{wid, name, k});
  FreeDGL out;
  out.lie = std::make_shared<FreeLie>(gens, cap);
  // Transport old differentials through bracket words.
  for (const auto& [id, e] : L.diff) {
    std::vector<std::pair<Q, BWord>> terms;
    for (const auto& [idx, c] : e.coords)
      terms.emplace_back(c, L.lie->basis_word(e.degree, idx));
    if (!terms.empty()) out.diff.emplace(id, out.lie->normalize(terms));
  }
  if (!z.is_zero()) {
    std::vector<std::pair<Q, BWord>> terms;
    for (const auto& [idx, c] : z.coords)
      terms.emplace_back(c, L.lie->basis_word(z.degree, idx));
    out.diff.emplace(wid, out.lie->normalize(terms));
  }
  out.minimal = L.minimal;
  for (const auto& [id, e] : out.diff) {
    (void)id;
    for (const auto& [idx, c] : e.coords) {
      (void)c;
      if (out.lie->basis_word_length(e.degree, idx) == 1) out.minimal = false;
    }
  }
  return out;
}

}  // namespace qsm
