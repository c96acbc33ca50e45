#include "qsm/split.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <utility>

#include "qsm/bs.hpp"
#include "qsm/chains.hpp"
#include "qsm/cohomology.hpp"
#include "qsm/errors.hpp"
#include "qsm/linalg.hpp"

namespace qsm {

std::string to_string(SplitStatus s) {
  switch (s) {
    case SplitStatus::Splits:
      return "splits";
    case SplitStatus::HypothesisFails:
      return "hypothesis-fails";
    case SplitStatus::UnknownWithinCap:
      return "unknown-within-cap";
  }
  return "unknown";
}

namespace {

int space_dimension(const FreeDGL& X) {
  int d = 0;
  for (const auto& g : X.gens()) d = std::max(d, g.degree + 1);
  return d;
}

bool bword_equal(const BWord& a, const BWord& b) {
  if (a.is_leaf() || b.is_leaf()) return a.gen == b.gen;
  return bword_equal(*a.l, *b.l) && bword_equal(*a.r, *b.r);
}

// Word-to-word inclusion of chain words of the sub-DGL into those of the
// enlarged DGL. Letter indices agree degreewise because the Lie basis of the
// subalgebra on the original generators is a prefix of the enlarged basis;
// every letter crossing is checked structurally once.
class WordInclusion {
 public:
  WordInclusion(const ChainCoalgebra& from, const ChainCoalgebra& to)
      : from_(from), to_(to) {}

  Monomial operator()(const Monomial& w) const {
    Monomial out;
    out.factors.reserve(w.factors.size());
    for (int f : w.factors) out.factors.push_back(letter(f));
    for (std::size_t i = 1; i < out.factors.size(); ++i)
      check_internal(out.factors[i - 1] <= out.factors[i],
                     "word inclusion does not preserve the letter order");
    return out;
  }

 private:
  int letter(int f) const {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    auto [deg, idx] = from_.lie_of_letter(f);
    check_internal(idx < to_.dgl().lie->dim(deg) &&
                       bword_equal(from_.dgl().lie->basis_word(deg, idx),
                                   to_.dgl().lie->basis_word(deg, idx)),
                   "Lie basis is not prefix-stable under the attachment");
    int t = to_.letter_of(deg, idx);
    memo_.emplace(f, t);
    return t;
  }

  const ChainCoalgebra& from_;
  const ChainCoalgebra& to_;
  mutable std::map<int, int> memo_;
};

Polynomial poly_sub(const Polynomial& a, const Polynomial& b) {
  return poly_add(a, poly_scale(Q(-1), b));
}

std::string describe_gens(const std::vector<Generator>& gens) {
  std::ostringstream os;
  for (std::size_t i = 0; i < gens.size(); ++i)
    os << (i ? ", " : "") << gens[i].name << "(" << gens[i].degree << ")";
  return os.str();
}

}  // namespace

SplitCheck splitting_check(const FreeDGL& X0, const LieElement& z, int cell,
                           const std::string& cell_name, const MinimalModel& Y,
                           int cap) {
  SplitCheck out;
  check_input(cell >= 3, "cell dimension must be at least 3");
  check_input(cap >= 2, "cap must be at least 2");
  const int zdeg = cell - 2;
  if (!z.is_zero()) {
    check_input(z.degree == zdeg,
                "attaching class of a " + std::to_string(cell) +
                    "-cell must have Lie degree " + std::to_string(zdeg));
    check_input(X0.cap() >= zdeg && X0.d(z).is_zero(),
                "attaching class is not a cycle");
  }

  const int dimX = space_dimension(X0);
  const int T = std::max(cell, dimX);
  out.truncation = T;
  check_input(Y.connectivity() >= T,
              "target must be at least " + std::to_string(T) +
                  "-connected for this source (it is " +
                  std::to_string(Y.connectivity()) + "-connected)");

  FreeDGL X = (X0.cap() >= T) ? X0 : dgl_with_cap(X0, T);

  // Invariants deciding the hypothesis.
  {
    DGLHomology H = dgl_homology(X, zdeg);
    Vec zc = H.class_coords(X, z, zdeg);
    out.class_zero = is_zero_vec(zc);
    if (!out.class_zero)
      out.bracket_len = H.lie.bracket_length(zdeg, zc) - 1;
  }
  out.depth = d1_depth(Y);
  out.whitehead = whitehead_length(Y);
  if (out.class_zero)
    out.transcript.push_back("attaching class is nullhomotopic");
  else
    out.transcript.push_back("attaching class has bracket length " +
                             std::to_string(*out.bracket_len));
  out.transcript.push_back(
      "target has depth " + std::to_string(out.depth) +
      " and Whitehead length " + std::to_string(out.whitehead));

  const bool hypothesis = out.class_zero || *out.bracket_len > out.depth;

  if (cap < T + 2) {
    out.status = SplitStatus::UnknownWithinCap;
    out.transcript.push_back(
        "cap " + std::to_string(cap) +
        " is too small to build the truncated models (need at least " +
        std::to_string(T + 2) + ")");
    return out;
  }

  // Chain slices and reduced models of both sides (slice top T = dim of the
  // enlarged source, same cap, base words kept word-to-word).
  FreeDGL Xt = dgl_adjunction(X, z, cell - 1, cell_name, T);
  auto CX = std::make_shared<ChainCoalgebra>(X, T + 1);
  auto CXt = std::make_shared<ChainCoalgebra>(Xt, T + 1);
  const int nx = static_cast<int>(X.gens().size());
  ChainBPlus BX = chain_bplus(CX, T, nx);
  ChainBPlus BXt = chain_bplus(CXt, T, nx);

  WordInclusion incl(*CX, *CXt);
  for (int n = 1; n <= T; ++n)
    for (const Monomial& w : BX.TC->kept(n))
      check_internal(BXt.TC->is_kept(incl(w)),
                     "truncation slices are not nested across the attachment");

  BSModel MX = based_bs_model(Y, BX.B, cap);
  BSModel Mt = based_bs_model(Y, BXt.B, cap);
  ReducedModel RX = minimal_reduce(MX);
  ReducedModel Rt = minimal_reduce(Mt);
  for (const auto& g : RX.R.T.gens) out.base_degrees.push_back(g.degree);
  for (const auto& g : Rt.R.T.gens) out.total_degrees.push_back(g.degree);
  out.transcript.push_back("reduced base model: " +
                           describe_gens(RX.R.T.gens));
  out.transcript.push_back("reduced total model: " +
                           describe_gens(Rt.R.T.gens));

  if (!hypothesis) {
    out.status = SplitStatus::HypothesisFails;
    out.transcript.push_back(
        "bracket length does not exceed the depth; the splitting hypothesis "
        "fails");
    bool base_zero = true;
    for (const auto& [id, p] : RX.R.diff)
      if (!poly_is_zero(p)) {
        base_zero = false;
        break;
      }
    std::string total_witness;
    for (const auto& g : Rt.R.T.gens)
      if (!poly_is_zero(Rt.R.d_gen(g.id))) {
        total_witness = g.name;
        break;
      }
    if (base_zero && !total_witness.empty()) {
      out.certified_nonsplit = true;
      out.nonsplit_reason =
          "the reduced base model has zero differential, so any product "
          "splitting would force the total model to be isomorphic to a "
          "differential-zero minimal model; its differential is nonzero on " +
          total_witness;
      out.transcript.push_back("certified: the mapping space does not split "
                               "off the base factor");
      out.transcript.push_back(out.nonsplit_reason);
    } else {
      out.nonsplit_reason =
          base_zero ? "both reduced models have zero differential; this "
                      "method gives no certificate"
                    : "the reduced base model has a nonzero differential; "
                      "this method gives no certificate";
      out.transcript.push_back("inconclusive beyond the hypothesis: " +
                               out.nonsplit_reason);
    }
    return out;
  }

  // Cone cycle c = s w + eta with d(eta) = s z, solved in the base slice
  // (solvable because the class of z is zero or bracket-decomposable, so its
  // suspension bounds).
  Vec eta;
  if (!z.is_zero()) {
    const auto& xkept = BX.TC->kept(cell);
    Solver sol(BX.TC->d_matrix(cell), xkept.size());
    Vec rhs = BX.TC->coords(CX->suspend(z), cell - 1);
    auto e = sol.solve(rhs);
    check_internal(e.has_value(),
                   "suspended attaching class fails to bound in the slice");
    eta = *e;
  }

  LieElement wgen = Xt.lie->normalize(BWord::leaf(nx));
  Polynomial swp = CXt->suspend(wgen);
  check_internal(swp.size() == 1 && swp.begin()->second == 1,
                 "suspension of the attached generator is not a single word");
  const Monomial sw = swp.begin()->first;
  check_internal(BXt.TC->is_kept(sw), "cone word dropped by the truncation");

  std::map<int, Q> ca;  // coalgebra element id -> coefficient of the cone cycle
  ca[BXt.id_of(sw)] = Q(1);
  {
    const auto& xkept = BX.TC->kept(cell);
    for (std::size_t i = 0; i < eta.size(); ++i)
      if (eta[i] != 0) ca[BXt.id_of(incl(xkept[i]))] += eta[i];
  }
  {
    std::map<int, Q> dca;
    for (const auto& [id, c] : ca)
      for (const auto& [tid, tc] : Mt.B->d_coords(id)) dca[tid] += c * tc;
    for (const auto& [tid, c] : dca)
      check_internal(c == 0, "cone representative is not a cycle");
  }
  {
    std::ostringstream os;
    bool first = true;
    for (const auto& [id, c] : ca) {
      if (c == 0) continue;
      os << (first ? "" : " + ") << q_str(c) << "*" << Mt.B->name(id);
      first = false;
    }
    out.c_alpha = os.str();
    out.transcript.push_back("cone cycle: " + out.c_alpha);
  }
  const auto& atc = Mt.B->at_degree(cell);
  Vec cav = zero_vec(atc.size());
  for (const auto& [id, c] : ca) cav[Mt.B->pos(id)] = c;

  // Product witness: free CDGA on the base model's generators plus one
  // differential-zero generator per target generator.
  std::vector<Generator> zg = RX.R.T.gens;
  std::map<int, Polynomial> zd;
  for (const auto& [id, p] : RX.R.diff)
    if (!poly_is_zero(p)) zd[id] = p;
  const int base_n = static_cast<int>(zg.size());
  std::vector<int> factor_of_ygen(Y.A.T.gens.size(), -1);
  for (const auto& v : Y.A.T.gens) {
    int fd = v.degree - cell;  // >= 1 by the connectivity requirement
    factor_of_ygen[static_cast<std::size_t>(v.id)] =
        static_cast<int>(zg.size());
    zg.push_back(Generator{static_cast<int>(zg.size()), "f{" + v.name + "}",
                           fd});
    out.factor_degrees.push_back(fd);
  }
  FreeCDGA Z = make_cdga(zg, zd, cap);

  // Map the witness into the pair model of the enlarged side: base
  // generators through the word-to-word inclusion of the slices, factor
  // generators to (target generator (x) cone cycle) plus a correction making
  // the image closed.
  std::vector<Polynomial> inclA(MX.A.T.gens.size());
  for (const auto& a : MX.A.T.gens) {
    auto [yv, ex] = MX.pair_of_gen[static_cast<std::size_t>(a.id)];
    int et = BXt.id_of(incl(BX.word_of_id[static_cast<std::size_t>(ex)]));
    inclA[static_cast<std::size_t>(a.id)] =
        mono_poly(Monomial{{Mt.pair_gen(yv, et)}}, Q(1));
  }
  std::vector<Polynomial> psi(zg.size());
  for (int i = 0; i < base_n; ++i)
    psi[static_cast<std::size_t>(i)] =
        substitute(Mt.A.T, inclA, RX.psi.at(i));

  auto try_tail = [&](const std::vector<Monomial>& cands, const Polynomial& J,
                      int fd) -> std::optional<Polynomial> {
    std::vector<Monomial> tgt = monomial_basis(Mt.A.T, fd + 1);
    Mat m(tgt.size(), zero_vec(cands.size()));
    for (std::size_t j = 0; j < cands.size(); ++j) {
      Vec col = poly_coords(Mt.A.T, Mt.A.d(mono_poly(cands[j], Q(1))), tgt);
      for (std::size_t i = 0; i < tgt.size(); ++i) m[i][j] = col[i];
    }
    Solver s(std::move(m), cands.size());
    auto x = s.solve(poly_coords(Mt.A.T, poly_scale(Q(-1), J), tgt));
    if (!x) return std::nullopt;
    Polynomial t;
    for (std::size_t j = 0; j < cands.size(); ++j)
      if ((*x)[j] != 0) t = poly_add(t, mono_poly(cands[j], (*x)[j]));
    return t;
  };

  for (const auto& v : Y.A.T.gens) {
    Polynomial lead = Mt.pair_poly(v.id, cell, cav);
    Polynomial image = lead;
    Polynomial J = Mt.A.d(lead);
    if (!poly_is_zero(J)) {
      const int fd = v.degree - cell;
      std::vector<Monomial> all = monomial_basis(Mt.A.T, fd);
      std::vector<Monomial> decomposable;
      for (const Monomial& mo : all)
        if (mo.factors.size() >= 2) decomposable.push_back(mo);
      auto tail = try_tail(decomposable, J, fd);
      if (!tail.has_value()) {
        // allow linear corrections too, except on the pinned cone pairs
        std::vector<Monomial> relaxed;
        for (const Monomial& mo : all) {
          if (mo.factors.size() == 1) {
            auto [yv, e] = Mt.pair_of_gen[static_cast<std::size_t>(
                mo.factors.front())];
            if (yv == v.id && ca.count(e)) continue;
          }
          relaxed.push_back(mo);
        }
        tail = try_tail(relaxed, J, fd);
      }
      check_internal(tail.has_value(),
                     "factor generator correction fails to close");
      if (!poly_is_zero(*tail)) ++out.nonzero_tails;
      image = poly_add(lead, *tail);
    }
    psi[static_cast<std::size_t>(
        factor_of_ygen[static_cast<std::size_t>(v.id)])] = image;
  }
  if (out.nonzero_tails > 0)
    out.transcript.push_back(std::to_string(out.nonzero_tails) +
                             " factor generator(s) needed a correction term");

  for (const auto& g : zg)
    check_internal(
        poly_is_zero(poly_sub(Mt.A.d(psi[static_cast<std::size_t>(g.id)]),
                              substitute(Mt.A.T, psi, Z.d_gen(g.id)))),
        "product witness fails to commute with the differentials");

  // Compare cohomology of the witness with the reduced total model through
  // the retraction, degree by degree.
  std::vector<Polynomial> chi(zg.size());
  for (const auto& g : zg)
    chi[static_cast<std::size_t>(g.id)] =
        substitute(Rt.R.T, Rt.retract, psi[static_cast<std::size_t>(g.id)]);
  Cohomology HZ(Z);
  Cohomology HR(Rt.R);
  for (int n = 1; n <= cap - 1; ++n) {
    int dz = HZ.dim(n);
    int dr = HR.dim(n);
    check_internal(dz == dr, "cohomology ranks disagree in degree " +
                                 std::to_string(n) + " (" +
                                 std::to_string(dz) + " vs " +
                                 std::to_string(dr) + ")");
    if (dz == 0) continue;
    Mat m;
    m.reserve(static_cast<std::size_t>(dz));
    for (const Polynomial& r : HZ.reps(n))
      m.push_back(HR.class_coords(substitute(Rt.R.T, chi, r), n));
    check_internal(rank(std::move(m)) == dz,
                   "product witness is not a cohomology isomorphism in "
                   "degree " +
                       std::to_string(n));
  }
  out.checked_up_to = cap - 1;
  out.status = SplitStatus::Splits;
  out.transcript.push_back(
      "witness verified: cohomology isomorphism through degree " +
      std::to_string(out.checked_up_to));
  return out;
}

Decomposition decompose(const FreeDGL& X, const MinimalModel& Y, int cap) {
  Decomposition out;
  check_input(cap >= 2, "cap must be at least 2");
  const auto& gens = X.gens();
  check_input(!gens.empty(), "source model has no generators");
  for (std::size_t i = 1; i < gens.size(); ++i)
    check_input(gens[i - 1].degree <= gens[i].degree,
                "generators must be listed in non-decreasing degree order");
  const int dimX = space_dimension(X);
  check_input(Y.connectivity() >= dimX,
              "target must be at least " + std::to_string(dimX) +
                  "-connected for this source (it is " +
                  std::to_string(Y.connectivity()) + "-connected)");

  out.depth = d1_depth(Y);
  out.all_split = true;
  for (const auto& g : gens) {
    CellStage st;
    st.name = g.name;
    st.cell_dim = g.degree + 1;
    ++out.cells_per_dim[st.cell_dim];
    LieElement z = X.d_gen(g.id);
    if (z.is_zero()) {
      st.class_zero = true;
      st.splits = true;
    } else {
      // The attaching class lives in the subcomplex spanned by the earlier
      // generators; its coordinates carry over because the Lie basis of the
      // subalgebra is a degreewise prefix of the full basis.
      std::vector<LieGenerator> bg(gens.begin(), gens.begin() + g.id);
      std::map<int, LieElement> bd;
      for (const auto& [id, e] : X.diff)
        if (id < g.id) bd.emplace(id, e);
      FreeDGL base = make_dgl(std::move(bg), std::move(bd), z.degree + 1);
      for (const auto& [idx, c] : z.coords)
        check_internal(idx < base.lie->dim(z.degree),
                       "attaching class leaves the stage subcomplex");
      DGLHomology H = dgl_homology(base, z.degree);
      Vec zc = H.class_coords(base, z, z.degree);
      if (is_zero_vec(zc)) {
        st.class_zero = true;
        st.splits = true;
      } else {
        st.bracket_len = H.lie.bracket_length(z.degree, zc) - 1;
        st.splits = *st.bracket_len > out.depth;
      }
    }
    out.all_split = out.all_split && st.splits;
    out.stages.push_back(std::move(st));
  }

  // Predicted generator counts of the mapping-space model: one generator per
  // (cell of dimension k, target generator of degree n + k).
  out.predicted_ranks.assign(static_cast<std::size_t>(cap) + 1, 0);
  for (const auto& [cdim, cnt] : out.cells_per_dim)
    for (const auto& v : Y.A.T.gens) {
      int n = v.degree - cdim;
      if (n >= 1 && n <= cap)
        out.predicted_ranks[static_cast<std::size_t>(n)] += cnt;
    }

  // Actual generator counts from the reduction.
  const int T = dimX;
  FreeDGL XT = (X.cap() >= T) ? X : dgl_with_cap(X, T);
  auto C = std::make_shared<ChainCoalgebra>(XT, T + 1);
  ChainBPlus BX = chain_bplus(C, T, static_cast<int>(gens.size()));
  BSModel M = based_bs_model(Y, BX.B, cap);
  ReducedModel R = minimal_reduce(M);
  out.reduction_ranks.assign(static_cast<std::size_t>(cap) + 1, 0);
  for (const auto& g : R.R.T.gens)
    if (g.degree <= cap)
      ++out.reduction_ranks[static_cast<std::size_t>(g.degree)];
  out.ranks_match = out.predicted_ranks == out.reduction_ranks;
  return out;
}

}  // namespace qsm
