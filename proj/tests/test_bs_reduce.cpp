#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <memory>
#include <vector>

#include "qsm/bs.hpp"
#include "qsm/cohomology.hpp"
#include "qsm/errors.hpp"
#include "qsm/fixtures.hpp"
#include "qsm/reduce.hpp"

using namespace qsm;

namespace {
// Shared slice for the plane-into-sphere model: the projective-plane source
// truncated at its dimension 4, two source generators kept word-to-word.
ChainBPlus plane_slice() {
  auto C = std::make_shared<ChainCoalgebra>(fixtures::projective_source(2, 4),
                                            5);
  return chain_bplus(C, 4, 2);
}

int gen_named(const FreeCDGA& A, const std::string& name) {
  for (const auto& g : A.T.gens)
    if (g.name == name) return g.id;
  REQUIRE_MESSAGE(false, "no generator named ", name);
  return -1;
}
}  // namespace

TEST_CASE("chain slice converts to a finite coalgebra faithfully") {
  ChainBPlus B = plane_slice();
  // degrees 2,3,4 hold si, s[i,i], {sw, si si}; the last degree keeps both
  // words (nothing above degree 4 maps onto it within the slice)
  CHECK(B.B->size() == 4);
  CHECK(B.B->top_degree() == 4);
  CHECK(B.B->at_degree(2).size() == 1);
  CHECK(B.B->at_degree(3).size() == 1);
  CHECK(B.B->at_degree(4).size() == 2);

  // ids map words consistently
  int si = B.C->letter_of(1, 0);
  int sii = B.C->letter_of(2, 0);
  int sw = B.C->letter_of(3, 0);
  int id_si = B.id_of(Monomial{{si}});
  int id_sii = B.id_of(Monomial{{sii}});
  int id_sw = B.id_of(Monomial{{sw}});
  int id_sisi = B.id_of(Monomial{{si, si}});
  CHECK(B.word_of_id[static_cast<std::size_t>(id_si)] == Monomial{{si}});
  CHECK(B.B->degree(id_si) == 2);
  CHECK(B.B->degree(id_sisi) == 4);

  // differential in coalgebra coordinates: d(sw) = -s[i,i], d(si si) = s[i,i]
  const auto& dsw = B.B->d_coords(id_sw);
  REQUIRE(dsw.size() == 1);
  CHECK(dsw[0].first == id_sii);
  CHECK(dsw[0].second == -1);
  const auto& dss = B.B->d_coords(id_sisi);
  REQUIRE(dss.size() == 1);
  CHECK(dss[0].first == id_sii);
  CHECK(dss[0].second == 1);
  CHECK(B.B->is_cycle(id_si));

  // reduced coproduct: si si -> si (x) si, everything else primitive
  const auto& cp = B.B->coproduct(id_sisi, 2);
  REQUIRE(cp.size() == 1);
  CHECK(cp.begin()->first == std::vector<int>{id_si, id_si});
  CHECK(cp.begin()->second == 1);
  CHECK(B.B->coproduct(id_sw, 2).empty());
  CHECK(B.B->coproduct(id_sisi, 3).empty());

  // iterated coproducts agree with the chain-level computation
  auto t2 = B.C->reduced_coproduct_iter(mono_poly(Monomial{{si, si}}, Q(1)), 2);
  REQUIRE(t2.size() == 1);
  CHECK(t2.begin()->second == cp.begin()->second);

  // abc split of the slice: degree 3 is all boundaries, homology lives in
  // degrees 2 and 4
  CHECK(B.B->homology_dim(2) == 1);
  CHECK(B.B->homology_dim(3) == 0);
  CHECK(B.B->homology_dim(4) == 1);
  // the degree-4 representative is -(sw + si si) in at_degree coordinates
  Vec c4 = B.B->c_vec(4, 0);
  REQUIRE(c4.size() == 2);
  CHECK(c4[B.B->pos(id_sw)] == -1);
  CHECK(c4[B.B->pos(id_sisi)] == -1);
  // and the TruncatedChains agree with the BPlus view of the same slice
  for (int n = 2; n <= 4; ++n)
    CHECK(B.B->homology_dim(n) == B.TC->homology_dim(n));
}

TEST_CASE("pair model of the plane into the six-sphere: exact differentials") {
  ChainBPlus B = plane_slice();
  MinimalModel Y = fixtures::sphere(6, 24);
  BSModel M = based_bs_model(Y, B.B, 24);

  // 2 target generators x 4 coalgebra elements = 8 pair generators
  REQUIRE(M.A.T.gens.size() == 8);
  // every differential squares to zero (validated by make_cdga, re-checked)
  for (const auto& g : M.A.T.gens)
    CHECK(poly_is_zero(M.A.d(M.A.d_gen(g.id))));

  int x_sw = gen_named(M.A, "x{sw}");
  int x_ss = gen_named(M.A, "x{si^si}");
  int x_sii = gen_named(M.A, "x{s[i,i]}");
  int x_si = gen_named(M.A, "x{si}");
  int y_sw = gen_named(M.A, "y{sw}");
  int y_ss = gen_named(M.A, "y{si^si}");
  int y_sii = gen_named(M.A, "y{s[i,i]}");
  int y_si = gen_named(M.A, "y{si}");

  // degrees: |v| - |beta|
  CHECK(M.A.T.degree(x_sw) == 2);
  CHECK(M.A.T.degree(x_si) == 4);
  CHECK(M.A.T.degree(y_sw) == 7);
  CHECK(M.A.T.degree(y_si) == 9);

  // linear part: (-1)^{|v|} v (x) d(beta); x even, y odd
  CHECK(M.A.d_gen(x_sw) == mono_poly(Monomial{{x_sii}}, Q(-1)));
  CHECK(M.A.d_gen(x_ss) == mono_poly(Monomial{{x_sii}}, Q(1)));
  CHECK(M.A.d_gen(y_sw) == mono_poly(Monomial{{y_sii}}, Q(1)));
  CHECK(poly_is_zero(M.A.d_gen(x_sii)));
  CHECK(poly_is_zero(M.A.d_gen(x_si)));
  CHECK(poly_is_zero(M.A.d_gen(y_sii)));
  CHECK(poly_is_zero(M.A.d_gen(y_si)));

  // quadratic part on y{si^si}: dy = x^2 pairs with si (x) si, giving
  // 2 x{si}^2 (the coefficient 2 from the two equal tensor slots); the sign
  // eps = |si|*|x| is even, the linear part contributes -y{s[i,i]}
  Polynomial want;
  poly_add_term(want, Monomial{{y_sii}}, Q(-1));
  poly_add_term(want, Monomial{{x_si, x_si}}, Q(2));
  CHECK(M.A.d_gen(y_ss) == want);

  // pair_poly reconstructs generators linearly over a coalgebra degree
  Vec v4 = zero_vec(2);
  v4[B.B->pos(B.id_of(Monomial{{B.C->letter_of(3, 0)}}))] = Q(1);
  Polynomial p = M.pair_poly(0, 4, v4);  // x paired with sw
  CHECK(p == mono_poly(Monomial{{x_sw}}, Q(1)));
}

TEST_CASE("reduction of the plane-sphere model hits the known minimal form") {
  ChainBPlus B = plane_slice();
  MinimalModel Y = fixtures::sphere(6, 24);
  BSModel M = based_bs_model(Y, B.B, 24);
  ReducedModel R = minimal_reduce(M);

  std::vector<int> degs;
  for (const auto& g : R.R.T.gens) degs.push_back(g.degree);
  std::sort(degs.begin(), degs.end());
  CHECK(degs == std::vector<int>{2, 4, 7, 9});

  // the unique nonzero differential: the degree-7 generator maps to
  // -2 (degree-4 generator)^2
  int g2 = -1, g4 = -1, g7 = -1, g9 = -1;
  for (const auto& g : R.R.T.gens) {
    if (g.degree == 2) g2 = g.id;
    if (g.degree == 4) g4 = g.id;
    if (g.degree == 7) g7 = g.id;
    if (g.degree == 9) g9 = g.id;
  }
  REQUIRE(g2 >= 0);
  REQUIRE(g4 >= 0);
  REQUIRE(g7 >= 0);
  REQUIRE(g9 >= 0);
  CHECK(R.R.d_gen(g7) == mono_poly(Monomial{{g4, g4}}, Q(-2)));
  CHECK(poly_is_zero(R.R.d_gen(g2)));
  CHECK(poly_is_zero(R.R.d_gen(g4)));
  CHECK(poly_is_zero(R.R.d_gen(g9)));

  // ranks bookkeeping
  CHECK(R.ranks[2] == 1);
  CHECK(R.ranks[4] == 1);
  CHECK(R.ranks[7] == 1);
  CHECK(R.ranks[9] == 1);
  int total = 0;
  for (int r : R.ranks) total += r;
  CHECK(total == 4);

  // info records the pairing provenance: degree-2 gen = x against degree-4
  // homology, degree-9 gen = y against degree-2 homology
  CHECK(R.info[static_cast<std::size_t>(g2)].ygen == 0);
  CHECK(R.info[static_cast<std::size_t>(g2)].bdegree == 4);
  CHECK(R.info[static_cast<std::size_t>(g9)].ygen == 1);
  CHECK(R.info[static_cast<std::size_t>(g9)].bdegree == 2);

  // psi is a chain map: d(psi(r)) = psi(d r) for every reduced generator
  std::vector<Polynomial> images(R.R.T.gens.size());
  for (const auto& [id, p] : R.psi) images[static_cast<std::size_t>(id)] = p;
  for (const auto& g : R.R.T.gens) {
    Polynomial lhs = M.A.d(images[static_cast<std::size_t>(g.id)]);
    Polynomial rhs = substitute(M.A.T, images, R.R.d_gen(g.id));
    CHECK_MESSAGE(lhs == rhs, "generator ", g.name);
  }

  // the retraction splits psi: retract(psi(r)) = r
  for (const auto& g : R.R.T.gens) {
    Polynomial back =
        substitute(R.R.T, R.retract, images[static_cast<std::size_t>(g.id)]);
    CHECK(back == mono_poly(Monomial{{g.id}}, Q(1)));
  }
}

TEST_CASE("attaching-class scale q flows linearly into the differential") {
  // same source with d(w) = 3[i,i]
  std::vector<LieGenerator> gens = {{0, "i", 1}, {1, "w", 3}};
  FreeLie L(gens, 4);
  LieElement ii = L.bracket(L.gen_element(0), L.gen_element(0));
  FreeDGL X = make_dgl(gens, {{1, L.scale(Q(3), ii)}}, 4);
  auto C = std::make_shared<ChainCoalgebra>(X, 5);
  ChainBPlus B = chain_bplus(C, 4, 2);
  MinimalModel Y = fixtures::sphere(6, 24);
  ReducedModel R = minimal_reduce(based_bs_model(Y, B.B, 24));
  int g4 = -1, g7 = -1;
  for (const auto& g : R.R.T.gens) {
    if (g.degree == 4) g4 = g.id;
    if (g.degree == 7) g7 = g.id;
  }
  REQUIRE(g4 >= 0);
  REQUIRE(g7 >= 0);
  CHECK(R.R.d_gen(g7) == mono_poly(Monomial{{g4, g4}}, Q(-6)));
}

TEST_CASE("loop-space models: sphere sources give a shifted free model") {
  // F(S^3, S^6): generators in degrees 6-2 and 11-2, zero differential
  auto C = std::make_shared<ChainCoalgebra>(fixtures::sphere_source(3, 3), 4);
  ChainBPlus B = chain_bplus(C, 3, 1);
  MinimalModel Y = fixtures::sphere(6, 24);
  ReducedModel R = minimal_reduce(based_bs_model(Y, B.B, 24));
  std::vector<int> degs;
  for (const auto& g : R.R.T.gens) {
    degs.push_back(g.degree);
    CHECK(poly_is_zero(R.R.d_gen(g.id)));
  }
  std::sort(degs.begin(), degs.end());
  CHECK(degs == std::vector<int>{4, 9});
}

TEST_CASE("cohomology of the reduced plane-sphere model") {
  ChainBPlus B = plane_slice();
  MinimalModel Y = fixtures::sphere(6, 24);
  ReducedModel R = minimal_reduce(based_bs_model(Y, B.B, 24));
  Cohomology H(R.R);
  // v2 free, v4 truncated by dv7 = -2 v4^2, v9 free: low degrees
  CHECK(H.dim(1) == 0);
  CHECK(H.dim(2) == 1);   // v2
  CHECK(H.dim(3) == 0);
  CHECK(H.dim(4) == 2);   // v2^2, v4
  CHECK(H.dim(6) == 2);   // v2^3, v2 v4
  CHECK(H.dim(7) == 0);   // v7 is not closed
  CHECK(H.dim(8) == 2);   // v2^4, v2^2 v4; v4^2 is exact
  CHECK(H.dim(9) == 1);   // v9; v2 v7 is not closed
}
