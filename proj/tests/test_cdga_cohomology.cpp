#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsm/cdga.hpp"
#include "qsm/cohomology.hpp"
#include "qsm/errors.hpp"
#include "qsm/fixtures.hpp"
#include "qsm/sullivan.hpp"

using namespace qsm;

namespace {
// Sullivan model of S^{2n} built by hand: x in degree 2n, y in degree 4n-1,
// dy = x^2.
FreeCDGA even_sphere(int n2, int cap) {
  return make_cdga({{0, "x", n2}, {1, "y", 2 * n2 - 1}},
                   {{1, mono_poly(Monomial{{0, 0}}, Q(1))}}, cap);
}
// Sullivan model of CP^n: x degree 2, y degree 2n+1, dy = x^{n+1}.
FreeCDGA proj_space(int n, int cap) {
  return make_cdga(
      {{0, "x", 2}, {1, "y", 2 * n + 1}},
      {{1, mono_poly(Monomial{std::vector<int>(n + 1, 0)}, Q(1))}}, cap);
}
}  // namespace

TEST_CASE("make_cdga validates its input") {
  // d must raise degree by exactly 1
  CHECK_THROWS_AS(
      make_cdga({{0, "x", 2}, {1, "y", 6}},
                {{1, mono_poly(Monomial{{0, 0}}, Q(1))}}, 10),
      internal_error);
  // d*d must vanish: d(a) = b, d(b) = a b gives d(d(a)) = a b != 0
  CHECK_THROWS_AS(make_cdga({{0, "a", 1}, {1, "b", 2}},
                            {{0, mono_poly(Monomial{{1}}, Q(1))},
                             {1, mono_poly(Monomial{{0, 1}}, Q(1))}},
                            10),
                  internal_error);
  // duplicate names rejected
  CHECK_THROWS_AS(make_cdga({{0, "x", 2}, {1, "x", 4}}, {}, 10),
                  internal_error);
  // degree 0 generators rejected
  CHECK_THROWS_AS(make_cdga({{0, "x", 0}}, {}, 10), internal_error);
}

TEST_CASE("differential acts as a derivation on the whole algebra") {
  FreeCDGA A = even_sphere(2, 12);  // S^4 model
  // d(x y) = x * x^2 = x^3
  Polynomial xy = mono_poly(Monomial{{0, 1}}, Q(1));
  CHECK(A.d(xy) == mono_poly(Monomial{{0, 0, 0}}, Q(1)));
  // d is exact on d-images: d(d(anything)) = 0
  CHECK(poly_is_zero(A.d(A.d(xy))));
  CHECK(poly_is_zero(A.d(A.d_gen(1))));
}

TEST_CASE("cohomology of an even sphere model") {
  FreeCDGA A = even_sphere(3, 14);  // S^6: x degree 6, y degree 11
  Cohomology H(A);
  CHECK(H.max_degree() == 13);
  CHECK(H.dim(0) == 1);
  CHECK(H.dim(6) == 1);
  for (int n : {1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 13})
    CHECK_MESSAGE(H.dim(n) == 0, "degree ", n);
  // x^2 is a coboundary, x is not
  CHECK(H.is_coboundary(mono_poly(Monomial{{0, 0}}, Q(1)), 12));
  CHECK(!H.is_coboundary(mono_poly(Monomial{{0}}, Q(1)), 6));
  Vec c = H.class_coords(mono_poly(Monomial{{0}}, Q(3)), 6);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == 3);
}

TEST_CASE("cohomology of projective-space models is the truncated algebra") {
  FreeCDGA A = proj_space(3, 10);  // CP^3, H = Q[x]/(x^4)
  Cohomology H(A);
  for (int n = 0; n <= 7; ++n)
    CHECK_MESSAGE(H.dim(n) == ((n % 2 == 0 && n <= 6) ? 1 : 0), "degree ", n);
  CHECK(H.dim(8) == 0);  // x^4 = dy is exact
  CHECK(H.dim(9) == 0);
  CHECK(H.is_coboundary(mono_poly(Monomial{{0, 0, 0, 0}}, Q(1)), 8));
}

TEST_CASE("cup length measures the longest nonzero product") {
  CHECK(cup_length(proj_space(2, 8)).value == 2);
  CHECK(cup_length(proj_space(3, 9)).value == 3);
  CHECK(cup_length(even_sphere(3, 14)).value == 1);
  // zero-differential model on one even generator: products keep going until
  // the cap, and the report says the value is cap-limited
  FreeCDGA free_even = make_cdga({{0, "x", 2}}, {}, 9);
  CupLength c = cup_length(free_even);
  CHECK(c.value == 4);  // x^4 has degree 8 < 9
  CHECK(c.within_cap_only);
}

TEST_CASE("freeness report: free case") {
  // Lambda(x3) (x) Lambda(x5): odd generators, cohomology is the exterior
  // algebra, which is free graded-commutative.
  FreeCDGA A = make_cdga({{0, "u", 3}, {1, "v", 5}}, {}, 12);
  FreenessReport r = cohomology_freeness(A);
  CHECK(r.free_within_cap);
  CHECK(r.relation.empty());
  CHECK(r.generator_degrees == std::vector<int>{3, 5});
}

TEST_CASE("freeness report: truncated polynomial algebra is not free") {
  FreeCDGA A = proj_space(2, 10);  // H = Q[x]/(x^3)
  FreenessReport r = cohomology_freeness(A);
  CHECK(!r.free_within_cap);
  CHECK(r.failing_degree == 6);  // x^3 is the first vanishing power
  CHECK(!r.relation.empty());
  CHECK(r.generator_degrees == std::vector<int>{2});
}

TEST_CASE("cohomology of the fixture targets matches their construction") {
  // three-stage fixture: generators 5, 6, 7, 17 with dy = x1 x2 x3; cohomology
  // in low degrees is the free algebra until the relation degree 18
  MinimalModel Y = fixtures::three_stage(5, 6, 7, 17, 20);
  Cohomology H(Y.A);
  CHECK(H.dim(5) == 1);
  CHECK(H.dim(6) == 1);
  CHECK(H.dim(7) == 1);
  CHECK(H.dim(11) == 1);   // x1 x2
  CHECK(H.dim(12) == 2);   // x1 x3 and x2^2
  CHECK(H.dim(13) == 1);   // x2 x3
  CHECK(H.dim(17) == 1);   // x1 x2^2 survives; y itself is not closed
  CHECK(H.dim(18) == 1);   // x2^3 survives, x1 x2 x3 = dy dies
  CHECK(H.is_coboundary(mono_poly(Monomial{{0, 1, 2}}, Q(1)), 18));
  // Cayley-plane model: H = Q[x8]/(x^3) with top degree 23 generator
  MinimalModel C = fixtures::cayley_plane(26);
  Cohomology HC(C.A);
  CHECK(HC.dim(8) == 1);
  CHECK(HC.dim(16) == 1);
  CHECK(HC.dim(24) == 0);
  CHECK(cup_length(C.A).value == 2);
}
