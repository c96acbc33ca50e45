#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "qsm/errors.hpp"
#include "qsm/fixtures.hpp"
#include "qsm/split.hpp"

using namespace qsm;

namespace {
LieElement square_class(const FreeDGL& X) {
  return X.lie->bracket(X.lie->gen_element(0), X.lie->gen_element(0));
}
}  // namespace

TEST_CASE("plane into six-sphere: hypothesis fails with a certificate") {
  FreeDGL S2 = fixtures::sphere_source(2, 3);
  SplitCheck r = splitting_check(S2, square_class(S2), 4, "w",
                                 fixtures::sphere(6, 24), 24);
  CHECK(r.status == SplitStatus::HypothesisFails);
  CHECK(to_string(r.status) == "hypothesis-fails");
  CHECK(!r.class_zero);
  REQUIRE(r.bracket_len.has_value());
  CHECK(*r.bracket_len == 1);
  CHECK(r.depth == 1);
  CHECK(r.whitehead == 1);
  CHECK(r.truncation == 4);
  CHECK(r.certified_nonsplit);
  CHECK(r.nonsplit_reason.find("differential") != std::string::npos);
  // base model F(S^2, S^6) has generators 4, 9; the enlarged side adds 2, 7
  std::vector<int> base = r.base_degrees, total = r.total_degrees;
  std::sort(base.begin(), base.end());
  std::sort(total.begin(), total.end());
  CHECK(base == std::vector<int>{4, 9});
  CHECK(total == std::vector<int>{2, 4, 7, 9});
  CHECK(!r.transcript.empty());
}

TEST_CASE("plane into the three-stage target: splits with a verified witness") {
  FreeDGL S2 = fixtures::sphere_source(2, 3);
  SplitCheck r = splitting_check(S2, square_class(S2), 4, "w",
                                 fixtures::three_stage(5, 6, 7, 17, 30), 30);
  CHECK(r.status == SplitStatus::Splits);
  CHECK(to_string(r.status) == "splits");
  REQUIRE(r.bracket_len.has_value());
  CHECK(*r.bracket_len == 1);
  CHECK(r.depth == 0);
  CHECK(r.whitehead == 0);
  CHECK(r.checked_up_to == 29);
  CHECK(!r.c_alpha.empty());
  CHECK(!r.certified_nonsplit);

  // factor generators sit cell degrees below the target generators
  std::vector<int> factor = r.factor_degrees;
  std::sort(factor.begin(), factor.end());
  CHECK(factor == std::vector<int>{1, 2, 3, 13});

  // quasi-isomorphic minimal models have identical generator degrees:
  // total = base + factor as multisets
  std::vector<int> lhs = r.total_degrees;
  std::vector<int> rhs = r.base_degrees;
  rhs.insert(rhs.end(), r.factor_degrees.begin(), r.factor_degrees.end());
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  CHECK(lhs == rhs);
}

TEST_CASE("nullhomotopic attachment splits a wedge factor off") {
  FreeDGL S2 = fixtures::sphere_source(2, 3);
  SplitCheck r = splitting_check(S2, S2.lie->zero(2), 4, "w",
                                 fixtures::sphere(6, 18), 18);
  CHECK(r.status == SplitStatus::Splits);
  CHECK(r.class_zero);
  CHECK(!r.bracket_len.has_value());
  // factor = loops of the sphere shifted by the cell: degrees 6-4, 11-4
  std::vector<int> factor = r.factor_degrees;
  std::sort(factor.begin(), factor.end());
  CHECK(factor == std::vector<int>{2, 7});
}

TEST_CASE("cap too small to build the models reports unknown") {
  FreeDGL S2 = fixtures::sphere_source(2, 3);
  SplitCheck r = splitting_check(S2, square_class(S2), 4, "w",
                                 fixtures::sphere(6, 18), 5);
  CHECK(r.status == SplitStatus::UnknownWithinCap);
  CHECK(to_string(r.status) == "unknown-within-cap");
  CHECK(!r.certified_nonsplit);
}

TEST_CASE("length-two attachment splits off a positive-depth target") {
  // wedge of two 2-spheres, cell attached along [a,[a,b]] (bracket length 2);
  // the six-sphere has depth 1, and 2 > 1, so the mapping space splits even
  // though the hypothesis of the certificate test fails for length-one cells.
  FreeDGL W = fixtures::wedge_source({2, 2}, 5);
  LieElement a = W.lie->gen_element(0);
  LieElement b = W.lie->gen_element(1);
  LieElement z = W.lie->bracket(a, W.lie->bracket(a, b));
  REQUIRE(!z.is_zero());
  SplitCheck r = splitting_check(W, z, 5, "u", fixtures::sphere(6, 12), 12);
  CHECK(r.status == SplitStatus::Splits);
  CHECK(!r.class_zero);
  REQUIRE(r.bracket_len.has_value());
  CHECK(*r.bracket_len == 2);
  CHECK(r.depth == 1);
  CHECK(r.whitehead == 1);
  CHECK(r.truncation == 5);
  CHECK(r.checked_up_to == 11);
  std::vector<int> factor = r.factor_degrees;
  std::sort(factor.begin(), factor.end());
  CHECK(factor == std::vector<int>{1, 6});
}

TEST_CASE("input validation") {
  FreeDGL P = fixtures::projective_source(2, 5);
  // attaching class degree must be cell - 2
  LieElement i = P.lie->gen_element(0);
  CHECK_THROWS_AS(splitting_check(P, i, 4, "e", fixtures::sphere(6, 18), 18),
                  input_error);
  // attaching class must be a cycle: w has d(w) = [i,i] != 0
  LieElement w = P.lie->gen_element(1);
  CHECK_THROWS_AS(splitting_check(P, w, 5, "e", fixtures::sphere(6, 18), 18),
                  input_error);
  // target must be connected enough for the enlarged dimension
  FreeDGL S2 = fixtures::sphere_source(2, 3);
  CHECK_THROWS_AS(splitting_check(S2, square_class(S2), 4, "w",
                                  fixtures::projective(2, 18), 18),
                  input_error);
}

TEST_CASE("stagewise decomposition of the two-planes complex") {
  Decomposition d = decompose(fixtures::two_planes_source(4),
                              fixtures::cayley_plane(25), 24);
  CHECK(d.all_split);
  CHECK(d.depth == 0);
  REQUIRE(d.stages.size() == 5);
  CHECK(d.cells_per_dim == std::map<int, int>{{2, 2}, {4, 3}});
  // the two 2-cells attach trivially; the three 4-cells attach along
  // length-one brackets, which still exceed the depth 0
  for (const auto& s : d.stages) CHECK(s.splits);
  CHECK(d.stages[0].class_zero);
  CHECK(d.stages[1].class_zero);
  for (int k = 2; k < 5; ++k) {
    REQUIRE(d.stages[static_cast<std::size_t>(k)].bracket_len.has_value());
    CHECK(*d.stages[static_cast<std::size_t>(k)].bracket_len == 1);
    CHECK(d.stages[static_cast<std::size_t>(k)].cell_dim == 4);
  }

  // rank formula: each k-cell contributes dim V^{n+k} generators in degree n
  CHECK(d.ranks_match);
  CHECK(d.predicted_ranks == d.reduction_ranks);
  CHECK(d.reduction_ranks[4] == 3);
  CHECK(d.reduction_ranks[6] == 2);
  CHECK(d.reduction_ranks[19] == 3);
  CHECK(d.reduction_ranks[21] == 2);
  int total = 0;
  for (int r : d.reduction_ranks) total += r;
  CHECK(total == 10);
}

TEST_CASE("decomposition rejects a target that is not connected enough") {
  CHECK_THROWS_AS(decompose(fixtures::projective_source(3, 6),
                            fixtures::sphere(6, 18), 18),
                  input_error);
}
