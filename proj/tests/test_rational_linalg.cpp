#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsm/errors.hpp"
#include "qsm/linalg.hpp"
#include "qsm/rational.hpp"

using namespace qsm;

TEST_CASE("rational parsing and printing") {
  CHECK(q_parse("3/6") == Q(1) / 2);
  CHECK(q_str(q_parse("3/6")) == "1/2");
  CHECK(q_parse("-4/2") == Q(-2));
  CHECK(q_str(q_parse("-4/2")) == "-2");
  CHECK(q_parse("0/5") == 0);
  CHECK(q_str(Q(0)) == "0");
  CHECK(q_parse("7") == 7);
  CHECK(q_parse("-1/3") + q_parse("1/3") == 0);
  CHECK(q_str(Q(22) / 7) == "22/7");
  // big values stay exact
  Q big = q_parse("123456789012345678901234567890/2");
  CHECK(q_str(big * 2) == "123456789012345678901234567890");

  CHECK_THROWS_AS(q_parse("1/0"), input_error);
  CHECK_THROWS_AS(q_parse("abc"), input_error);
  CHECK_THROWS_AS(q_parse(""), input_error);
  CHECK_THROWS_AS(q_parse("1.5"), input_error);
  CHECK(q_is_zero(Q(0)));
  CHECK(!q_is_zero(Q(1) / 1000000));
}

TEST_CASE("vector helpers") {
  Vec v = zero_vec(3);
  CHECK(is_zero_vec(v));
  Vec e1 = unit_vec(3, 1);
  CHECK(e1[1] == 1);
  CHECK(e1[0] == 0);
  Vec w = vec_add(e1, vec_scale(Q(2), unit_vec(3, 2)));
  CHECK(w == Vec{Q(0), Q(1), Q(2)});
  vec_axpy(Q(-1) / 2, w, w);  // w := w - w/2 = w/2
  CHECK(w == Vec{Q(0), Q(1) / 2, Q(1)});
}

TEST_CASE("rank and rref on exact rationals") {
  // rank-deficient because 1/2 * 2/15 == 1/3 * 1/5 exactly
  Mat m = {{Q(1) / 2, Q(1) / 3}, {Q(1) / 5, Q(2) / 15}};
  CHECK(rank(Mat(m)) == 1);

  Mat dep = {{Q(1), Q(2)}, {Q(2), Q(4)}};
  CHECK(rank(Mat(dep)) == 1);

  Mat id3 = {{Q(1), Q(0), Q(0)}, {Q(0), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}};
  CHECK(rank(Mat(id3)) == 3);

  Mat r = dep;
  rref(r);
  CHECK(r[0] == Vec{Q(1), Q(2)});
  CHECK(is_zero_vec(r[1]));
  // rref is idempotent
  Mat r2 = r;
  rref(r2);
  CHECK(r2 == r);
}

TEST_CASE("kernel basis") {
  Mat m = {{Q(1), Q(2)}, {Q(2), Q(4)}};
  auto ker = kernel_basis(m, 2);
  REQUIRE(ker.size() == 1);
  // the kernel vector satisfies x + 2y = 0
  CHECK(ker[0][0] + 2 * ker[0][1] == 0);
  CHECK(!is_zero_vec(ker[0]));

  // full-rank map has trivial kernel
  Mat id2 = {{Q(1), Q(0)}, {Q(0), Q(1)}};
  CHECK(kernel_basis(id2, 2).empty());

  // zero map: kernel is everything
  Mat z(2, zero_vec(3));
  CHECK(kernel_basis(z, 3).size() == 3);
}

TEST_CASE("row space membership") {
  RowSpace S(3);
  CHECK(S.add(Vec{Q(1), Q(0), Q(1)}));
  CHECK(S.add(Vec{Q(0), Q(1), Q(1)}));
  CHECK(S.dim() == 2);
  // dependent vector: adding does not grow the space
  CHECK(!S.add(Vec{Q(1), Q(1), Q(2)}));
  CHECK(S.dim() == 2);
  CHECK(S.contains(Vec{Q(2), Q(-3), Q(-1)}));
  CHECK(!S.contains(Vec{Q(0), Q(0), Q(1)}));
  Vec res = S.residual(Vec{Q(1), Q(1), Q(2)});
  CHECK(is_zero_vec(res));
}

TEST_CASE("solver finds exact preimages") {
  Mat m = {{Q(2), Q(0)}, {Q(0), Q(3)}};
  Solver s(std::move(m), 2);
  auto x = s.solve(Vec{Q(4), Q(1)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == Q(1) / 3);
  CHECK(s.rank() == 2);

  Mat sing = {{Q(1), Q(2)}, {Q(2), Q(4)}};
  Solver t(std::move(sing), 2);
  CHECK(!t.solve(Vec{Q(1), Q(0)}).has_value());   // inconsistent
  auto y = t.solve(Vec{Q(1), Q(2)});              // consistent
  REQUIRE(y.has_value());
  CHECK((*y)[0] + 2 * (*y)[1] == 1);
}
