#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsm/cdga.hpp"
#include "qsm/errors.hpp"

using namespace qsm;

namespace {
// a, b odd; x even
GenTable table3() {
  return make_gen_table({{0, "a", 3}, {1, "b", 5}, {2, "x", 2}});
}
}  // namespace

TEST_CASE("monomial canonical order: length first, then lex") {
  Monomial u{{0}}, v{{1}}, uv{{0, 1}}, xx{{2, 2}};
  CHECK(u < v);
  CHECK(v < uv);       // shorter words come first
  CHECK(uv < xx);      // same length: lexicographic on ids
  CHECK(!(uv < uv));
  CHECK(uv == Monomial{{0, 1}});
}

TEST_CASE("normalize_monomial computes Koszul signs") {
  GenTable T = table3();

  // odd-odd transposition flips the sign
  NormResult r = normalize_monomial(T, {1, 0});
  CHECK(!r.zero);
  CHECK(r.sign == -1);
  CHECK(r.mono == Monomial{{0, 1}});

  // repeated odd generator is zero
  CHECK(normalize_monomial(T, {0, 0}).zero);
  CHECK(normalize_monomial(T, {1, 2, 1}).zero);

  // moving an even generator across an odd one costs nothing
  NormResult s = normalize_monomial(T, {2, 0, 2});
  CHECK(!s.zero);
  CHECK(s.sign == 1);
  CHECK(s.mono == Monomial{{0, 2, 2}});

  // already sorted input is untouched
  NormResult t = normalize_monomial(T, {0, 1});
  CHECK(t.sign == 1);
  CHECK(t.mono == Monomial{{0, 1}});
}

TEST_CASE("koszul flip guard flips exactly the odd-odd sign and restores") {
  GenTable T = table3();
  CHECK(!koszul_flipped());
  {
    KoszulFlipGuard guard;
    CHECK(koszul_flipped());
    CHECK(normalize_monomial(T, {1, 0}).sign == +1);  // flipped
    CHECK(normalize_monomial(T, {2, 0, 2}).sign == +1);  // even moves unaffected
  }
  CHECK(!koszul_flipped());
  CHECK(normalize_monomial(T, {1, 0}).sign == -1);
}

TEST_CASE("graded-commutative multiplication") {
  GenTable T = table3();
  Polynomial a = mono_poly(Monomial{{0}}, Q(1));
  Polynomial b = mono_poly(Monomial{{1}}, Q(1));
  Polynomial x = mono_poly(Monomial{{2}}, Q(1));

  // odd squares vanish: (a+b)^2 = ab + ba = ab - ab = 0
  Polynomial apb = poly_add(a, b);
  CHECK(poly_is_zero(poly_mul(T, apb, apb)));

  // ba = -ab
  Polynomial ab = poly_mul(T, a, b);
  Polynomial ba = poly_mul(T, b, a);
  CHECK(poly_is_zero(poly_add(ab, ba)));

  // even generator is central
  CHECK(poly_mul(T, x, a) == poly_mul(T, a, x));

  // distributivity with rational coefficients
  Polynomial p = poly_add(poly_scale(Q(1) / 2, a), poly_scale(Q(1) / 3, x));
  Polynomial q = poly_mul(T, p, b);
  Polynomial want;
  poly_add_term(want, Monomial{{0, 1}}, Q(1) / 2);
  poly_add_term(want, Monomial{{1, 2}}, Q(1) / 3);
  CHECK(q == want);
}

TEST_CASE("polynomial utilities") {
  GenTable T = table3();
  Polynomial p;
  poly_add_term(p, Monomial{{0}}, Q(2));
  poly_add_term(p, Monomial{{0}}, Q(-2));  // cancels to zero
  CHECK(poly_is_zero(p));

  Polynomial q;
  poly_add_term(q, Monomial{{2, 2, 2, 2}}, Q(1));  // x^4, degree 8
  poly_add_term(q, Monomial{{0, 1}}, Q(3));        // ab, degree 8
  CHECK(poly_degree(T, q) == 8);
  CHECK(max_wordlength(q) == 4);
  CHECK(wordlength_part(q, 2) == mono_poly(Monomial{{0, 1}}, Q(3)));
  CHECK(poly_is_zero(wordlength_part(q, 1)));

  poly_axpy(q, Q(-3), mono_poly(Monomial{{0, 1}}, Q(1)));
  CHECK(q == mono_poly(Monomial{{2, 2, 2, 2}}, Q(1)));

  // inhomogeneous polynomial is rejected by poly_degree
  Polynomial bad;
  poly_add_term(bad, Monomial{{0}}, Q(1));
  poly_add_term(bad, Monomial{{1}}, Q(1));
  CHECK_THROWS_AS(poly_degree(T, bad), internal_error);
}

TEST_CASE("derivations obey the graded Leibniz rule") {
  GenTable T = table3();
  // D of degree +1 with D(a) = x^2, D(x) = 0, D(b) = 0
  std::map<int, Polynomial> values;
  values[0] = mono_poly(Monomial{{2, 2}}, Q(1));

  // D(a x) = D(a) x + (-1)^{1*|a|} a D(x) = x^3
  Polynomial ax = mono_poly(Monomial{{0, 2}}, Q(1));
  CHECK(apply_derivation(T, values, 1, ax) ==
        mono_poly(Monomial{{2, 2, 2}}, Q(1)));

  // D(ab) = x^2 b; the sign for passing D over a shows up on the b-term only
  Polynomial ab = mono_poly(Monomial{{0, 1}}, Q(1));
  CHECK(apply_derivation(T, values, 1, ab) ==
        mono_poly(Monomial{{1, 2, 2}}, Q(1)));

  // degree-r sign: with r = 1 and |a| odd, D(a * a') picks up (-1)^{|a|}
  std::map<int, Polynomial> db;
  db[1] = mono_poly(Monomial{{0, 2}}, Q(1));  // D(b) = a x
  // D(a b) = (-1)^{1*3} a (a x) = 0 since a^2 = 0
  CHECK(poly_is_zero(apply_derivation(T, db, 1, ab)));
  // D(x b) = x a x = a x^2
  CHECK(apply_derivation(T, db, 1, mono_poly(Monomial{{1, 2}}, Q(1))) ==
        mono_poly(Monomial{{0, 2, 2}}, Q(1)));
}

TEST_CASE("substitution is an algebra map") {
  GenTable T = table3();
  GenTable S = make_gen_table({{0, "u", 3}, {1, "t", 2}});
  // a -> u, b -> u*t, x -> t
  std::vector<Polynomial> images = {
      mono_poly(Monomial{{0}}, Q(1)),
      mono_poly(Monomial{{0, 1}}, Q(1)),
      mono_poly(Monomial{{1}}, Q(1)),
  };
  // a*b + 2 x^2  ->  u * u t + 2 t^2 = 0 + 2 t^2
  Polynomial p;
  poly_add_term(p, Monomial{{0, 1}}, Q(1));
  poly_add_term(p, Monomial{{2, 2}}, Q(2));
  // a*b maps to u*(u*t) which vanishes (odd square)
  Polynomial got = substitute(S, images, p);
  CHECK(got == mono_poly(Monomial{{1, 1}}, Q(2)));
}

TEST_CASE("monomial basis enumeration matches hand counts") {
  GenTable T = make_gen_table({{0, "a", 3}, {1, "x", 2}});
  CHECK(monomial_basis(T, 0).size() == 1);  // the unit
  CHECK(monomial_basis(T, 1).empty());
  CHECK(monomial_basis(T, 2) == std::vector<Monomial>{Monomial{{1}}});
  CHECK(monomial_basis(T, 3) == std::vector<Monomial>{Monomial{{0}}});
  CHECK(monomial_basis(T, 5) == std::vector<Monomial>{Monomial{{0, 1}}});
  // degree 8: x^4 only (a needs a 5-chunk partner which does not exist)
  CHECK(monomial_basis(T, 8) ==
        std::vector<Monomial>{Monomial{{1, 1, 1, 1}}});
  // degree 7: a x^2
  CHECK(monomial_basis(T, 7) == std::vector<Monomial>{Monomial{{0, 1, 1}}});
  // restricted alphabet
  CHECK(monomial_basis(T, 3, {1}).empty());
  CHECK(monomial_basis(T, 4, {1}).size() == 1);
}

TEST_CASE("coordinates round-trip through the monomial basis") {
  GenTable T = table3();
  auto basis = monomial_basis(T, 8);  // contains ab and x^4 among others
  REQUIRE(basis.size() >= 2);
  Polynomial p;
  poly_add_term(p, Monomial{{0, 1}}, Q(5) / 7);
  poly_add_term(p, Monomial{{2, 2, 2, 2}}, Q(-3));
  Vec c = poly_coords(T, p, basis);
  CHECK(coords_poly(basis, c) == p);

  // a monomial outside the basis is rejected
  Polynomial q = mono_poly(Monomial{{0}}, Q(1));  // degree 3, not 8
  CHECK_THROWS_AS(poly_coords(T, q, basis), internal_error);
}

TEST_CASE("poly_to_string is stable and readable") {
  GenTable T = table3();
  Polynomial p;
  poly_add_term(p, Monomial{{0, 1}}, Q(-1));
  poly_add_term(p, Monomial{{2, 2}}, Q(1) / 2);
  std::string s = poly_to_string(T, p);
  CHECK(s.find("a*b") != std::string::npos);
  CHECK(s.find("x*x") != std::string::npos);
  CHECK(s.find("1/2") != std::string::npos);
  CHECK(poly_to_string(T, poly_zero()) == "0");
}
