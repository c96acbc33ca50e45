#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "qsm/chains.hpp"
#include "qsm/cohomology.hpp"
#include "qsm/errors.hpp"
#include "qsm/fixtures.hpp"
#include "qsm/freelie.hpp"

using namespace qsm;

TEST_CASE("letters suspend the Lie basis with a degree shift of one") {
  ChainCoalgebra C(fixtures::projective_source(2, 4), 5);
  // Lie degrees 1..4 hold i, [i,i], w, [i,w]; letters get degree +1
  int si = C.letter_of(1, 0);
  int sii = C.letter_of(2, 0);
  int sw = C.letter_of(3, 0);
  int siw = C.letter_of(4, 0);
  CHECK(C.letters().degree(si) == 2);
  CHECK(C.letters().degree(sii) == 3);
  CHECK(C.letters().degree(sw) == 4);
  CHECK(C.letters().degree(siw) == 5);
  CHECK(C.lie_of_letter(sw) == std::pair<int, int>{3, 0});

  // suspension is linear
  const FreeLie& L = *C.dgl().lie;
  LieElement z = L.add(L.gen_element(1), L.scale(Q(2), L.basis_element(3, 0)));
  Polynomial sz = C.suspend(z);
  CHECK(sz == mono_poly(Monomial{{sw}}, Q(3)));
}

TEST_CASE("pinned sign: the quadratic part sends si.si to +s[i,i]") {
  // On the 2-sphere model (one generator of Lie degree 1, zero differential)
  // the whole differential of the word si si is the cobracket term, whose
  // sign convention is pinned here once and for all.
  ChainCoalgebra C(fixtures::sphere_source(2, 3), 4);
  int si = C.letter_of(1, 0);
  int sii = C.letter_of(2, 0);
  Polynomial d = C.d_word(Monomial{{si, si}});
  CHECK(d == mono_poly(Monomial{{sii}}, Q(1)));
}

TEST_CASE("pinned sign: the linear part sends sw to -s(dw)") {
  ChainCoalgebra C(fixtures::projective_source(2, 4), 5);
  int sw = C.letter_of(3, 0);
  int sii = C.letter_of(2, 0);
  Polynomial d = C.d_word(Monomial{{sw}});
  // d_v(sx) = -s(dx), and the word si si also maps onto s[i,i]; together
  // d(sw + si si) = 0 -- checked in the homology test below. Here the letter:
  CHECK(d == mono_poly(Monomial{{sii}}, Q(-1)));
}

TEST_CASE("word enumeration and differential combinatorics") {
  ChainCoalgebra C(fixtures::projective_source(2, 5), 6);
  int si = C.letter_of(1, 0);
  int sw = C.letter_of(3, 0);
  // degree 4 words: sw and si si
  auto w4 = C.words(4);
  REQUIRE(w4.size() == 2);
  CHECK(w4[0] == Monomial{{sw}});
  CHECK(w4[1] == Monomial{{si, si}});
  // degree 2: just si; degree 3: s[i,i]; degree 5: s[i,w] and si s[i,i]
  CHECK(C.words(2).size() == 1);
  CHECK(C.words(3).size() == 1);
  CHECK(C.words(5).size() == 2);

  // d is a coderivation with square zero on every materialized degree
  for (int n = 2; n <= 6; ++n)
    for (const Monomial& w : C.words(n))
      CHECK_MESSAGE(poly_is_zero(C.d_poly(C.d_word(w))), "degree ", n);

  // d_matrix shape: rows index degree n-1 words, columns degree n words
  Mat m = C.d_matrix(4);
  CHECK(m.size() == C.words(3).size());
  REQUIRE(!m.empty());
  CHECK(m[0].size() == C.words(4).size());
  // column of sw is -1, column of si si is +1 (the two pinned signs)
  CHECK(m[0][0] == -1);
  CHECK(m[0][1] == 1);
}

TEST_CASE("reduced coproduct splits words into tensor factors") {
  ChainCoalgebra C(fixtures::sphere_source(2, 4), 5);
  int si = C.letter_of(1, 0);

  // two-letter word: exactly the si (x) si split
  auto t2 = C.reduced_coproduct(Monomial{{si, si}});
  REQUIRE(t2.size() == 1);
  auto it = t2.begin();
  CHECK(it->first.first == Monomial{{si}});
  CHECK(it->first.second == Monomial{{si}});
  CHECK(it->second == 1);

  // single letters are primitive
  CHECK(C.reduced_coproduct(Monomial{{si}}).empty());

  // three-letter word: the 2-fold coproduct has splits 1|2 and 2|1; the
  // iterated 3-fold coproduct has the single full split with multiplicity
  auto t3 = C.reduced_coproduct(Monomial{{si, si, si}});
  Q total;
  for (const auto& [pr, c] : t3) {
    (void)pr;
    total += c;
  }
  CHECK(t3.size() == 2);  // (si | si si) and (si si | si)

  auto t3i = C.reduced_coproduct_iter(mono_poly(Monomial{{si, si, si}}, Q(1)), 3);
  REQUIRE(t3i.size() == 1);
  CHECK(t3i.begin()->first ==
        std::vector<Monomial>{Monomial{{si}}, Monomial{{si}}, Monomial{{si}}});

  // coassociativity cross-check: iterating the reduced coproduct twice equals
  // the 3-fold version (on an even-letter word there are no signs to track)
  Q iter_coeff = t3i.begin()->second;
  Q manual;
  for (const auto& [pr, c] : t3) {
    auto left = C.reduced_coproduct(pr.first);
    for (const auto& [lp, lc] : left)
      if (lp.first == Monomial{{si}} && lp.second == Monomial{{si}} &&
          pr.second == Monomial{{si}})
        manual += c * lc;
  }
  CHECK(manual == iter_coeff);
}

TEST_CASE("truncated slice is a subcomplex computing the same homology") {
  auto C = std::make_shared<ChainCoalgebra>(fixtures::projective_source(2, 5),
                                            5);
  TruncatedChains TC(C, 4, 2);
  // all words below the top are kept
  for (int n = 2; n <= 3; ++n) CHECK(TC.kept(n).size() == C->words(n).size());
  // at the top degree the slice drops a complement of the boundaries
  CHECK(TC.kept(4).size() <= C->words(4).size());

  // d stays inside the slice and squares to zero
  for (int n = 2; n <= 4; ++n)
    for (const Monomial& w : TC.kept(n)) {
      Polynomial dw = TC.d_slice(mono_poly(w, Q(1)));
      CHECK(poly_is_zero(TC.d_slice(dw)));
    }

  // slice homology is the rational homology of the space CP^2: Q in degrees
  // 2 and 4, nothing in degree 3
  CHECK(TC.homology_dim(2) == 1);
  CHECK(TC.homology_dim(3) == 0);
  CHECK(TC.homology_dim(4) == 1);

  // the degree-4 homology class is the cap-pinned cycle -sw - si si
  // (d kills it: d(sw) = -s[i,i], d(si si) = +s[i,i])
  REQUIRE(TC.homology_dim(4) == 1);
  Polynomial c = TC.c_rep(4, 0);
  CHECK(poly_is_zero(TC.d_slice(c)));
  int si = C->letter_of(1, 0);
  int sw = C->letter_of(3, 0);
  Polynomial want;
  poly_add_term(want, Monomial{{sw}}, Q(-1));
  poly_add_term(want, Monomial{{si, si}}, Q(-1));
  CHECK(c == want);

  // abc split: a-preimages map onto the b-basis under d
  for (int n = 2; n <= 3; ++n) {
    const auto& abc = TC.abc(n);
    REQUIRE(abc.a.size() == abc.b.size());
    for (std::size_t k = 0; k < abc.a.size(); ++k) {
      Polynomial da = TC.d_slice(TC.from_coords(n + 1, abc.a[k]));
      CHECK(TC.coords(da, n) == abc.b[k]);
    }
    // dimension bookkeeping: kept = b + c + (preimage count of degree below)
    std::size_t below_b = TC.abc(n - 1).b.size();
    CHECK(TC.kept(n).size() == abc.b.size() + abc.c.size() + below_b);
  }

  // coordinates round-trip
  Polynomial p = mono_poly(TC.kept(3)[0], Q(5) / 3);
  CHECK(TC.from_coords(3, TC.coords(p, 3)) == p);
}

TEST_CASE("linearization: chain homology sees only the linear part") {
  for (const auto& [name, L] : fixtures::source_suite()) {
    int top = L.cap() - 1;
    LinearizationCheck lc = linearization_check(L, top);
    CHECK_MESSAGE(lc.ok, name);
    REQUIRE(lc.chain_ranks.size() == lc.linear_ranks.size());
    for (std::size_t n = 0; n < lc.chain_ranks.size(); ++n)
      CHECK_MESSAGE(lc.chain_ranks[n] == lc.linear_ranks[n], name, " degree ",
                    n);
  }
}

TEST_CASE("dual cochains recover the cohomology of the space") {
  // CP^2: H = Q[x]/(x^3) with x in degree 2
  FreeDGL X = dgl_with_cap(fixtures::projective_source(2, 4), 6);
  FreeCDGA A = dual_cochains(X, 7);
  CHECK(A.cap == 6);
  Cohomology H(A);
  CHECK(H.dim(2) == 1);
  CHECK(H.dim(3) == 0);
  CHECK(H.dim(4) == 1);
  CHECK(H.dim(5) == 0);
  CHECK(cup_length(A).value == 2);

  // wedge of two 2-spheres: H^2 is 2-dimensional and all products vanish
  FreeDGL W = fixtures::wedge_source({2, 2}, 4);
  FreeCDGA B = dual_cochains(W, 5);
  Cohomology HB(B);
  CHECK(HB.dim(2) == 2);
  CHECK(HB.dim(4) == 0);
  CHECK(cup_length(B).value == 1);
}

TEST_CASE("cap preconditions are enforced") {
  FreeDGL X = fixtures::projective_source(2, 4);
  CHECK_THROWS_AS(ChainCoalgebra(X, 6), internal_error);  // needs L.cap >= 5
  CHECK_NOTHROW(ChainCoalgebra(X, 5));
}
