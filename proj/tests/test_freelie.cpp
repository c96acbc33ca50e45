#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "qsm/errors.hpp"
#include "qsm/fixtures.hpp"
#include "qsm/freelie.hpp"

using namespace qsm;

// Dimension oracles below are Poincare-Birkhoff-Witt / Hilbert-series counts
// for the free graded Lie algebra: the universal envelope is the tensor
// algebra, so prod (1+t^a)^{dim L_a, a odd} / prod (1-t^b)^{dim L_b, b even}
// equals 1/(1 - sum_g t^{|g|}). The expected values were derived by hand from
// that identity and frozen here.

TEST_CASE("free Lie dimensions: one generator") {
  // odd degree: x, [x,x]; then [x,[x,x]] dies by the graded Jacobi identity
  FreeLie odd({{0, "x", 1}}, 5);
  CHECK(odd.dim(1) == 1);
  CHECK(odd.dim(2) == 1);
  CHECK(odd.dim(3) == 0);
  CHECK(odd.dim(4) == 0);
  CHECK(odd.dim(5) == 0);

  // even degree: [x,x] = 0 by graded antisymmetry, nothing past the generator
  FreeLie even({{0, "x", 2}}, 6);
  CHECK(even.dim(2) == 1);
  CHECK(even.dim(4) == 0);
  CHECK(even.dim(6) == 0);
}

TEST_CASE("free Lie dimensions: two odd generators of degree 1") {
  FreeLie L({{0, "a", 1}, {1, "b", 1}}, 6);
  const int want[] = {2, 3, 2, 3, 6, 11};
  for (int d = 1; d <= 6; ++d)
    CHECK_MESSAGE(L.dim(d) == want[d - 1], "degree ", d);
}

TEST_CASE("free Lie dimensions: generators of degree 1 and 3") {
  FreeLie L({{0, "i", 1}, {1, "w", 3}}, 7);
  const int want[] = {1, 1, 1, 1, 1, 2, 2};
  for (int d = 1; d <= 7; ++d)
    CHECK_MESSAGE(L.dim(d) == want[d - 1], "degree ", d);
}

TEST_CASE("normalization onto the basis respects graded identities") {
  FreeLie L({{0, "a", 1}, {1, "b", 2}}, 6);
  LieElement a = L.gen_element(0);
  LieElement b = L.gen_element(1);

  // graded antisymmetry: [a,b] + (-1)^{|a||b|}[b,a] = 0
  LieElement ab = L.bracket(a, b);
  LieElement ba = L.bracket(b, a);
  CHECK(L.add(ab, L.scale(Q(1), ba)).is_zero());  // |a||b| = 2: [b,a] = -[a,b]

  // odd-odd symmetry: [a,a] is allowed and [a,a] = normalize([a,a])
  LieElement aa = L.bracket(a, a);
  CHECK(!aa.is_zero());
  CHECK(aa.degree == 2);

  // even-even: [b,b] = 0
  CHECK(L.bracket(b, b).is_zero());

  // Jacobi collapse: [a,[a,a]] = 0 over the rationals
  CHECK(L.bracket(a, aa).is_zero());

  // bilinearity with rational coefficients
  LieElement lhs = L.bracket(L.scale(Q(2) / 3, a), b);
  LieElement rhs = L.scale(Q(2) / 3, ab);
  CHECK(L.add(lhs, L.scale(Q(-1), rhs)).is_zero());

  // bracket words normalize consistently with the element bracket
  BWord w = BWord::br(BWord::leaf(0), BWord::br(BWord::leaf(0), BWord::leaf(1)));
  LieElement viaWord = L.normalize(w);
  LieElement viaOps = L.bracket(a, L.bracket(a, b));
  CHECK(L.add(viaWord, L.scale(Q(-1), viaOps)).is_zero());

  // linear combinations of words, including a cancellation
  LieElement combo = L.normalize({{Q(1), w}, {Q(-1), w}});
  CHECK(combo.is_zero());
}

TEST_CASE("element coordinates round-trip and print") {
  FreeLie L({{0, "i", 1}, {1, "w", 3}}, 5);
  LieElement iw = L.bracket(L.gen_element(0), L.gen_element(1));
  REQUIRE(!iw.is_zero());
  Vec c = L.element_coords(iw);
  CHECK(c.size() == static_cast<std::size_t>(L.dim(4)));
  LieElement back = L.coords_element(4, c);
  CHECK(L.add(back, L.scale(Q(-1), iw)).is_zero());
  CHECK(!L.element_to_string(iw).empty());
  CHECK(L.element_to_string(L.zero(3)) == "0");
}

TEST_CASE("basis is stable under cap extension and generator-prefix growth") {
  std::vector<LieGenerator> gens = {{0, "i", 1}, {1, "w", 3}};
  FreeLie small(gens, 4);
  FreeLie big(gens, 8);
  for (int d = 1; d <= 4; ++d) {
    REQUIRE(small.dim(d) == big.dim(d));
    for (int k = 0; k < small.dim(d); ++k)
      CHECK(bword_to_string(small.basis_word(d, k), gens) ==
            bword_to_string(big.basis_word(d, k), gens));
  }

  // the subalgebra on the leading generators is a degreewise basis prefix
  std::vector<LieGenerator> sub = {{0, "i", 1}};
  FreeLie first(sub, 4);
  for (int d = 1; d <= 4; ++d) {
    REQUIRE(first.dim(d) <= big.dim(d));
    for (int k = 0; k < first.dim(d); ++k) {
      CHECK(big.basis_word_maxgen(d, k) == 0);
      CHECK(bword_to_string(big.basis_word(d, k), gens) ==
            bword_to_string(first.basis_word(d, k), sub));
    }
    // everything past the prefix involves the later generator
    for (int k = first.dim(d); k < big.dim(d); ++k)
      CHECK(big.basis_word_maxgen(d, k) > 0);
  }
}

TEST_CASE("degenerate inputs are rejected, oversized ones guarded") {
  CHECK_THROWS_AS(FreeLie({{0, "x", 0}}, 3), input_error);
  CHECK_THROWS_AS(FreeLie({{0, "x", 1}, {1, "x", 2}}, 3), input_error);
  // 500 degree-1 generators need 250000 tensor words in degree 2
  std::vector<LieGenerator> many;
  for (int i = 0; i < 500; ++i)
    many.push_back({i, "g" + std::to_string(i), 1});
  CHECK_THROWS_AS(FreeLie(std::move(many), 2), input_error);
}

TEST_CASE("free DGL validation and differential") {
  std::vector<LieGenerator> gens = {{0, "i", 1}, {1, "w", 3}};
  FreeLie L(gens, 6);
  LieElement ii = L.bracket(L.gen_element(0), L.gen_element(0));

  FreeDGL X = make_dgl(gens, {{1, ii}}, 6);
  CHECK(X.minimal);
  CHECK(X.cap() == 6);
  // d(w) = [i,i], d(i) = 0
  CHECK(X.lie->add(X.d_gen(1), X.lie->scale(Q(-1), ii)).is_zero());
  CHECK(X.d_gen(0).is_zero());
  // derivation property: d[i,w] = [di,w] - [i,dw] = -[i,[i,i]] = 0
  LieElement iw = X.lie->bracket(X.lie->gen_element(0), X.lie->gen_element(1));
  CHECK(X.d(iw).is_zero());
  // d[w,w] = [dw,w] + (-1)^{|w|}[w,dw] = 2[[i,i],w], nonzero
  LieElement ww = X.lie->bracket(X.lie->gen_element(1), X.lie->gen_element(1));
  CHECK(!X.d(ww).is_zero());
  CHECK(X.d(X.d(ww)).is_zero());

  // d_matrix of degree 3: L_3 = span(w) -> L_2 = span([i,i]) is [1]
  Mat m = X.d_matrix(3);
  REQUIRE(m.size() == 1);
  REQUIRE(m[0].size() == 1);
  CHECK(m[0][0] == 1);

  // wrong differential degree is rejected
  CHECK_THROWS_AS(make_dgl(gens, {{1, L.gen_element(0)}}, 6), input_error);

  // d*d != 0 is rejected: d(u) = w and d(w) = [i,i] gives d(d(u)) = [i,i]
  std::vector<LieGenerator> gens3 = {{0, "i", 1}, {1, "w", 3}, {2, "u", 4}};
  FreeLie L3(gens3, 6);
  LieElement ii3 = L3.bracket(L3.gen_element(0), L3.gen_element(0));
  CHECK_THROWS_AS(make_dgl(gens3, {{1, ii3}, {2, L3.gen_element(1)}}, 6),
                  input_error);
}

TEST_CASE("dgl_with_cap preserves the structure") {
  FreeDGL X = fixtures::projective_source(2, 4);
  FreeDGL Y = dgl_with_cap(X, 7);
  CHECK(Y.cap() == 7);
  CHECK(Y.gens().size() == X.gens().size());
  LieElement ii = Y.lie->bracket(Y.lie->gen_element(0), Y.lie->gen_element(0));
  CHECK(Y.lie->add(Y.d_gen(1), Y.lie->scale(Q(-1), ii)).is_zero());
}

TEST_CASE("homology of the projective-plane model") {
  // L(i, w; dw = [i,i]): classes i in degree 1 and [i,w] in degree 4;
  // [i,i] bounds, w is not a cycle, and d[w,w] = 2[[i,i],w] kills degree 5.
  FreeDGL X = fixtures::projective_source(2, 6);
  DGLHomology H = dgl_homology(X, 5);
  REQUIRE(H.dims.size() == 6);
  CHECK(H.dims[1] == 1);
  CHECK(H.dims[2] == 0);
  CHECK(H.dims[3] == 0);
  CHECK(H.dims[4] == 1);
  CHECK(H.dims[5] == 0);
  H.lie.validate();

  // the class of the boundary [i,i] is zero
  LieElement ii = X.lie->bracket(X.lie->gen_element(0), X.lie->gen_element(0));
  CHECK(is_zero_vec(H.class_coords(X, ii, 2)));

  // the homology Lie algebra is abelian: [class(i), class(i)] = class([i,i]) = 0
  CHECK(is_zero_vec(H.lie.bracket(1, 0, 1, 0)));
  CHECK(H.lie.max_bracket_length() == 1);

  // bracket lengths: class(i) and class([i,w]) are both indecomposable here
  Vec ci = H.class_coords(X, X.lie->gen_element(0), 1);
  CHECK(H.lie.bracket_length(1, ci) == 1);
  LieElement iw = X.lie->bracket(X.lie->gen_element(0), X.lie->gen_element(1));
  Vec ciw = H.class_coords(X, iw, 4);
  CHECK(!is_zero_vec(ciw));
  CHECK(H.lie.bracket_length(4, ciw) == 1);
  // zero class reports -1 (callers map it to infinity)
  CHECK(H.lie.bracket_length(2, zero_vec(0)) == -1);
}

TEST_CASE("homology of a wedge of spheres is the free Lie algebra") {
  // zero differential: H(L) = L, and the bracket classes are genuinely nested
  FreeDGL X = fixtures::wedge_source({2, 2}, 4);
  DGLHomology H = dgl_homology(X, 4);
  const int want[] = {2, 3, 2, 3};
  for (int d = 1; d <= 4; ++d) CHECK(H.dims[d] == want[d - 1]);
  H.lie.validate();
  CHECK(H.lie.max_bracket_length() >= 4);
  // [a,[a,b]] has bracket length exactly 3
  LieElement a = X.lie->gen_element(0), b = X.lie->gen_element(1);
  LieElement aab = X.lie->bracket(a, X.lie->bracket(a, b));
  CHECK(H.lie.bracket_length(3, H.class_coords(X, aab, 3)) == 3);
}

TEST_CASE("cone attachment matches the hand-built model") {
  FreeDGL S2 = fixtures::sphere_source(2, 3);
  LieElement ii =
      S2.lie->bracket(S2.lie->gen_element(0), S2.lie->gen_element(0));
  FreeDGL X = dgl_adjunction(S2, ii, 3, "w", 6);
  FreeDGL P = fixtures::projective_source(2, 6);
  REQUIRE(X.gens().size() == P.gens().size());
  for (int d = 1; d <= 6; ++d) CHECK(X.lie->dim(d) == P.lie->dim(d));
  DGLHomology HX = dgl_homology(X, 5);
  DGLHomology HP = dgl_homology(P, 5);
  for (int d = 1; d <= 5; ++d) CHECK(HX.dims[d] == HP.dims[d]);
  // attaching the trivial class gives a wedge: H gains a free generator
  FreeDGL W = dgl_adjunction(S2, S2.lie->zero(2), 3, "w", 4);
  DGLHomology HW = dgl_homology(W, 3);
  CHECK(HW.dims[1] == 1);
  CHECK(HW.dims[2] == 1);  // [i,i] no longer bounds
  CHECK(HW.dims[3] == 1);  // w is now a cycle... plus brackets
}
