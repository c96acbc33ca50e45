#pragma once
#include <memory>
#include <vector>

#include "qsm/cdga.hpp"
#include "qsm/freelie.hpp"

namespace qsm {

// Chain coalgebra of a free DGL: the free graded-commutative coalgebra on the
// suspensions of a Lie basis, with differential d = d_v + d_h,
//   d_v(sx1...sxk) = -sum_i (-1)^{n_i} sx1...s(d xi)...sxk,
//       n_i = |sx1| + ... + |sx_{i-1}|,
//   d_h(sx1...sxk) = sum_{i<j} (-1)^{|sxi| + n_ij} s[xi,xj] (rest),
//       where sx1...sxk = (-1)^{n_ij} sxi sxj (rest).
// Words reuse the Monomial machinery over a letter table (letter degree =
// Lie degree + 1); grading is homological.
class ChainCoalgebra {
 public:
  // Materializes words of degree <= cap (letters need Lie basis through
  // degree cap-1, so L.cap() must be >= cap-1).
  ChainCoalgebra(FreeDGL L, int cap);

  const FreeDGL& dgl() const { return L_; }
  const GenTable& letters() const { return letters_; }
  int cap() const { return cap_; }
  int letter_of(int lie_degree, int lie_idx) const;
  std::pair<int, int> lie_of_letter(int letter) const;
  // Letter polynomial for s(e): suspension is linear.
  Polynomial suspend(const LieElement& e) const;

  const std::vector<Monomial>& words(int degree) const;
  Polynomial d_word(const Monomial& w) const;
  Polynomial d_poly(const Polynomial& p) const;
  // Matrix of d : C_degree -> C_{degree-1} over the canonical word bases.
  Mat d_matrix(int degree) const;

  // Reduced coproduct into two factors: pairs of words with coefficients.
  using Tensor2 = std::map<std::pair<Monomial, Monomial>, Q>;
  Tensor2 reduced_coproduct(const Monomial& w) const;
  // Iterated reduced coproduct into m >= 2 factors, extended linearly.
  using TensorK = std::map<std::vector<Monomial>, Q>;
  TensorK reduced_coproduct_iter(const Polynomial& p, int m) const;

 private:
  FreeDGL L_;
  int cap_;
  GenTable letters_;
  std::vector<std::vector<int>> letter_by_pos_;      // [lie degree] -> letter ids
  std::vector<std::pair<int, int>> lie_of_letter_;   // letter id -> (deg, idx)
  mutable std::vector<std::vector<Monomial>> words_; // per degree, lazy
  mutable std::vector<bool> words_ready_;
};

// Degreewise finite slice C'(L)_{<=T}: all words of degree < T, and at degree
// T only the words outside a chosen complement of the boundary image
// d(C_{T+1}) (so C_T = C'_T  (+)  im d_{T+1} and the slice is a chain
// subcomplex computing H_n for n <= T).
//
// When `prefix_gens` < the full generator count, the complement at degree T is
// chosen so that columns of words containing letters with Lie-basis words
// involving generators >= prefix_gens are eliminated first; then the kept-word
// sets of the DGL on the prefix generators are a subset of the kept words
// here, making the induced inclusion of truncations a word-to-word chain map.
class TruncatedChains {
 public:
  TruncatedChains(std::shared_ptr<ChainCoalgebra> C, int T, int prefix_gens);

  const ChainCoalgebra& chains() const { return *C_; }
  int top() const { return T_; }
  const std::vector<Monomial>& kept(int degree) const;
  bool is_kept(const Monomial& w) const;
  // Coordinates over kept(degree); throws internal_error on a dropped word.
  Vec coords(const Polynomial& p, int degree) const;
  Polynomial from_coords(int degree, const Vec& v) const;
  // d restricted to the slice (checked to stay inside it).
  Polynomial d_slice(const Polynomial& p) const;
  Mat d_matrix(int degree) const;

  // Homology-splitting basis per degree n:
  //   b: monic echelon basis of im(d_{n+1}) restricted to the slice;
  //   a: particular preimages in degree n+1 of the b's of degree n;
  //   c: homology representatives = -(monic echelon residual of a kernel
  //      basis of d_n against the b's).
  struct ABC {
    std::vector<Vec> a;  // in kept(n+1) coords; d(a[k]) = b[k]
    std::vector<Vec> b;  // in kept(n) coords
    std::vector<Vec> c;  // in kept(n) coords
  };
  const ABC& abc(int degree) const;
  int homology_dim(int degree) const;
  Polynomial c_rep(int degree, int idx) const;

 private:
  std::shared_ptr<ChainCoalgebra> C_;
  int T_;
  std::vector<std::vector<Monomial>> kept_;
  std::vector<std::map<Monomial, std::size_t, MonoLess>> index_;
  mutable std::vector<ABC> abc_;
  mutable std::vector<bool> abc_ready_;
  mutable std::vector<std::shared_ptr<Solver>> dsolver_;  // for preimages

  void build(int prefix_gens);
};

// Quasi-isomorphism check of Lemma-style reduction: the homology of C(L) in
// degrees <= top equals the homology of (s W (+) Q, d0) where d0 is induced by
// the linear part of the DGL differential. Returns per-degree ranks of both
// sides; `ok` when they agree everywhere.
struct LinearizationCheck {
  bool ok = true;
  std::vector<int> chain_ranks;   // H_n(C(L)), n = 0..top
  std::vector<int> linear_ranks;  // H_n(sW (+) Q, d0)
};
LinearizationCheck linearization_check(const FreeDGL& L, int top);

// Cochain algebra dual to the chains: free CDGA on dual letters, differential
// solved from the pairing <delta phi, w> = -(-1)^{|phi|} <phi, d w>.
FreeCDGA dual_cochains(const FreeDGL& L, int cap);

}  // namespace qsm
