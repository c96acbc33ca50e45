#pragma once
// Model of a based mapping space as a free CDGA on pair generators v (x) beta,
// where v runs over the generators of a minimal Sullivan model of the target
// and beta over a basis of a finite positively-graded chain coalgebra built
// from the source.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qsm/cdga.hpp"
#include "qsm/chains.hpp"
#include "qsm/linalg.hpp"
#include "qsm/sullivan.hpp"

namespace qsm {

struct BElement {
  int degree;
  std::string name;
};

// Finite coaugmented chain coalgebra slice B^+ in basis coordinates: elements
// of positive degree, a differential of degree -1, and the reduced coproduct.
// Iterated coproducts expand the first tensor slot at each step.
class BPlus {
 public:
  using Coords = std::vector<std::pair<int, Q>>;  // sparse (elem id, coeff)
  using Tensor = std::map<std::vector<int>, Q>;   // tuples of elem ids

  BPlus(std::vector<BElement> elems, std::map<int, Coords> diff,
        std::map<int, Tensor> coproduct);

  int size() const { return static_cast<int>(elems_.size()); }
  int degree(int id) const;
  const std::string& name(int id) const;
  int top_degree() const { return top_; }
  const std::vector<int>& at_degree(int degree) const;
  std::size_t pos(int id) const;  // position within at_degree(degree(id))

  const Coords& d_coords(int id) const;
  bool is_cycle(int id) const { return d_coords(id).empty(); }
  // m-fold reduced coproduct, m >= 2 (memoized).
  const Tensor& coproduct(int id, int m) const;

  // Homology-splitting basis per degree n (coords over at_degree positions):
  //   b: monic echelon basis of im(d_{n+1});
  //   a: particular preimages at degree n+1, d(a[k]) = b[k];
  //   c: homology representatives = -(monic echelon residual of a kernel
  //      basis of d_n against the b's).
  struct ABCBasis {
    std::vector<Vec> a;  // coords over at_degree(n+1)
    std::vector<Vec> b;  // coords over at_degree(n)
    std::vector<Vec> c;  // coords over at_degree(n)
  };
  const ABCBasis& abc(int degree) const;
  int homology_dim(int degree) const;
  Vec c_vec(int degree, int idx) const;

 private:
  std::vector<BElement> elems_;
  int top_ = 0;
  std::vector<std::vector<int>> at_degree_;
  std::vector<std::size_t> pos_;
  std::map<int, Coords> diff_;
  std::map<int, Tensor> delta2_;
  mutable std::map<std::pair<int, int>, Tensor> delta_memo_;
  mutable std::vector<ABCBasis> abc_;
  mutable std::vector<bool> abc_ready_;
  mutable std::vector<std::shared_ptr<Solver>> dsolver_;

  Mat d_matrix(int degree) const;  // map into degree-1 coords
};

// BPlus whose elements are the kept words of a truncated chain slice of a
// free DGL, in (degree, word-order) layout; keeps handles to the complexes.
struct ChainBPlus {
  std::shared_ptr<ChainCoalgebra> C;
  std::shared_ptr<TruncatedChains> TC;
  std::shared_ptr<BPlus> B;
  std::vector<Monomial> word_of_id;
  std::map<Monomial, int, MonoLess> id_of_word;

  int id_of(const Monomial& w) const;  // checked
};
ChainBPlus chain_bplus(std::shared_ptr<ChainCoalgebra> C, int T,
                       int prefix_gens);

// Free CDGA on pair generators with the mapping-space differential:
//   d(v (x) beta) = (-1)^{|v|} v (x) d beta
//     + sum over wordlength-m parts (m >= 2) of dv = sum c_t g_1...g_m and
//       over the m-fold reduced coproduct of beta = sum kappa e_1(x)...(x)e_m:
//       c_t kappa (-1)^eps (g_1 (x) e_1)...(g_m (x) e_m),
//   eps = sum_s |e_s| (|g_{s+1}| + ... + |g_m|).
struct BSModel {
  MinimalModel Y;
  std::shared_ptr<BPlus> B;
  FreeCDGA A;
  std::vector<std::pair<int, int>> pair_of_gen;  // A gen id -> (Y gen, B elem)
  std::map<std::pair<int, int>, int> gen_of_pair;

  int pair_gen(int ygen, int belem) const;  // checked
  // v (x) (vector at one B degree), extended linearly in the coalgebra slot.
  Polynomial pair_poly(int ygen, int bdegree, const Vec& coords) const;
};

BSModel based_bs_model(const MinimalModel& Y, std::shared_ptr<BPlus> B,
                       int cap);

}  // namespace qsm
