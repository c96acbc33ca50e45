#pragma once
#include <optional>
#include <vector>

#include "qsm/rational.hpp"

namespace qsm {

// Dense exact linear algebra over Q. Matrices are row-major: m[i][j].
// A linear map f : source -> target is stored with rows indexed by target
// coordinates and columns by source coordinates, so (f x)_r = sum_c m[r][c] x_c.
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;

Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero_vec(const Vec& v);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_scale(const Q& c, const Vec& a);
// a += c*b
void vec_axpy(Vec& a, const Q& c, const Vec& b);
Vec mat_apply(const Mat& m, const Vec& x);

// Reduced row echelon form in place. Pivoting is deterministic: for each
// column left to right, the first row (top to bottom among unused rows) with a
// nonzero entry becomes the pivot row. Returns the pivot column of each
// nonzero row, in increasing order; zero rows are moved to the bottom.
std::vector<std::size_t> rref(Mat& m);

int rank(Mat m);

// Row-space calculator: add spanning vectors, query membership/residual.
// Used for subspaces given by spanning sets (images, lower central series).
class RowSpace {
 public:
  explicit RowSpace(std::size_t cols) : cols_(cols) {}
  // Returns true if v enlarged the space (v independent of current rows).
  bool add(Vec v);
  // Residual of v after reduction by the stored rows.
  Vec residual(Vec v) const;
  bool contains(const Vec& v) const { return is_zero_vec(residual(v)); }
  std::size_t dim() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  // Monic echelon rows, in increasing pivot order.
  const std::vector<Vec>& rows() const { return rows_; }

 private:
  std::size_t cols_;
  std::vector<Vec> rows_;            // kept fully reduced (RREF invariant)
  std::vector<std::size_t> pivots_;  // pivot column per row, increasing
};

// Null space of m (as a map with `cols` source coordinates). One basis vector
// per free column, in increasing free-column order; each has entry 1 at its
// free column and zeros at the other free columns.
std::vector<Vec> kernel_basis(const Mat& m, std::size_t cols);

// Linear solver for repeated right-hand sides against a fixed matrix.
class Solver {
 public:
  Solver(Mat m, std::size_t cols);
  // Particular solution of m x = b with all free variables set to 0, or
  // nullopt if inconsistent.
  std::optional<Vec> solve(const Vec& b) const;
  int rank() const { return static_cast<int>(pivots_.size()); }
  const std::vector<std::size_t>& pivot_cols() const { return pivots_; }

 private:
  Mat r_;                            // rref of m
  Mat t_;                            // row transform: r_ = t_ * m
  std::vector<std::size_t> pivots_;
  std::size_t cols_;
  std::size_t rows_;
};

}  // namespace qsm
