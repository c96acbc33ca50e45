#include "qsm/linalg.hpp"

#include "qsm/errors.hpp"

namespace qsm {

Vec zero_vec(std::size_t n) { return Vec(n, Q(0)); }

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n, Q(0));
  v[i] = 1;
  return v;
}

bool is_zero_vec(const Vec& v) {
  for (const Q& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
  check_internal(a.size() == b.size(), "vec_add: size mismatch");
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec vec_scale(const Q& c, const Vec& a) {
  Vec r = a;
  for (Q& x : r) x *= c;
  return r;
}

void vec_axpy(Vec& a, const Q& c, const Vec& b) {
  check_internal(a.size() == b.size(), "vec_axpy: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

Vec mat_apply(const Mat& m, const Vec& x) {
  Vec r = zero_vec(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    check_internal(m[i].size() == x.size(), "mat_apply: size mismatch");
    for (std::size_t j = 0; j < x.size(); ++j)
      if (sgn(x[j]) != 0 && sgn(m[i][j]) != 0) r[i] += m[i][j] * x[j];
  }
  return r;
}

std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size();
  std::size_t cols = m[0].size();
  std::size_t prow = 0;
  for (std::size_t col = 0; col < cols && prow < rows; ++col) {
    std::size_t sel = rows;
    for (std::size_t r = prow; r < rows; ++r)
      if (sgn(m[r][col]) != 0) {
        sel = r;
        break;
      }
    if (sel == rows) continue;
    std::swap(m[prow], m[sel]);
    Q inv = Q(1) / m[prow][col];
    for (std::size_t j = col; j < cols; ++j) m[prow][j] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow) continue;
      if (sgn(m[r][col]) == 0) continue;
      Q f = m[r][col];
      for (std::size_t j = col; j < cols; ++j) m[r][j] -= f * m[prow][j];
    }
    pivots.push_back(col);
    ++prow;
  }
  return pivots;
}

int rank(Mat m) { return static_cast<int>(rref(m).size()); }

bool RowSpace::add(Vec v) {
  check_internal(v.size() == cols_, "RowSpace::add: size mismatch");
  // Reduce v by current rows.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Q& c = v[pivots_[i]];
    if (sgn(c) != 0) {
      Q f = c;
      for (std::size_t j = 0; j < cols_; ++j) v[j] -= f * rows_[i][j];
    }
  }
  std::size_t p = cols_;
  for (std::size_t j = 0; j < cols_; ++j)
    if (sgn(v[j]) != 0) {
      p = j;
      break;
    }
  if (p == cols_) return false;
  Q inv = Q(1) / v[p];
  for (std::size_t j = 0; j < cols_; ++j) v[j] *= inv;
  // Back-substitute into existing rows to keep full RREF invariant.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Q c = rows_[i][p];
    if (sgn(c) != 0)
      for (std::size_t j = 0; j < cols_; ++j) rows_[i][j] -= c * v[j];
  }
  // Insert keeping pivot order increasing.
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
  pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
  return true;
}

Vec RowSpace::residual(Vec v) const {
  check_internal(v.size() == cols_, "RowSpace::residual: size mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Q& c = v[pivots_[i]];
    if (sgn(c) != 0) {
      Q f = c;
      for (std::size_t j = 0; j < cols_; ++j) v[j] -= f * rows_[i][j];
    }
  }
  return v;
}

std::vector<Vec> kernel_basis(const Mat& m, std::size_t cols) {
  Mat r = m;
  for (const Vec& row : r)
    check_internal(row.size() == cols, "kernel_basis: size mismatch");
  std::vector<std::size_t> pivots = rref(r);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v = zero_vec(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

Solver::Solver(Mat m, std::size_t cols) : cols_(cols), rows_(m.size()) {
  for (const Vec& row : m)
    check_internal(row.size() == cols, "Solver: size mismatch");
  // Augment with identity to track the row transform.
  Mat aug = std::move(m);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < rows_; ++j) aug[i].push_back(i == j ? Q(1) : Q(0));
  }
  std::vector<std::size_t> piv;
  {
    // rref over the first `cols` columns only; the tail records the transform.
    std::size_t prow = 0;
    for (std::size_t col = 0; col < cols_ && prow < rows_; ++col) {
      std::size_t sel = rows_;
      for (std::size_t r = prow; r < rows_; ++r)
        if (sgn(aug[r][col]) != 0) {
          sel = r;
          break;
        }
      if (sel == rows_) continue;
      std::swap(aug[prow], aug[sel]);
      Q inv = Q(1) / aug[prow][col];
      for (std::size_t j = 0; j < aug[prow].size(); ++j) aug[prow][j] *= inv;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == prow || sgn(aug[r][col]) == 0) continue;
        Q f = aug[r][col];
        for (std::size_t j = 0; j < aug[r].size(); ++j)
          aug[r][j] -= f * aug[prow][j];
      }
      piv.push_back(col);
      ++prow;
    }
  }
  pivots_ = std::move(piv);
  r_.assign(rows_, Vec());
  t_.assign(rows_, Vec());
  for (std::size_t i = 0; i < rows_; ++i) {
    r_[i] = Vec(aug[i].begin(), aug[i].begin() + static_cast<std::ptrdiff_t>(cols_));
    t_[i] = Vec(aug[i].begin() + static_cast<std::ptrdiff_t>(cols_), aug[i].end());
  }
}

std::optional<Vec> Solver::solve(const Vec& b) const {
  check_internal(b.size() == rows_, "Solver::solve: rhs size mismatch");
  // c = t_ * b is the rhs in echelon coordinates.
  Vec c = mat_apply(t_, b);
  // Consistency: rows beyond the pivot rows must have zero rhs.
  for (std::size_t i = pivots_.size(); i < rows_; ++i)
    if (sgn(c[i]) != 0) return std::nullopt;
  Vec x = zero_vec(cols_);
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    // Row i of r_ reads x_pivot + sum_{free j} r_[i][j] x_j = c_i; free = 0.
    x[pivots_[i]] = c[i];
  }
  return x;
}

}  // namespace qsm
