#ifndef BB_DENSE_HPP
#define BB_DENSE_HPP

#include <cstddef>
#include <vector>

#include "bb/vector_ops.hpp"

namespace bb {

/// Dense row-major matrix. Holds parameter matrices, element matrices and
/// the desk-scale eigenproblem operands.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : n_rows_(rows), n_cols_(cols), values_(rows * cols, 0.0)
  {
  }

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_cols_ + j]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  static DenseMatrix identity(std::size_t n)
  {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1.0;
    return m;
  }

  Vector multiply(const Vector& x) const;
  DenseMatrix multiply(const DenseMatrix& other) const;
  DenseMatrix transposed() const;

  /// max_ij |a_ij|
  double max_abs() const;

  bool is_symmetric(double rel_tol = 1e-12) const;

private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> values_;
};

/// Raised when an elimination or factorization meets a vanishing pivot.
struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(std::size_t pivot_index);
  std::size_t pivot;
};

/// Solve A x = b by LU with partial pivoting. A is copied.
Vector lu_solve(const DenseMatrix& a, const Vector& b);

/// Solve A X = B for several right-hand sides (columns of B).
DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b);

/// Dense inverse via LU with partial pivoting.
DenseMatrix lu_inverse(const DenseMatrix& a);

} // namespace bb

#endif
