#include "bb/dense.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace bb {

Vector DenseMatrix::multiply(const Vector& x) const
{
  if (x.size() != n_cols_)
    throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
  Vector y(n_rows_, 0.0);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_cols_; ++j)
      s += values_[i * n_cols_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const
{
  if (n_cols_ != other.n_rows_)
    throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
  DenseMatrix out(n_rows_, other.n_cols_);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t k = 0; k < n_cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0)
        continue;
      for (std::size_t j = 0; j < other.n_cols_; ++j)
        out(i, j) += aik * other(k, j);
    }
  return out;
}

DenseMatrix DenseMatrix::transposed() const
{
  DenseMatrix out(n_cols_, n_rows_);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t j = 0; j < n_cols_; ++j)
      out(j, i) = (*this)(i, j);
  return out;
}

double DenseMatrix::max_abs() const
{
  double m = 0.0;
  for (double v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

bool DenseMatrix::is_symmetric(double rel_tol) const
{
  if (n_rows_ != n_cols_)
    return false;
  const double scale = max_abs();
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t j = i + 1; j < n_cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale)
        return false;
  return true;
}

SingularMatrixError::SingularMatrixError(std::size_t pivot_index)
    : std::runtime_error("singular pivot at index " + std::to_string(pivot_index)),
      pivot(pivot_index)
{
}

namespace {

// In-place LU with partial pivoting; returns permutation.
std::vector<std::size_t> lu_factor_inplace(DenseMatrix& a)
{
  const std::size_t n = a.n_rows();
  if (n != a.n_cols())
    throw std::invalid_argument("lu_factor: matrix not square");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i)
    perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double pmax = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > pmax) {
        pmax = std::abs(a(i, k));
        piv = i;
      }
    if (pmax == 0.0)
      throw SingularMatrixError(k);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double lik = a(i, k) * inv;
      a(i, k) = lik;
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= lik * a(k, j);
    }
  }
  return perm;
}

void lu_apply(const DenseMatrix& lu, const std::vector<std::size_t>& perm, const double* b,
              double* x)
{
  const std::size_t n = lu.n_rows();
  for (std::size_t i = 0; i < n; ++i)
    x[i] = b[perm[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j)
      s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j)
      s -= lu(ii, j) * x[j];
    x[ii] = s / lu(ii, ii);
  }
}

} // namespace

Vector lu_solve(const DenseMatrix& a, const Vector& b)
{
  if (b.size() != a.n_rows())
    throw std::invalid_argument("lu_solve: rhs dimension mismatch");
  DenseMatrix lu = a;
  const auto perm = lu_factor_inplace(lu);
  Vector x(b.size());
  lu_apply(lu, perm, b.data(), x.data());
  return x;
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b)
{
  if (b.n_rows() != a.n_rows())
    throw std::invalid_argument("lu_solve: rhs dimension mismatch");
  DenseMatrix lu = a;
  const auto perm = lu_factor_inplace(lu);
  DenseMatrix x(b.n_rows(), b.n_cols());
  Vector col(b.n_rows()), sol(b.n_rows());
  for (std::size_t j = 0; j < b.n_cols(); ++j) {
    for (std::size_t i = 0; i < b.n_rows(); ++i)
      col[i] = b(i, j);
    lu_apply(lu, perm, col.data(), sol.data());
    for (std::size_t i = 0; i < b.n_rows(); ++i)
      x(i, j) = sol[i];
  }
  return x;
}

DenseMatrix lu_inverse(const DenseMatrix& a)
{
  return lu_solve(a, DenseMatrix::identity(a.n_rows()));
}

} // namespace bb
