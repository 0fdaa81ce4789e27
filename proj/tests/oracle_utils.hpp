// Independent oracles used by the test suites: plain Gaussian elimination,
// a Jacobi rotation eigensolver and finite differences. These deliberately
// share no code with the library paths they check.

#ifndef BB_TEST_ORACLE_UTILS_HPP
#define BB_TEST_ORACLE_UTILS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "bb/dense.hpp"

namespace bb::oracle {

/// Gaussian elimination with partial pivoting, textbook form.
inline std::vector<double> gauss_solve(DenseMatrix a, std::vector<double> b)
{
  const std::size_t n = a.n_rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k)))
        piv = i;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j)
        a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j)
      s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

/// Cyclic Jacobi rotations; returns eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(DenseMatrix a, int max_sweeps = 100)
{
  const std::size_t n = a.n_rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        off += a(i, j) * a(i, j);
    if (off < 1e-28)
      break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0)
          continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = a(i, i);
  std::sort(w.begin(), w.end());
  return w;
}

/// Lower-triangular Cholesky factor.
inline DenseMatrix cholesky(const DenseMatrix& a)
{
  const std::size_t n = a.n_rows();
  DenseMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k)
        s -= l(i, k) * l(j, k);
      if (i == j)
        l(i, i) = std::sqrt(s);
      else
        l(i, j) = s / l(j, j);
    }
  return l;
}

inline double fd_partial(const std::function<double(double, double)>& f, double x, double y,
                         int which, double step = 1e-5)
{
  if (which == 0)
    return (f(x + step, y) - f(x - step, y)) / (2.0 * step);
  return (f(x, y + step) - f(x, y - step)) / (2.0 * step);
}

inline double fd_second(const std::function<double(double, double)>& f, double x, double y,
                        int i, int j, double step = 1e-4)
{
  if (i == j) {
    if (i == 0)
      return (f(x + step, y) - 2.0 * f(x, y) + f(x - step, y)) / (step * step);
    return (f(x, y + step) - 2.0 * f(x, y) + f(x, y - step)) / (step * step);
  }
  return (f(x + step, y + step) - f(x + step, y - step) - f(x - step, y + step) +
          f(x - step, y - step)) /
         (4.0 * step * step);
}

inline std::mt19937& rng()
{
  static std::mt19937 gen(20240811);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0)
{
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

} // namespace bb::oracle

#endif
