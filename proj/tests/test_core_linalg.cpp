#include <doctest.h>

#include "bb/eigensolve.hpp"
#include "bb/factorization.hpp"
#include "bb/sparse.hpp"
#include "oracle_utils.hpp"

#include <sstream>

using namespace bb;

namespace {

SparseMatrix from_dense(const DenseMatrix& d)
{
  CooBuilder coo(d.n_rows(), d.n_cols());
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    for (std::size_t j = 0; j < d.n_cols(); ++j)
      if (d(i, j) != 0.0)
        coo.add(i, j, d(i, j));
  return coo.compress();
}

DenseMatrix random_spd(std::size_t n)
{
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = oracle::uniform();
      m(i, j) = v;
      m(j, i) = v;
    }
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) += static_cast<double>(n);
  return m;
}

} // namespace

TEST_CASE("spmv basics")
{
  const SparseMatrix id = SparseMatrix::identity(3);
  const Vector x = {1.0, 2.0, 3.0};
  CHECK(id.multiply(x) == x);

  const SparseMatrix zero(3, 3);
  const Vector z = zero.multiply(x);
  for (double v : z)
    CHECK(v == 0.0);

  DenseMatrix d(2, 2);
  d(0, 0) = 1;
  d(0, 1) = 2;
  d(1, 0) = 3;
  d(1, 1) = 4;
  const Vector y = from_dense(d).multiply({1.0, 1.0});
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(7.0));

  CHECK_THROWS_AS((void)id.multiply({1.0}), std::invalid_argument);
}

TEST_CASE("spmv is linear and symmetric forms agree")
{
  DenseMatrix d(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = oracle::uniform();
      d(i, j) = v;
      d(j, i) = v;
    }
  const SparseMatrix a = from_dense(d);
  Vector x(6), y(6);
  for (int k = 0; k < 6; ++k) {
    x[k] = oracle::uniform();
    y[k] = oracle::uniform();
  }
  const double alpha = 0.7, beta = -1.3;
  Vector xy(6);
  for (int k = 0; k < 6; ++k)
    xy[k] = alpha * x[k] + beta * y[k];
  const Vector lhs = a.multiply(xy);
  const Vector ax = a.multiply(x), ay = a.multiply(y);
  for (int k = 0; k < 6; ++k)
    CHECK(lhs[k] == doctest::Approx(alpha * ax[k] + beta * ay[k]).epsilon(1e-13));

  CHECK(dot(x, ay) == doctest::Approx(dot(y, ax)).epsilon(1e-12));
}

TEST_CASE("spmv parallel kernel matches the serial reference bitwise")
{
  DenseMatrix d(40, 40);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j)
      if ((i + 2 * j) % 5 == 0)
        d(i, j) = oracle::uniform();
  const SparseMatrix a = from_dense(d);
  Vector x(40);
  for (auto& v : x)
    v = oracle::uniform();
  const Vector ys = a.multiply_serial(x);
  const Vector yp = a.multiply(x);
  REQUIRE(ys.size() == yp.size());
  for (std::size_t i = 0; i < ys.size(); ++i)
    CHECK(ys[i] == yp[i]);
}

TEST_CASE("coo builder merges duplicates deterministically")
{
  CooBuilder coo(2, 2);
  coo.add(0, 0, 1.0);
  coo.add(1, 1, 2.0);
  coo.add(0, 0, 0.5);
  const SparseMatrix m = coo.compress();
  CHECK(m.nnz() == 2);
  CHECK(m.coeff(0, 0) == doctest::Approx(1.5));
  CHECK(m.coeff(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("factorization solves and reports singular pivots")
{
  DenseMatrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  const Factorization f(from_dense(d), FactorizationKind::lu);
  const Vector x = f.solve({2.0, 4.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  CooBuilder zero(1, 1);
  zero.add(0, 0, 0.0);
  CHECK_THROWS_AS(Factorization(zero.compress(), FactorizationKind::lu), SingularMatrixError);
}

TEST_CASE("sparse factorization matches dense elimination oracle on random SPD")
{
  const DenseMatrix d = random_spd(20);
  const SparseMatrix a = from_dense(d);
  Vector b(20);
  for (auto& v : b)
    v = oracle::uniform();

  for (const auto kind : {FactorizationKind::ldlt, FactorizationKind::lu}) {
    const Factorization f(a, kind);
    const Vector x = f.solve(b);
    const auto x_ref = oracle::gauss_solve(d, b);
    for (int k = 0; k < 20; ++k)
      CHECK(std::abs(x[k] - x_ref[k]) <= 1e-10);
    const Vector r = a.multiply(x);
    double rnorm = 0.0;
    for (int k = 0; k < 20; ++k)
      rnorm += (r[k] - b[k]) * (r[k] - b[k]);
    CHECK(std::sqrt(rnorm) <= 1e-10 * norm2(b));
  }
}

TEST_CASE("generalized eigenvalues")
{
  DenseMatrix a(2, 2), n = DenseMatrix::identity(2);
  a(0, 0) = 1.0;
  a(1, 1) = 4.0;
  auto w = generalized_eigenvalues(a, n);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(4.0));

  const DenseMatrix spd = random_spd(5);
  w = generalized_eigenvalues(spd, spd);
  for (double v : w)
    CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

  a(0, 0) = 2.0;
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  a(1, 1) = 2.0;
  w = generalized_eigenvalues(a, n);
  // characteristic polynomial (2-l)^2 - 1 = 0
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(3.0));

  DenseMatrix indef = DenseMatrix::identity(2);
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS((void)generalized_eigenvalues(a, indef), NotSpdError);
}

TEST_CASE("generalized eigensolve agrees with explicit congruence + Jacobi oracle")
{
  const std::size_t n = 12;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = oracle::uniform();
      a(i, j) = v;
      a(j, i) = v;
    }
  const DenseMatrix nm = random_spd(n);

  const auto w = generalized_eigenvalues(a, nm);

  const DenseMatrix l = oracle::cholesky(nm);
  // B = L^-1 A L^-T by triangular solves
  DenseMatrix li = lu_inverse(l);
  const DenseMatrix b = li.multiply(a).multiply(li.transposed());
  DenseMatrix bs(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      bs(i, j) = 0.5 * (b(i, j) + b(j, i));
  const auto w_ref = oracle::jacobi_eigenvalues(bs);
  for (std::size_t k = 0; k < n; ++k)
    CHECK(w[k] == doctest::Approx(w_ref[k]).epsilon(1e-8));
}

TEST_CASE("generalized eigenvector residuals")
{
  const std::size_t n = 8;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = oracle::uniform();
      a(i, j) = v;
      a(j, i) = v;
    }
  const DenseMatrix nm = random_spd(n);
  std::vector<double> w;
  DenseMatrix vecs;
  generalized_eig(a, nm, w, vecs);
  const double scale = a.max_abs();
  for (std::size_t k = 0; k < n; ++k) {
    Vector xk(n);
    for (std::size_t i = 0; i < n; ++i)
      xk[i] = vecs(i, k);
    const Vector ax = a.multiply(xk);
    const Vector nx = nm.multiply(xk);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      res += (ax[i] - w[k] * nx[i]) * (ax[i] - w[k] * nx[i]);
    CHECK(std::sqrt(res) <= 1e-8 * scale);
  }
}

TEST_CASE("matrix market round trip")
{
  DenseMatrix d(4, 3);
  d(0, 0) = 1.5;
  d(1, 2) = -2.25;
  d(3, 1) = 1e-13;
  const SparseMatrix a = from_dense(d);
  std::stringstream ss;
  write_matrix_market(a, ss);
  const SparseMatrix b = read_matrix_market(ss);
  REQUIRE(b.n_rows() == a.n_rows());
  REQUIRE(b.n_cols() == a.n_cols());
  REQUIRE(b.nnz() == a.nnz());
  for (index_t i = 0; i < a.n_rows(); ++i)
    for (index_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
      CHECK(a.values()[k] == b.values()[k]);

  // symmetric banner writes the lower triangle only
  const DenseMatrix s = random_spd(5);
  const SparseMatrix as = from_dense(s);
  std::stringstream ss2;
  write_matrix_market(as, ss2, /*symmetric=*/true);
  const SparseMatrix bs = read_matrix_market(ss2);
  CHECK(bs.nnz() == as.nnz());
  CHECK(bs.max_asymmetry() == 0.0);
  for (index_t i = 0; i < 5; ++i)
    for (index_t j = 0; j < 5; ++j)
      CHECK(bs.coeff(i, j) == as.coeff(i, j));
}

TEST_CASE("submatrix extraction")
{
  DenseMatrix d(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      d(i, j) = 10.0 * static_cast<double>(i) + static_cast<double>(j);
  const SparseMatrix a = from_dense(d);
  const SparseMatrix sub = a.submatrix({1, 3}, {0, 2});
  CHECK(sub.n_rows() == 2);
  CHECK(sub.coeff(0, 0) == doctest::Approx(10.0));
  CHECK(sub.coeff(1, 1) == doctest::Approx(32.0));
}
