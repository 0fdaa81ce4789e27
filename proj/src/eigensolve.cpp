#include "bb/eigensolve.hpp"

#include <lapacke.h>

#include <string>

namespace bb {

namespace {

void check_square_symmetric(const DenseMatrix& a, const char* who)
{
  if (a.n_rows() != a.n_cols())
    throw std::invalid_argument(std::string(who) + ": matrix not square");
  if (!a.is_symmetric(1e-10))
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

} // namespace

std::vector<double> sym_eigenvalues(const DenseMatrix& a)
{
  check_square_symmetric(a, "sym_eigenvalues");
  const lapack_int n = static_cast<lapack_int>(a.n_rows());
  DenseMatrix work = a;
  std::vector<double> w(n);
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0)
    throw std::runtime_error("dsyev failed, info=" + std::to_string(info));
  return w;
}

void sym_eig(const DenseMatrix& a, std::vector<double>& eigenvalues, DenseMatrix& eigenvectors)
{
  check_square_symmetric(a, "sym_eig");
  const lapack_int n = static_cast<lapack_int>(a.n_rows());
  eigenvectors = a;
  eigenvalues.assign(n, 0.0);
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'L', n, eigenvectors.data(), n, eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("dsyev failed, info=" + std::to_string(info));
  // LAPACK returns eigenvectors in rows of the row-major buffer's columns;
  // dsyev with row-major layout stores them as columns already.
}

namespace {

std::vector<double> dsygv_driver(const DenseMatrix& a, const DenseMatrix& n_mat, char jobz,
                                 DenseMatrix* vectors)
{
  check_square_symmetric(a, "generalized_eig");
  check_square_symmetric(n_mat, "generalized_eig (N)");
  if (a.n_rows() != n_mat.n_rows())
    throw std::invalid_argument("generalized_eig: operand sizes differ");
  const lapack_int n = static_cast<lapack_int>(a.n_rows());
  DenseMatrix aw = a;
  DenseMatrix nw = n_mat;
  std::vector<double> w(n);
  const lapack_int info = LAPACKE_dsygv(LAPACK_ROW_MAJOR, 1, jobz, 'L', n, aw.data(), n,
                                        nw.data(), n, w.data());
  if (info > n)
    throw NotSpdError("generalized_eig: N is not symmetric positive definite");
  if (info != 0)
    throw std::runtime_error("dsygv failed, info=" + std::to_string(info));
  if (vectors)
    *vectors = aw;
  return w;
}

} // namespace

std::vector<double> generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& n)
{
  return dsygv_driver(a, n, 'N', nullptr);
}

void generalized_eig(const DenseMatrix& a, const DenseMatrix& n, std::vector<double>& eigenvalues,
                     DenseMatrix& eigenvectors)
{
  eigenvalues = dsygv_driver(a, n, 'V', &eigenvectors);
}

} // namespace bb
