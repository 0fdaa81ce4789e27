#ifndef BB_EIGENSOLVE_HPP
#define BB_EIGENSOLVE_HPP

#include <stdexcept>
#include <vector>

#include "bb/dense.hpp"

namespace bb {

struct NotSpdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> sym_eigenvalues(const DenseMatrix& a);

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix.
void sym_eig(const DenseMatrix& a, std::vector<double>& eigenvalues, DenseMatrix& eigenvectors);

/// Generalized eigenvalues of A x = lambda N x with A symmetric and N
/// symmetric positive definite, ascending. Throws NotSpdError if the
/// Cholesky step on N fails.
std::vector<double> generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& n);

/// As above, also returning N-orthonormal eigenvectors (columns).
void generalized_eig(const DenseMatrix& a, const DenseMatrix& n, std::vector<double>& eigenvalues,
                     DenseMatrix& eigenvectors);

} // namespace bb

#endif
