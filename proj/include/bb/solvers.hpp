#ifndef BB_SOLVERS_HPP
#define BB_SOLVERS_HPP

#include <functional>
#include <string>

#include "bb/eigensolve.hpp"
#include "bb/sparse.hpp"

namespace bb {

struct SolverReport {
  int iterations = 0;
  std::vector<double> residual_history; // preconditioned norms, including initial
  bool converged = false;
  bool breakdown = false;
  std::string message;
  double wall_seconds = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double condition_number = 0.0;

  void write_history_csv(const std::string& path) const;
};

using Operator = std::function<Vector(const Vector&)>;

inline Operator matrix_operator(const SparseMatrix& a)
{
  return [&a](const Vector& x) { return a.multiply(x); };
}

/// Preconditioned MinRes for symmetric A and SPD preconditioner M. Starts
/// from zero and stops when the M-norm of the residual drops below rtol
/// times its initial value; with true_residual set, the unpreconditioned
/// residual norm is monitored instead.
SolverReport minres(const Operator& a, const Operator& m, const Vector& b, Vector& x,
                    double rtol = 1e-8, int max_iter = 1000, bool true_residual = false);

/// Preconditioned conjugate gradients; stops on reduction of the
/// preconditioned residual norm sqrt(r'z) by the given factor.
SolverReport cg(const Operator& a, const Operator& m, const Vector& b, Vector& x,
                double reduction = 1e8, int max_iter = 1000);

/// kappa = max|lambda| / min|lambda| over the dense generalized eigenvalue
/// problem A x = lambda N x, N symmetric positive definite. Operands are
/// expected to be restricted to the relevant dof subset already.
SolverReport condition_number(const SparseMatrix& a, const SparseMatrix& n);

/// Smallest nonzero generalized singular value of
/// norm_left^{-1/2} B norm_right^{-1/2}, computed densely.
double infsup_constant(const SparseMatrix& b, const SparseMatrix& norm_left,
                       const SparseMatrix& norm_right, double zero_tol = 1e-10);

} // namespace bb

#endif
