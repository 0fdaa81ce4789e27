#include "bb/solvers.hpp"

#include <lapacke.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

namespace bb {

void SolverReport::write_history_csv(const std::string& path) const
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path);
  os << "iteration,residual\n";
  os.precision(17);
  for (std::size_t k = 0; k < residual_history.size(); ++k)
    os << k << "," << residual_history[k] << "\n";
}

SolverReport minres(const Operator& a, const Operator& m, const Vector& b, Vector& x,
                    double rtol, int max_iter, bool true_residual)
{
  const auto t0 = std::chrono::steady_clock::now();
  SolverReport report;
  const std::size_t n = b.size();
  x.assign(n, 0.0);

  Vector r1 = b;
  Vector y = m(r1);
  double beta1_sq = dot(r1, y);
  if (beta1_sq < 0.0) {
    report.breakdown = true;
    report.message = "preconditioner is not positive definite";
    return report;
  }
  const double beta1 = std::sqrt(beta1_sq);
  report.residual_history.push_back(beta1);
  if (beta1 == 0.0) {
    report.converged = true;
    return report;
  }

  Vector r2 = r1;
  Vector w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, oldeps = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;

  for (int k = 1; k <= max_iter; ++k) {
    // Lanczos step on the preconditioned operator
    Vector v = y;
    scale(1.0 / beta, v);
    y = a(v);
    if (k >= 2)
      axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    r1 = r2;
    r2 = y;
    y = m(r2);
    oldb = beta;
    const double beta_sq = dot(r2, y);
    if (beta_sq < 0.0) {
      report.breakdown = true;
      report.message = "preconditioner lost positive definiteness";
      break;
    }
    beta = std::sqrt(beta_sq);

    // Previous rotation applied to the new column of T
    oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;

    double gamma = std::sqrt(gbar * gbar + beta * beta);
    if (gamma == 0.0)
      gamma = 1e-300;
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    for (std::size_t i = 0; i < n; ++i)
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    axpy(phi, w, x);

    report.iterations = k;
    if (true_residual) {
      Vector res = a(x);
      for (std::size_t i = 0; i < n; ++i)
        res[i] = b[i] - res[i];
      const double rn = norm2(res);
      report.residual_history.push_back(rn);
      if (rn <= rtol * norm2(b)) {
        report.converged = true;
        break;
      }
    } else {
      report.residual_history.push_back(std::abs(phibar));
      if (std::abs(phibar) <= rtol * beta1) {
        report.converged = true;
        break;
      }
    }
  }
  if (!report.converged && !report.breakdown)
    report.message = "max iterations reached";
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SolverReport cg(const Operator& a, const Operator& m, const Vector& b, Vector& x,
                double reduction, int max_iter)
{
  const auto t0 = std::chrono::steady_clock::now();
  SolverReport report;
  const std::size_t n = b.size();
  x.assign(n, 0.0);

  Vector r = b;
  Vector z = m(r);
  double rz = dot(r, z);
  if (rz < 0.0) {
    report.breakdown = true;
    report.message = "preconditioner is not positive definite";
    return report;
  }
  const double norm0 = std::sqrt(rz);
  report.residual_history.push_back(norm0);
  if (norm0 == 0.0) {
    report.converged = true;
    return report;
  }
  const double target = norm0 / reduction;

  Vector p = z;
  for (int k = 1; k <= max_iter; ++k) {
    const Vector q = a(p);
    const double pq = dot(p, q);
    if (pq <= 0.0) {
      report.breakdown = true;
      report.message = "operator indefiniteness detected (p'Ap <= 0)";
      break;
    }
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    z = m(r);
    const double rz_new = dot(r, z);
    if (rz_new < 0.0) {
      report.breakdown = true;
      report.message = "preconditioner lost positive definiteness";
      break;
    }
    report.iterations = k;
    report.residual_history.push_back(std::sqrt(rz_new));
    if (std::sqrt(rz_new) <= target) {
      report.converged = true;
      break;
    }
    const double beta = rz_new / rz;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
    rz = rz_new;
  }
  if (!report.converged && !report.breakdown)
    report.message = "max iterations reached";
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SolverReport condition_number(const SparseMatrix& a, const SparseMatrix& n)
{
  SolverReport report;
  const auto t0 = std::chrono::steady_clock::now();
  const auto eigs = generalized_eigenvalues(a.to_dense(), n.to_dense());
  double min_abs = 0.0, max_abs = 0.0;
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    const double av = std::abs(eigs[k]);
    if (k == 0 || av < min_abs)
      min_abs = av;
    if (k == 0 || av > max_abs)
      max_abs = av;
  }
  report.lambda_min = eigs.empty() ? 0.0 : eigs.front();
  report.lambda_max = eigs.empty() ? 0.0 : eigs.back();
  report.condition_number = min_abs > 0.0 ? max_abs / min_abs
                                          : std::numeric_limits<double>::infinity();
  report.converged = true;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double infsup_constant(const SparseMatrix& b, const SparseMatrix& norm_left,
                       const SparseMatrix& norm_right, double zero_tol)
{
  if (b.n_rows() != norm_left.n_rows() || b.n_cols() != norm_right.n_rows())
    throw std::invalid_argument("infsup_constant: shape mismatch");
  // sigma^2 are the generalized eigenvalues of (B Nr^-1 B^T, Nl).
  const lapack_int nr = static_cast<lapack_int>(norm_right.n_rows());
  DenseMatrix right = norm_right.to_dense();
  DenseMatrix bt = b.transposed().to_dense(); // nr x nl
  lapack_int info = LAPACKE_dposv(LAPACK_ROW_MAJOR, 'L', nr,
                                  static_cast<lapack_int>(bt.n_cols()), right.data(), nr,
                                  bt.data(), static_cast<lapack_int>(bt.n_cols()));
  if (info != 0)
    throw NotSpdError("infsup_constant: right norm matrix is not SPD");
  const DenseMatrix s = b.to_dense().multiply(bt); // nl x nl
  const auto eigs = generalized_eigenvalues(s, norm_left.to_dense());
  const double max_eig = eigs.empty() ? 0.0 : eigs.back();
  double smallest_nonzero = 0.0;
  for (const double e : eigs)
    if (e > zero_tol * max_eig) {
      smallest_nonzero = e;
      break;
    }
  return std::sqrt(std::max(0.0, smallest_nonzero));
}

} // namespace bb
