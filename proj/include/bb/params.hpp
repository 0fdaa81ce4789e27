#ifndef BB_PARAMS_HPP
#define BB_PARAMS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "bb/dense.hpp"

namespace bb {

struct InvalidParamsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Model coefficients. Spatially constant; beta is symmetric with zero
/// diagonal.
struct PhysicalParams {
  int n = 1;            // number of fluid networks
  double mu = 1.0;      // Lame parameters
  double lambda = 1.0;
  double tau = 1.0;     // time step
  std::vector<double> alpha; // Biot-Willis, per network
  std::vector<double> c;     // storage coefficients
  std::vector<double> nu;    // viscosities
  std::vector<double> K;     // hydraulic conductances
  std::vector<std::vector<double>> beta; // transfer coefficients, n x n

  static PhysicalParams uniform(int n_networks, double value = 1.0);
  void validate() const;
};

/// Scaling quantities derived from the model coefficients.
struct DerivedParams {
  std::vector<double> s;     // s_i = c_i + sum_j tau*beta_ij
  std::vector<double> gamma; // gamma_i = tau*nu_i/K_i
  double R = 0.0;            // 1/max_i((1+nu_i)*tau/K_i)
  DenseMatrix lambda1;       // -tau * offdiagonal beta
  DenseMatrix lambda2;       // diag(s)
  DenseMatrix lambda3;       // tau^2 R I
  DenseMatrix lambda4;       // alpha alpha^T / (2 mu + lambda)
  DenseMatrix lambda_mat;    // sum of the four
  DenseMatrix lambda_inv;
};

DerivedParams derive(const PhysicalParams& p);

/// (a I + b alpha alpha^T)^{-1} = a^{-1} I - a^{-1} (a/b + |alpha|^2)^{-1} alpha alpha^T.
DenseMatrix sherman_morrison_inverse(double a, double b, const std::vector<double>& alpha);

/// Parse key=value text: n, mu, lambda, tau, alpha_i, c_i, nu_i, K_i, beta_ij.
PhysicalParams parse_params_config(const std::string& text);
PhysicalParams read_params_file(const std::string& path);

} // namespace bb

#endif
