#include "bb/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bb {

PhysicalParams PhysicalParams::uniform(int n_networks, double value)
{
  PhysicalParams p;
  p.n = n_networks;
  p.mu = 1.0;
  p.lambda = 1.0;
  p.tau = 1.0;
  p.alpha.assign(n_networks, value);
  p.c.assign(n_networks, value);
  p.nu.assign(n_networks, value);
  p.K.assign(n_networks, value);
  p.beta.assign(n_networks, std::vector<double>(n_networks, 0.0));
  return p;
}

void PhysicalParams::validate() const
{
  const int d = 2;
  if (n < 1)
    throw InvalidParamsError("n must be >= 1");
  if (!(mu > 0.0))
    throw InvalidParamsError("mu > 0 violated");
  if (!(d * lambda + 2.0 * mu > 0.0))
    throw InvalidParamsError("d*lambda + 2*mu > 0 violated");
  if (!(tau > 0.0))
    throw InvalidParamsError("tau > 0 violated");
  const auto size_ok = [this](const std::vector<double>& v) {
    return static_cast<int>(v.size()) == n;
  };
  if (!size_ok(alpha) || !size_ok(c) || !size_ok(nu) || !size_ok(K))
    throw InvalidParamsError("per-network coefficient count does not match n");
  if (static_cast<int>(beta.size()) != n)
    throw InvalidParamsError("beta must be n x n");
  for (int i = 0; i < n; ++i) {
    if (!(alpha[i] > 0.0 && alpha[i] <= 1.0))
      throw InvalidParamsError("0 < alpha_i <= 1 violated");
    if (!(c[i] >= 0.0))
      throw InvalidParamsError("c_i >= 0 violated");
    if (!(nu[i] > 0.0))
      throw InvalidParamsError("nu_i > 0 violated");
    if (!(K[i] > 0.0))
      throw InvalidParamsError("K_i > 0 violated");
    if (static_cast<int>(beta[i].size()) != n)
      throw InvalidParamsError("beta must be n x n");
    if (beta[i][i] != 0.0)
      throw InvalidParamsError("beta_ii = 0 violated");
    for (int j = 0; j < n; ++j) {
      if (!(beta[i][j] >= 0.0))
        throw InvalidParamsError("beta_ij >= 0 violated");
      if (beta[i][j] != beta[j][i])
        throw InvalidParamsError("beta_ij = beta_ji violated");
    }
  }
}

DerivedParams derive(const PhysicalParams& p)
{
  p.validate();
  const int n = p.n;
  DerivedParams d;
  d.s.resize(n);
  d.gamma.resize(n);

  // tau multiplies each beta_ij before summation so that supplying tau=1
  // with pre-scaled transfer coefficients reproduces s_i bitwise.
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      sum += p.tau * p.beta[i][j];
    d.s[i] = p.c[i] + sum;
    d.gamma[i] = p.tau * p.nu[i] / p.K[i];
  }

  double r_inv = 0.0;
  for (int i = 0; i < n; ++i)
    r_inv = std::max(r_inv, (1.0 + p.nu[i]) * p.tau / p.K[i]);
  d.R = 1.0 / r_inv;

  d.lambda1 = DenseMatrix(n, n);
  d.lambda2 = DenseMatrix(n, n);
  d.lambda3 = DenseMatrix(n, n);
  d.lambda4 = DenseMatrix(n, n);
  const double inv_2mu_lambda = 1.0 / (2.0 * p.mu + p.lambda);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j)
        d.lambda1(i, j) = -(p.tau * p.beta[i][j]);
      d.lambda4(i, j) = inv_2mu_lambda * p.alpha[i] * p.alpha[j];
    }
    d.lambda2(i, i) = d.s[i];
    d.lambda3(i, i) = p.tau * p.tau * d.R;
  }
  d.lambda_mat = DenseMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d.lambda_mat(i, j) =
          d.lambda1(i, j) + d.lambda2(i, j) + d.lambda3(i, j) + d.lambda4(i, j);
  d.lambda_inv = lu_inverse(d.lambda_mat);
  return d;
}

DenseMatrix sherman_morrison_inverse(double a, double b, const std::vector<double>& alpha)
{
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidParamsError("sherman_morrison_inverse: a and b must be positive");
  const std::size_t n = alpha.size();
  double ata = 0.0;
  for (double v : alpha)
    ata += v * v;
  const double a_inv = 1.0 / a;
  const double factor = a_inv / (a / b + ata);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = -factor * alpha[i] * alpha[j];
    m(i, i) += a_inv;
  }
  return m;
}

namespace {

int index_suffix(const std::string& key, const std::string& prefix)
{
  if (key.rfind(prefix, 0) != 0)
    return -1;
  const std::string tail = key.substr(prefix.size());
  if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
    return -1;
  return std::stoi(tail);
}

} // namespace

PhysicalParams parse_params_config(const std::string& text)
{
  PhysicalParams p;
  std::vector<std::pair<std::string, double>> entries;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(val);
    if (key.empty())
      continue;
    entries.emplace_back(key, std::stod(val));
  }

  p.n = 1;
  for (const auto& [key, value] : entries)
    if (key == "n")
      p.n = static_cast<int>(value);
  p.alpha.assign(p.n, 1.0);
  p.c.assign(p.n, 0.0);
  p.nu.assign(p.n, 1.0);
  p.K.assign(p.n, 1.0);
  p.beta.assign(p.n, std::vector<double>(p.n, 0.0));

  for (const auto& [key, value] : entries) {
    if (key == "n")
      continue;
    if (key == "mu") {
      p.mu = value;
    } else if (key == "lambda") {
      p.lambda = value;
    } else if (key == "tau") {
      p.tau = value;
    } else if (int i = index_suffix(key, "alpha_"); i >= 1 && i <= p.n) {
      p.alpha[i - 1] = value;
    } else if (int i2 = index_suffix(key, "c_"); i2 >= 1 && i2 <= p.n) {
      p.c[i2 - 1] = value;
    } else if (int i3 = index_suffix(key, "nu_"); i3 >= 1 && i3 <= p.n) {
      p.nu[i3 - 1] = value;
    } else if (int i4 = index_suffix(key, "K_"); i4 >= 1 && i4 <= p.n) {
      p.K[i4 - 1] = value;
    } else if (int ij = index_suffix(key, "beta_"); ij >= 11) {
      const int i5 = ij / 10, j5 = ij % 10;
      if (i5 < 1 || i5 > p.n || j5 < 1 || j5 > p.n)
        throw InvalidParamsError("beta index out of range: " + key);
      p.beta[i5 - 1][j5 - 1] = value;
      p.beta[j5 - 1][i5 - 1] = value;
    } else {
      throw InvalidParamsError("unknown parameter key: " + key);
    }
  }
  return p;
}

PhysicalParams read_params_file(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_params_config(buf.str());
}

} // namespace bb
