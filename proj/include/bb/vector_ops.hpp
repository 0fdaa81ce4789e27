#ifndef BB_VECTOR_OPS_HPP
#define BB_VECTOR_OPS_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bb {

using Vector = std::vector<double>;

inline double dot(const Vector& x, const Vector& y)
{
  if (x.size() != y.size())
    throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += x[i] * y[i];
  return s;
}

inline double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

/// y += a*x
inline void axpy(double a, const Vector& x, Vector& y)
{
  if (x.size() != y.size())
    throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] += a * x[i];
}

inline void scale(double a, Vector& x)
{
  for (double& v : x)
    v *= a;
}

inline Vector zeros(std::size_t n) { return Vector(n, 0.0); }

} // namespace bb

#endif
