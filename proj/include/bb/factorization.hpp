#ifndef BB_FACTORIZATION_HPP
#define BB_FACTORIZATION_HPP

#include <memory>

#include "bb/sparse.hpp"

namespace bb {

enum class FactorizationKind {
  ldlt, // symmetric quasi-definite / SPD blocks
  lu    // general square, partial pivoting
};

/// Opaque sparse factorization. solve() reproduces b to a relative residual
/// of 1e-10 for well-conditioned inputs.
class Factorization {
public:
  Factorization(const SparseMatrix& a, FactorizationKind kind, double pivot_tol = 1e-14);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  Vector solve(const Vector& b) const;
  index_t dim() const;
  FactorizationKind kind() const { return kind_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  FactorizationKind kind_;
};

inline Factorization factorize(const SparseMatrix& a,
                               FactorizationKind kind = FactorizationKind::lu)
{
  return Factorization(a, kind);
}

} // namespace bb

#endif
