#include "bb/factorization.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace bb {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& a)
{
  Eigen::SparseMatrix<double> m(a.n_rows(), a.n_cols());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.nnz());
  for (index_t i = 0; i < a.n_rows(); ++i)
    for (index_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
      trip.emplace_back(static_cast<int>(i), static_cast<int>(a.col_indices()[k]), a.values()[k]);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

} // namespace

struct Factorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  index_t n = 0;
  double pivot_tol = 0.0;
  bool use_ldlt = false;
};

Factorization::Factorization(const SparseMatrix& a, FactorizationKind kind, double pivot_tol)
    : impl_(std::make_unique<Impl>()), kind_(kind)
{
  if (a.n_rows() != a.n_cols())
    throw std::invalid_argument("factorize: matrix not square");
  impl_->n = a.n_rows();
  impl_->pivot_tol = pivot_tol;
  const auto m = to_eigen(a);
  if (kind == FactorizationKind::ldlt) {
    impl_->use_ldlt = true;
    impl_->ldlt.compute(m);
    if (impl_->ldlt.info() != Eigen::Success)
      throw SingularMatrixError(0);
    // Diagonal pivot threshold: LDLT of an SPD/SQD block must not produce
    // vanishing pivots.
    const auto& d = impl_->ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (std::abs(d[i]) < pivot_tol)
        throw SingularMatrixError(static_cast<std::size_t>(i));
  } else {
    impl_->lu.compute(m);
    if (impl_->lu.info() != Eigen::Success)
      throw SingularMatrixError(0);
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

index_t Factorization::dim() const { return impl_->n; }

Vector Factorization::solve(const Vector& b) const
{
  if (static_cast<index_t>(b.size()) != impl_->n)
    throw std::invalid_argument("Factorization::solve: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
  Eigen::VectorXd x;
  if (impl_->use_ldlt)
    x = impl_->ldlt.solve(bv);
  else
    x = impl_->lu.solve(bv);
  return Vector(x.data(), x.data() + x.size());
}

} // namespace bb
