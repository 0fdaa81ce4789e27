#ifndef BB_SPARSE_HPP
#define BB_SPARSE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bb/dense.hpp"
#include "bb/vector_ops.hpp"

namespace bb {

using index_t = std::int64_t;

/// Compressed-sparse-row matrix. Column indices are strictly increasing
/// within each row and duplicates are merged at construction.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(index_t rows, index_t cols) : n_rows_(rows), n_cols_(cols), row_offsets_(rows + 1, 0) {}

  index_t n_rows() const { return n_rows_; }
  index_t n_cols() const { return n_cols_; }
  index_t nnz() const { return static_cast<index_t>(values_.size()); }

  const std::vector<index_t>& row_offsets() const { return row_offsets_; }
  const std::vector<index_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  static SparseMatrix identity(index_t n);

  /// Stored entry (i,j), or 0 if not present.
  double coeff(index_t i, index_t j) const;

  Vector multiply(const Vector& x) const;          // OpenMP over rows
  Vector multiply_serial(const Vector& x) const;   // reference kernel

  SparseMatrix transposed() const;

  /// C = this + alpha * other (patterns may differ).
  SparseMatrix add_scaled(double alpha, const SparseMatrix& other) const;

  /// Submatrix A[rows, cols] with indices renumbered in the given order.
  SparseMatrix submatrix(const std::vector<index_t>& rows, const std::vector<index_t>& cols) const;

  DenseMatrix to_dense() const;

  double max_abs() const;
  /// max_ij |a_ij - a_ji|
  double max_asymmetry() const;

  friend class CooBuilder;

private:
  index_t n_rows_ = 0;
  index_t n_cols_ = 0;
  std::vector<index_t> row_offsets_;
  std::vector<index_t> col_indices_;
  std::vector<double> values_;
};

Vector spmv(const SparseMatrix& a, const Vector& x);

/// Coordinate-format accumulation buffer. Entries may be appended from
/// concurrent cell loops into disjoint preallocated slots; compress()
/// performs a deterministic sort-and-merge so the assembled sums do not
/// depend on the thread count.
class CooBuilder {
public:
  CooBuilder(index_t rows, index_t cols) : n_rows_(rows), n_cols_(cols) {}

  void reserve(std::size_t n);
  /// Preallocate n slots and return the offset of the first one.
  std::size_t allocate(std::size_t n);
  void set(std::size_t slot, index_t row, index_t col, double value);
  void add(index_t row, index_t col, double value);

  std::size_t size() const { return rows_.size(); }

  SparseMatrix compress() const;

private:
  index_t n_rows_;
  index_t n_cols_;
  std::vector<index_t> rows_;
  std::vector<index_t> cols_;
  std::vector<double> vals_;
};

/// Matrix Market exchange (coordinate real general / symmetric).
void write_matrix_market(const SparseMatrix& a, std::ostream& os, bool symmetric = false);
void write_matrix_market(const SparseMatrix& a, const std::string& path, bool symmetric = false);
SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market_file(const std::string& path);

void write_vector(const Vector& v, const std::string& path);
Vector read_vector(const std::string& path);

} // namespace bb

#endif
