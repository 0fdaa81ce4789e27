#include "bb/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bb {

SparseMatrix SparseMatrix::identity(index_t n)
{
  SparseMatrix m(n, n);
  m.col_indices_.resize(n);
  m.values_.assign(n, 1.0);
  for (index_t i = 0; i < n; ++i) {
    m.row_offsets_[i] = i;
    m.col_indices_[i] = i;
  }
  m.row_offsets_[n] = n;
  return m;
}

double SparseMatrix::coeff(index_t i, index_t j) const
{
  for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
    if (col_indices_[k] == j)
      return values_[k];
  return 0.0;
}

Vector SparseMatrix::multiply_serial(const Vector& x) const
{
  if (static_cast<index_t>(x.size()) != n_cols_)
    throw std::invalid_argument("spmv: dimension mismatch");
  Vector y(n_rows_, 0.0);
  for (index_t i = 0; i < n_rows_; ++i) {
    double s = 0.0;
    for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * x[col_indices_[k]];
    y[i] = s;
  }
  return y;
}

Vector SparseMatrix::multiply(const Vector& x) const
{
  if (static_cast<index_t>(x.size()) != n_cols_)
    throw std::invalid_argument("spmv: dimension mismatch");
  Vector y(n_rows_, 0.0);
  // Row-parallel: each y_i is accumulated by one thread in CSR order, so the
  // result is bitwise identical to the serial kernel.
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n_rows_; ++i) {
    double s = 0.0;
    for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * x[col_indices_[k]];
    y[i] = s;
  }
  return y;
}

Vector spmv(const SparseMatrix& a, const Vector& x) { return a.multiply(x); }

SparseMatrix SparseMatrix::transposed() const
{
  SparseMatrix t(n_cols_, n_rows_);
  std::vector<index_t> count(n_cols_, 0);
  for (index_t k = 0; k < nnz(); ++k)
    ++count[col_indices_[k]];
  t.row_offsets_.assign(n_cols_ + 1, 0);
  for (index_t j = 0; j < n_cols_; ++j)
    t.row_offsets_[j + 1] = t.row_offsets_[j] + count[j];
  t.col_indices_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<index_t> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
  for (index_t i = 0; i < n_rows_; ++i)
    for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const index_t j = col_indices_[k];
      t.col_indices_[next[j]] = i;
      t.values_[next[j]] = values_[k];
      ++next[j];
    }
  return t;
}

SparseMatrix SparseMatrix::add_scaled(double alpha, const SparseMatrix& other) const
{
  if (n_rows_ != other.n_rows_ || n_cols_ != other.n_cols_)
    throw std::invalid_argument("add_scaled: shape mismatch");
  CooBuilder coo(n_rows_, n_cols_);
  coo.reserve(values_.size() + other.values_.size());
  for (index_t i = 0; i < n_rows_; ++i)
    for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      coo.add(i, col_indices_[k], values_[k]);
  for (index_t i = 0; i < other.n_rows_; ++i)
    for (index_t k = other.row_offsets_[i]; k < other.row_offsets_[i + 1]; ++k)
      coo.add(i, other.col_indices_[k], alpha * other.values_[k]);
  return coo.compress();
}

SparseMatrix SparseMatrix::submatrix(const std::vector<index_t>& rows,
                                     const std::vector<index_t>& cols) const
{
  std::vector<index_t> col_map(n_cols_, -1);
  for (std::size_t j = 0; j < cols.size(); ++j)
    col_map[cols[j]] = static_cast<index_t>(j);

  CooBuilder coo(static_cast<index_t>(rows.size()), static_cast<index_t>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const index_t r = rows[i];
    for (index_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const index_t jc = col_map[col_indices_[k]];
      if (jc >= 0)
        coo.add(static_cast<index_t>(i), jc, values_[k]);
    }
  }
  return coo.compress();
}

DenseMatrix SparseMatrix::to_dense() const
{
  DenseMatrix d(static_cast<std::size_t>(n_rows_), static_cast<std::size_t>(n_cols_));
  for (index_t i = 0; i < n_rows_; ++i)
    for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      d(i, col_indices_[k]) = values_[k];
  return d;
}

double SparseMatrix::max_abs() const
{
  double m = 0.0;
  for (double v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::max_asymmetry() const
{
  if (n_rows_ != n_cols_)
    throw std::invalid_argument("max_asymmetry: matrix not square");
  const SparseMatrix t = transposed();
  double m = 0.0;
  for (index_t i = 0; i < n_rows_; ++i) {
    index_t ka = row_offsets_[i], kb = t.row_offsets_[i];
    const index_t ea = row_offsets_[i + 1], eb = t.row_offsets_[i + 1];
    while (ka < ea || kb < eb) {
      const index_t ja = ka < ea ? col_indices_[ka] : n_cols_;
      const index_t jb = kb < eb ? t.col_indices_[kb] : n_cols_;
      if (ja == jb) {
        m = std::max(m, std::abs(values_[ka] - t.values_[kb]));
        ++ka;
        ++kb;
      } else if (ja < jb) {
        m = std::max(m, std::abs(values_[ka]));
        ++ka;
      } else {
        m = std::max(m, std::abs(t.values_[kb]));
        ++kb;
      }
    }
  }
  return m;
}

void CooBuilder::reserve(std::size_t n)
{
  rows_.reserve(n);
  cols_.reserve(n);
  vals_.reserve(n);
}

std::size_t CooBuilder::allocate(std::size_t n)
{
  const std::size_t off = rows_.size();
  rows_.resize(off + n, 0);
  cols_.resize(off + n, 0);
  vals_.resize(off + n, 0.0);
  return off;
}

void CooBuilder::set(std::size_t slot, index_t row, index_t col, double value)
{
  rows_[slot] = row;
  cols_[slot] = col;
  vals_[slot] = value;
}

void CooBuilder::add(index_t row, index_t col, double value)
{
  rows_.push_back(row);
  cols_.push_back(col);
  vals_.push_back(value);
}

SparseMatrix CooBuilder::compress() const
{
  const std::size_t n = rows_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Buffer index breaks ties, fixing the summation order of duplicates.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows_[a] != rows_[b])
      return rows_[a] < rows_[b];
    if (cols_[a] != cols_[b])
      return cols_[a] < cols_[b];
    return a < b;
  });

  SparseMatrix m(n_rows_, n_cols_);
  m.col_indices_.reserve(n);
  m.values_.reserve(n);
  std::vector<index_t> row_count(n_rows_, 0);
  std::size_t k = 0;
  while (k < n) {
    const index_t r = rows_[order[k]];
    const index_t c = cols_[order[k]];
    if (r < 0 || r >= n_rows_ || c < 0 || c >= n_cols_)
      throw std::out_of_range("CooBuilder: entry outside matrix");
    double s = 0.0;
    while (k < n && rows_[order[k]] == r && cols_[order[k]] == c) {
      s += vals_[order[k]];
      ++k;
    }
    m.col_indices_.push_back(c);
    m.values_.push_back(s);
    ++row_count[r];
  }
  for (index_t i = 0; i < n_rows_; ++i)
    m.row_offsets_[i + 1] = m.row_offsets_[i] + row_count[i];
  return m;
}

void write_matrix_market(const SparseMatrix& a, std::ostream& os, bool symmetric)
{
  os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << "\n";
  index_t count = 0;
  if (symmetric) {
    for (index_t i = 0; i < a.n_rows(); ++i)
      for (index_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
        if (a.col_indices()[k] <= i)
          ++count;
  } else {
    count = a.nnz();
  }
  os << a.n_rows() << " " << a.n_cols() << " " << count << "\n";
  os.precision(17);
  for (index_t i = 0; i < a.n_rows(); ++i)
    for (index_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      const index_t j = a.col_indices()[k];
      if (symmetric && j > i)
        continue;
      os << (i + 1) << " " << (j + 1) << " " << a.values()[k] << "\n";
    }
}

void write_matrix_market(const SparseMatrix& a, const std::string& path, bool symmetric)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path);
  write_matrix_market(a, os, symmetric);
}

SparseMatrix read_matrix_market(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("matrix market: empty stream");
  if (line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("matrix market: bad banner");
  const bool symmetric = line.find("symmetric") != std::string::npos;
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos)
    throw std::runtime_error("matrix market: only coordinate real supported");

  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%')
      break;
  std::istringstream header(line);
  index_t rows = 0, cols = 0, count = 0;
  header >> rows >> cols >> count;
  if (!header)
    throw std::runtime_error("matrix market: bad size line");

  CooBuilder coo(rows, cols);
  coo.reserve(symmetric ? 2 * count : count);
  for (index_t k = 0; k < count; ++k) {
    index_t i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v))
      throw std::runtime_error("matrix market: truncated entries");
    coo.add(i - 1, j - 1, v);
    if (symmetric && i != j)
      coo.add(j - 1, i - 1, v);
  }
  return coo.compress();
}

SparseMatrix read_matrix_market_file(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  return read_matrix_market(is);
}

void write_vector(const Vector& v, const std::string& path)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path);
  os.precision(17);
  for (double x : v)
    os << x << "\n";
}

Vector read_vector(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  Vector v;
  double x;
  while (is >> x)
    v.push_back(x);
  return v;
}

} // namespace bb
