#include "gcert/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "gcert/errors.hpp"

namespace gcert {
namespace vec {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot", a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vector sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub", a.size(), b.size());
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("add", a.size(), b.size());
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector scaled(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy", y.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

}  // namespace vec

SymmetricMatrix::SymmetricMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {
  if (n == 0) throw ValidationError("symmetric matrix dimension must be >= 1");
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
  SymmetricMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymmetricMatrix SymmetricMatrix::from_rows(const std::vector<Vector>& rows, double sym_tol) {
  const std::size_t n = rows.size();
  if (n == 0) throw ValidationError("matrix has no rows");
  for (const auto& r : rows) {
    if (r.size() != n) throw ValidationError("matrix is not square");
  }
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(rows[i][j] - rows[j][i]) > sym_tol) {
        throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

std::size_t SymmetricMatrix::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // row-major packed upper triangle
  return i * n_ - i * (i + 1) / 2 + j;
}

Vector SymmetricMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw DimensionMismatch("SymmetricMatrix::multiply", n_, x.size());
  Vector y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double SymmetricMatrix::quadratic_form(std::span<const double> x) const {
  return vec::dot(x, multiply(x));
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
  }
  return std::sqrt(s);
}

double SymmetricMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

std::vector<Vector> SymmetricMatrix::to_rows() const {
  std::vector<Vector> rows(n_, Vector(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) rows[i][j] = (*this)(i, j);
  }
  return rows;
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& o) {
  if (o.n_ != n_) throw DimensionMismatch("SymmetricMatrix::+=", n_, o.n_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator-=(const SymmetricMatrix& o) {
  if (o.n_ != n_) throw DimensionMismatch("SymmetricMatrix::-=", n_, o.n_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

}  // namespace gcert
