#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gcert {

using Vector = std::vector<double>;

namespace vec {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);

}  // namespace vec

/// Dense symmetric n x n matrix. Only the upper triangle is stored; reads of
/// (i, j) and (j, i) return the same entry, so symmetry holds by construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n);

  static SymmetricMatrix zero(std::size_t n) { return SymmetricMatrix(n); }
  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(std::span<const double> d);
  /// Builds from full rows. Throws ValidationError if |r[i][j] - r[j][i]| > sym_tol
  /// or the rows are not square.
  static SymmetricMatrix from_rows(const std::vector<Vector>& rows, double sym_tol = 1e-12);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { data_[index(i, j)] = v; }
  void add_to(std::size_t i, std::size_t j, double v) { data_[index(i, j)] += v; }

  Vector multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  double frobenius_norm() const;
  double trace() const;
  std::vector<Vector> to_rows() const;

  SymmetricMatrix& operator+=(const SymmetricMatrix& o);
  SymmetricMatrix& operator-=(const SymmetricMatrix& o);
  SymmetricMatrix& operator*=(double s);
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) { return a -= b; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }
  SymmetricMatrix operator-() const { return -1.0 * *this; }

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  Vector data_;
};

}  // namespace gcert
