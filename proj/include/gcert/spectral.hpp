#pragma once

#include <optional>

#include "gcert/linalg.hpp"

namespace gcert {

enum class Definiteness { PD, PSD, Indefinite, NSD, ND };

const char* to_string(Definiteness d);

struct SpectralVerdict {
  double min_eig = 0.0;
  double max_eig = 0.0;
  Definiteness classification = Definiteness::Indefinite;
  /// Set when the matrix is both PSD and NSD within tol (numerically zero);
  /// classification then reports PSD.
  bool both_semidefinite = false;
  double tol = 0.0;

  bool is_psd() const { return min_eig >= -tol; }
  bool is_pd() const { return min_eig > tol; }
  bool is_nsd() const { return max_eig <= tol; }
  bool is_nd() const { return max_eig < -tol; }
};

/// Eigenvalues of a symmetric matrix in nondecreasing order, by cyclic Jacobi
/// rotations. Throws NumericalFailure if 100 sweeps do not bring the
/// off-diagonal Frobenius norm below 1e-12 * ||M||_F.
Vector eigs_sym(const SymmetricMatrix& M);

/// Default definiteness tolerance 1e-9 * (1 + ||M||_F).
double default_definiteness_tol(const SymmetricMatrix& M, double relative = 1e-9);

/// PD iff min_eig > tol, PSD iff min_eig >= -tol, ND/NSD mirrored on max_eig.
SpectralVerdict classify(const SymmetricMatrix& M, std::optional<double> tol = std::nullopt);

/// Smallest eigenvalue of -A/2, i.e. inf over the unit sphere of -1/2 x^T A x.
double mu_first_eigenvalue(const SymmetricMatrix& A);

}  // namespace gcert
