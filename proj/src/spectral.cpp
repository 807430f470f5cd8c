#include "gcert/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "gcert/errors.hpp"

namespace gcert {

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PD: return "PD";
    case Definiteness::PSD: return "PSD";
    case Definiteness::Indefinite: return "Indefinite";
    case Definiteness::NSD: return "NSD";
    case Definiteness::ND: return "ND";
  }
  return "?";
}

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const std::vector<Vector>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i != j) s += a[i][j] * a[i][j];
    }
  }
  return std::sqrt(s);
}

}  // namespace

Vector eigs_sym(const SymmetricMatrix& M) {
  const std::size_t n = M.dim();
  auto a = M.to_rows();
  const double target = 1e-12 * M.frobenius_norm();

  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (++sweep > kMaxSweeps) {
      throw NumericalFailure("Jacobi eigensolver did not converge in " +
                             std::to_string(kMaxSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        // Rotation angle chosen to annihilate a[p][q] (Rutishauser's form).
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        a[p][q] = 0.0;
        a[q][p] = 0.0;
      }
    }
  }

  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

double default_definiteness_tol(const SymmetricMatrix& M, double relative) {
  return relative * (1.0 + M.frobenius_norm());
}

SpectralVerdict classify(const SymmetricMatrix& M, std::optional<double> tol) {
  SpectralVerdict v;
  v.tol = tol.value_or(default_definiteness_tol(M));
  if (v.tol < 0) throw ContractError("definiteness tolerance must be >= 0");
  const Vector eig = eigs_sym(M);
  v.min_eig = eig.front();
  v.max_eig = eig.back();
  v.both_semidefinite = v.is_psd() && v.is_nsd();
  if (v.both_semidefinite) {
    v.classification = Definiteness::PSD;
  } else if (v.is_pd()) {
    v.classification = Definiteness::PD;
  } else if (v.is_nd()) {
    v.classification = Definiteness::ND;
  } else if (v.is_psd()) {
    v.classification = Definiteness::PSD;
  } else if (v.is_nsd()) {
    v.classification = Definiteness::NSD;
  } else {
    v.classification = Definiteness::Indefinite;
  }
  return v;
}

double mu_first_eigenvalue(const SymmetricMatrix& A) {
  return eigs_sym(-0.5 * A).front();
}

}  // namespace gcert
