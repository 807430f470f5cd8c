#pragma once

#include <optional>
#include <span>
#include <string>

#include "gcert/kkt.hpp"
#include "gcert/linalg.hpp"
#include "gcert/model.hpp"
#include "gcert/spectral.hpp"
#include "gcert/tolerances.hpp"

namespace gcert {

enum class CertificateKind { SCQP, SC1QP, SC, SC1RC, SC2RC, GSC };
enum class Verdict { Certified, CertifiedUnique, NotCertified, Inconclusive };

const char* to_string(CertificateKind k);
const char* to_string(Verdict v);

struct CertificateResult {
  CertificateKind kind = CertificateKind::SCQP;
  Verdict verdict = Verdict::Inconclusive;
  /// Assembled matrix for the matrix conditions, with its spectral verdict.
  std::optional<SymmetricMatrix> witness;
  std::optional<SpectralVerdict> spectrum;
  /// Scalar pair for the inequality conditions (SC1RC, SC).
  double lhs = 0.0;
  double rhs = 0.0;
  MultiplierVector lambda_used;
  /// SC only: the sample point attaining the reported estimate.
  std::optional<Vector> sample_argmin;

  bool fired() const {
    return verdict == Verdict::Certified || verdict == Verdict::CertifiedUnique;
  }
};

/// Matrix sum_j lambda_j [A_j - diag(2 chi_i (A_j x + a_j)_i / (v_i - u_i))].
SymmetricMatrix p1_certificate_matrix(const ProblemInstance& p, std::span<const double> x,
                                      const MultiplierVector& lambda, const Tolerances& tol = {});

/// Certified when the matrix is PSD, CertifiedUnique when it is PD.
CertificateResult certify_p1(const ProblemInstance& p, std::span<const double> x,
                             const MultiplierVector& lambda, const Tolerances& tol = {});

/// Scalar condition sum_j lambda_j sum_i chi_i (grad f_j - A_j x)_i / (v_i - u_i)
///   <= sum_j lambda_j mu_j.
CertificateResult certify_p2_eig(const ProblemInstance& p, std::span<const double> x,
                                 const MultiplierVector& lambda, const Tolerances& tol = {});

/// Matrix sum_j lambda_j [A_j + diag(2 chi_i (grad f_j - A_j x)_i / (v_i - u_i))] <= 0.
SymmetricMatrix p2_certificate_matrix(const ProblemInstance& p, std::span<const double> x,
                                      const MultiplierVector& lambda, const Tolerances& tol = {});
CertificateResult certify_p2_matrix(const ProblemInstance& p, std::span<const double> x,
                                    const MultiplierVector& lambda, const Tolerances& tol = {});

struct ScEstimate {
  /// Smallest sampled value of grad L(x, lambda)^T (y - x) / ||y - x||^2; an
  /// upper bound on the true infimum. +infinity when no other feasible point
  /// was found.
  double estimate = 0.0;
  std::optional<Vector> argmin;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kDefaultScBudget = 40000;

ScEstimate estimate_sc_infimum(const ProblemInstance& p, std::span<const double> x,
                               const MultiplierVector& lambda,
                               std::size_t budget = kDefaultScBudget, const Tolerances& tol = {});

/// Refutation-only: NotCertified when sum_j lambda_j mu_j < -estimate - tol,
/// Inconclusive otherwise.
CertificateResult certify_p2_sc(const ProblemInstance& p, std::span<const double> x,
                                const MultiplierVector& lambda,
                                std::size_t budget = kDefaultScBudget, const Tolerances& tol = {});

struct ImplicationAudit {
  CertificateResult sc;
  CertificateResult sc1rc;
  CertificateResult sc2rc;
  /// Set when SC1RC is Certified while SC2RC is NotCertified.
  bool inconsistent = false;
};

ImplicationAudit implication_audit(const ProblemInstance& p, std::span<const double> x,
                                   const MultiplierVector& lambda,
                                   std::size_t budget = kDefaultScBudget,
                                   const Tolerances& tol = {});

/// Classification with the tolerance psd_relative * (1 + ||M||_F).
SpectralVerdict classify_with(const SymmetricMatrix& M, const Tolerances& tol);

}  // namespace gcert
