#pragma once

#include <span>
#include <vector>

#include "gcert/certify.hpp"
#include "gcert/model.hpp"
#include "gcert/tolerances.hpp"

namespace gcert {

/// Sign of each denominator over the feasible box, index 0 the objective.
struct XiVector {
  std::vector<int> signs;
};

/// Throws SignIndefiniteDenominator when a denominator is not sign-definite or
/// the objective denominator is not positive.
XiVector xi_signs(const ProblemInstance& p);

/// Quadratic surrogate of a fractional program anchored at a candidate x:
/// Q_j = xi_j (A_j - e_j B_j), q_j = xi_j (a_j - e_j b_j), r_j = xi_j (c_j - e_j d_j)
/// with e_0 = s(x). Valid only at its anchor.
struct SurrogateQP {
  ProblemInstance base;
  Vector anchor;
  double e0 = 0.0;
  /// den_0(anchor)
  double c_scalar = 1.0;
  XiVector xi;
};

/// Throws NumericalFailure if the surrogate objective does not vanish at x.
SurrogateQP reformulate(const ProblemInstance& p, std::span<const double> x,
                        const Tolerances& tol = {});

/// mu_j = c * lambda_j / |den_j(x)| with c = den_0(x).
MultiplierVector transform_multipliers(const ProblemInstance& p, std::span<const double> x,
                                       const MultiplierVector& lambda);

/// sum_j (lambda_j / den_j(x)) {[A_j - diag(N)] - e_j [B_j - diag(D)]} with
/// lambda_0 = 1, e_0 = s(x), N_i = 2 chit_i (A_j x + a_j)_i / (v_i - u_i) and
/// D_i = 2 chit_i (B_j x + b_j)_i / (v_i - u_i).
SymmetricMatrix p3_certificate_matrix(const ProblemInstance& p, std::span<const double> x,
                                      const MultiplierVector& lambda, const Tolerances& tol = {});

/// Certified when the matrix above is PSD.
CertificateResult certify_p3(const ProblemInstance& p, std::span<const double> x,
                             const MultiplierVector& lambda, const Tolerances& tol = {});

}  // namespace gcert
