#include "gcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcert/errors.hpp"

namespace gcert {

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::SCQP: return "SCQP";
    case CertificateKind::SC1QP: return "SC1QP";
    case CertificateKind::SC: return "SC";
    case CertificateKind::SC1RC: return "SC1RC";
    case CertificateKind::SC2RC: return "SC2RC";
    case CertificateKind::GSC: return "GSC";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::CertifiedUnique: return "CertifiedUnique";
    case Verdict::NotCertified: return "NotCertified";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

SpectralVerdict classify_with(const SymmetricMatrix& M, const Tolerances& tol) {
  return classify(M, default_definiteness_tol(M, tol.psd_relative));
}

namespace {

const SymmetricMatrix& curvature(const ProblemInstance& p, std::size_t j) {
  if (p.kind() == ProblemKind::Quadratic) {
    const auto& q = p.quadratic();
    return j == 0 ? q.objective.A : q.constraints[j - 1].A;
  }
  const auto& r = p.rho_convex();
  return j == 0 ? r.objective.A : r.constraints[j - 1].A;
}

/// sum_j lambda_j [A_j + sign * diag(2 chi_i T_ji / w_i)]
SymmetricMatrix corrected_matrix(const ProblemInstance& p, std::span<const double> x,
                                 const MultiplierVector& lambda, double sign,
                                 const Tolerances& tol) {
  const auto terms = gradient_terms(p, x);
  const ChiVector c = chi(p, x, lambda, tol);
  const std::size_t n = p.dim();
  SymmetricMatrix M(n);
  for (std::size_t j = 0; j < terms.rows.size(); ++j) {
    const double w = lambda.weight(j);
    if (w == 0.0) continue;
    SymmetricMatrix term = curvature(p, j);
    for (std::size_t i = 0; i < n; ++i) {
      term.add_to(i, i, sign * 2.0 * c.values[i] * terms.rows[j][i] / p.box()[i].width());
    }
    M += w * term;
  }
  return M;
}

}  // namespace

SymmetricMatrix p1_certificate_matrix(const ProblemInstance& p, std::span<const double> x,
                                      const MultiplierVector& lambda, const Tolerances& tol) {
  p.quadratic();
  return corrected_matrix(p, x, lambda, -1.0, tol);
}

CertificateResult certify_p1(const ProblemInstance& p, std::span<const double> x,
                             const MultiplierVector& lambda, const Tolerances& tol) {
  p.quadratic();
  require_kkt_pair(p, x, lambda, tol);
  CertificateResult r;
  r.lambda_used = lambda;
  r.witness = p1_certificate_matrix(p, x, lambda, tol);
  r.spectrum = classify_with(*r.witness, tol);
  if (r.spectrum->is_pd()) {
    r.kind = CertificateKind::SC1QP;
    r.verdict = Verdict::CertifiedUnique;
  } else if (r.spectrum->is_psd()) {
    r.kind = CertificateKind::SCQP;
    r.verdict = Verdict::Certified;
  } else {
    r.kind = CertificateKind::SCQP;
    r.verdict = Verdict::NotCertified;
  }
  return r;
}

CertificateResult certify_p2_eig(const ProblemInstance& p, std::span<const double> x,
                                 const MultiplierVector& lambda, const Tolerances& tol) {
  p.rho_convex();
  require_kkt_pair(p, x, lambda, tol);
  const auto terms = gradient_terms(p, x);
  const ChiVector c = chi(p, x, lambda, tol);
  CertificateResult r;
  r.kind = CertificateKind::SC1RC;
  r.lambda_used = lambda;
  for (std::size_t j = 0; j < terms.rows.size(); ++j) {
    const double w = lambda.weight(j);
    if (w == 0.0) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      s += c.values[i] * terms.rows[j][i] / p.box()[i].width();
    }
    r.lhs += w * s;
    r.rhs += w * mu_first_eigenvalue(curvature(p, j));
  }
  const double t = tol.psd_relative * (1.0 + std::abs(r.lhs) + std::abs(r.rhs));
  r.verdict = r.lhs <= r.rhs + t ? Verdict::Certified : Verdict::NotCertified;
  return r;
}

SymmetricMatrix p2_certificate_matrix(const ProblemInstance& p, std::span<const double> x,
                                      const MultiplierVector& lambda, const Tolerances& tol) {
  p.rho_convex();
  return corrected_matrix(p, x, lambda, +1.0, tol);
}

CertificateResult certify_p2_matrix(const ProblemInstance& p, std::span<const double> x,
                                    const MultiplierVector& lambda, const Tolerances& tol) {
  p.rho_convex();
  require_kkt_pair(p, x, lambda, tol);
  CertificateResult r;
  r.kind = CertificateKind::SC2RC;
  r.lambda_used = lambda;
  r.witness = p2_certificate_matrix(p, x, lambda, tol);
  r.spectrum = classify_with(*r.witness, tol);
  r.verdict = r.spectrum->is_nsd() ? Verdict::Certified : Verdict::NotCertified;
  return r;
}

ScEstimate estimate_sc_infimum(const ProblemInstance& p, std::span<const double> x,
                               const MultiplierVector& lambda, std::size_t budget,
                               const Tolerances& tol) {
  if (!feasibility(p, x, tol).feasible) {
    throw ContractError("estimate_sc_infimum: candidate is not feasible");
  }
  const Vector g = lagrangian_gradient(p, x, lambda);
  const std::size_t n = p.dim();
  ScEstimate est;
  est.estimate = std::numeric_limits<double>::infinity();

  auto quotient = [&](std::span<const double> y) -> std::optional<double> {
    ++est.evaluations;
    const Vector d = vec::sub(y, x);
    const double dd = vec::dot(d, d);
    if (dd <= 1e-24) return std::nullopt;
    if (!feasibility(p, y, tol).feasible) return std::nullopt;
    return vec::dot(g, d) / dd;
  };
  auto consider = [&](std::span<const double> y) {
    if (auto q = quotient(y); q && *q < est.estimate) {
      est.estimate = *q;
      est.argmin = Vector(y.begin(), y.end());
    }
  };

  const auto cont = p.box().continuous_indices();
  const double discrete_count = std::pow(2.0, static_cast<double>(n - cont.size()));
  std::size_t per_axis = 3;
  if (!cont.empty()) {
    const double share = std::max(1.0, static_cast<double>(budget) / 2.0 / discrete_count);
    per_axis = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::floor(std::pow(share, 1.0 / cont.size()))));
  }
  const auto axes = grid_axes(p.box(), per_axis);
  for_each_grid_point(axes, [&](std::span<const double> y) {
    consider(y);
    return true;
  });

  if (est.argmin && !cont.empty()) {
    // Compass search on the continuous coordinates around the best sample.
    Vector best = *est.argmin;
    std::vector<double> step(n, 0.0);
    for (std::size_t i : cont) step[i] = p.box()[i].width() / static_cast<double>(per_axis - 1);
    while (est.evaluations < budget) {
      bool improved = false;
      for (std::size_t i : cont) {
        for (double dir : {-1.0, 1.0}) {
          Vector y = best;
          y[i] = std::clamp(y[i] + dir * step[i], p.box()[i].lower, p.box()[i].upper);
          const double before = est.estimate;
          consider(y);
          if (est.estimate < before) {
            best = y;
            improved = true;
          }
        }
      }
      if (!improved) {
        double largest = 0.0;
        for (std::size_t i : cont) {
          step[i] *= 0.5;
          largest = std::max(largest, step[i] / p.box()[i].width());
        }
        if (largest < 1e-9) break;
      }
    }
  }
  return est;
}

CertificateResult certify_p2_sc(const ProblemInstance& p, std::span<const double> x,
                                const MultiplierVector& lambda, std::size_t budget,
                                const Tolerances& tol) {
  p.rho_convex();
  if (lambda.size() != p.num_constraints()) {
    throw DimensionMismatch("multiplier vector", p.num_constraints(), lambda.size());
  }
  const ScEstimate est = estimate_sc_infimum(p, x, lambda, budget, tol);
  CertificateResult r;
  r.kind = CertificateKind::SC;
  r.lambda_used = lambda;
  for (std::size_t j = 0; j <= p.num_constraints(); ++j) {
    const double w = lambda.weight(j);
    if (w != 0.0) r.lhs += w * mu_first_eigenvalue(curvature(p, j));
  }
  r.rhs = -est.estimate;
  r.sample_argmin = est.argmin;
  const double t = tol.psd_relative * (1.0 + std::abs(r.lhs) + std::abs(est.estimate));
  r.verdict = std::isfinite(est.estimate) && r.lhs < r.rhs - t ? Verdict::NotCertified
                                                                 : Verdict::Inconclusive;
  return r;
}

ImplicationAudit implication_audit(const ProblemInstance& p, std::span<const double> x,
                                   const MultiplierVector& lambda, std::size_t budget,
                                   const Tolerances& tol) {
  ImplicationAudit a;
  a.sc1rc = certify_p2_eig(p, x, lambda, tol);
  a.sc2rc = certify_p2_matrix(p, x, lambda, tol);
  a.sc = certify_p2_sc(p, x, lambda, budget, tol);
  a.inconsistent =
      a.sc1rc.verdict == Verdict::Certified && a.sc2rc.verdict == Verdict::NotCertified;
  return a;
}

}  // namespace gcert
