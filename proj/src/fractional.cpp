#include "gcert/fractional.hpp"

#include <cmath>
#include <limits>

#include "gcert/errors.hpp"
#include "gcert/kkt.hpp"

namespace gcert {

XiVector xi_signs(const ProblemInstance& p) {
  return XiVector{denominator_signs(p.box(), p.fractional())};
}

namespace {

QuadraticFunction surrogate_function(const FractionalConstraint& fc, double e, int xi) {
  const double s = static_cast<double>(xi);
  SymmetricMatrix Q = s * (fc.num.A - e * fc.den.A);
  Vector q = fc.num.a;
  vec::axpy(-e, fc.den.a, q);
  for (double& v : q) v *= s;
  return QuadraticFunction(std::move(Q), std::move(q), s * (fc.num.c - e * fc.den.c));
}

}  // namespace

SurrogateQP reformulate(const ProblemInstance& p, std::span<const double> x,
                        const Tolerances& tol) {
  const auto& prog = p.fractional();
  if (!feasibility(p, x, tol).feasible) {
    throw ContractError("reformulate: candidate is not feasible");
  }
  XiVector xi = xi_signs(p);
  const double den0 = prog.objective.den.value(x);
  const double e0 = prog.objective.ratio(x);

  QuadraticProgram qp;
  qp.objective = surrogate_function(prog.objective, e0, 1);
  for (std::size_t j = 0; j < prog.constraints.size(); ++j) {
    qp.constraints.push_back(surrogate_function(prog.constraints[j], prog.constraints[j].bound,
                                                xi.signs[j + 1]));
  }
  const double h0 = qp.objective.value(x);
  const double scale = 1.0 + std::abs(prog.objective.num.value(x)) + std::abs(e0 * den0);
  if (std::abs(h0) > 1e-10 * scale) {
    throw NumericalFailure("surrogate objective does not vanish at the anchor (" +
                           std::to_string(h0) + ")");
  }
  return SurrogateQP{ProblemInstance(p.box(), std::move(qp)), Vector(x.begin(), x.end()), e0,
                     den0, std::move(xi)};
}

MultiplierVector transform_multipliers(const ProblemInstance& p, std::span<const double> x,
                                       const MultiplierVector& lambda) {
  const auto terms = gradient_terms(p, x);
  p.fractional();
  if (lambda.size() + 1 != terms.denominators.size()) {
    throw DimensionMismatch("multiplier vector", terms.denominators.size() - 1, lambda.size());
  }
  Vector mu(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    mu[j] = terms.c_scalar * lambda[j] / std::abs(terms.denominators[j + 1]);
  }
  return MultiplierVector(std::move(mu), std::numeric_limits<double>::infinity());
}

SymmetricMatrix p3_certificate_matrix(const ProblemInstance& p, std::span<const double> x,
                                      const MultiplierVector& lambda, const Tolerances& tol) {
  const auto& prog = p.fractional();
  const auto terms = gradient_terms(p, x);
  const ChiVector c = chi(p, x, lambda, tol);
  const std::size_t n = p.dim();
  SymmetricMatrix M(n);
  for (std::size_t j = 0; j <= prog.constraints.size(); ++j) {
    const double lam = lambda.weight(j);
    if (lam == 0.0) continue;
    const FractionalConstraint& fc = j == 0 ? prog.objective : prog.constraints[j - 1];
    const double e = j == 0 ? terms.objective_ratio : fc.bound;
    const Vector gn = fc.num.gradient(x);
    const Vector gd = fc.den.gradient(x);
    SymmetricMatrix num_part = fc.num.A;
    SymmetricMatrix den_part = fc.den.A;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = p.box()[i].width();
      num_part.add_to(i, i, -2.0 * c.values[i] * gn[i] / w);
      den_part.add_to(i, i, -2.0 * c.values[i] * gd[i] / w);
    }
    M += (lam / terms.denominators[j]) * (num_part - e * den_part);
  }
  return M;
}

CertificateResult certify_p3(const ProblemInstance& p, std::span<const double> x,
                             const MultiplierVector& lambda, const Tolerances& tol) {
  p.fractional();
  require_kkt_pair(p, x, lambda, tol);
  CertificateResult r;
  r.kind = CertificateKind::GSC;
  r.lambda_used = lambda;
  r.witness = p3_certificate_matrix(p, x, lambda, tol);
  r.spectrum = classify_with(*r.witness, tol);
  r.verdict = r.spectrum->is_psd() ? Verdict::Certified : Verdict::NotCertified;
  return r;
}

}  // namespace gcert
