#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gcert/kkt.hpp"
#include "gcert/model.hpp"

namespace gcert::testgen {

using Rng = std::mt19937_64;

inline double uni(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline bool coin(Rng& rng, double p) { return uni(rng, 0.0, 1.0) < p; }

inline Vector random_vector(Rng& rng, std::size_t n, double scale) {
  Vector v(n);
  for (double& x : v) x = uni(rng, -scale, scale);
  return v;
}

inline SymmetricMatrix random_symmetric(Rng& rng, std::size_t n, double scale) {
  SymmetricMatrix M(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) M.set(i, j, uni(rng, -scale, scale));
  }
  return M;
}

/// G^T G / n with G random, hence PSD.
inline SymmetricMatrix random_psd(Rng& rng, std::size_t n, double scale) {
  std::vector<Vector> g(n, Vector(n));
  for (auto& row : g) row = random_vector(rng, n, scale);
  SymmetricMatrix M(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[k][i] * g[k][j];
      M.set(i, j, s / static_cast<double>(n));
    }
  }
  return M;
}

inline MixedBox random_box(Rng& rng, std::size_t n, double discrete_share = 0.35) {
  std::vector<VariableDomain> d(n);
  for (auto& v : d) {
    v.lower = uni(rng, -2.0, 0.5);
    v.upper = v.lower + uni(rng, 0.5, 3.0);
    v.kind = coin(rng, discrete_share) ? DomainKind::Discrete : DomainKind::Continuous;
  }
  return MixedBox(d);
}

/// Candidate with a mix of lower-bound, upper-bound and interior coordinates.
inline Vector random_anchor(Rng& rng, const MixedBox& box) {
  Vector x(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const auto& d = box[i];
    const double r = uni(rng, 0.0, 1.0);
    if (d.kind == DomainKind::Discrete) {
      x[i] = r < 0.5 ? d.lower : d.upper;
    } else if (r < 0.4) {
      x[i] = d.lower;
    } else if (r < 0.7) {
      x[i] = d.upper;
    } else {
      x[i] = d.lower + d.width() * uni(rng, 0.15, 0.85);
    }
  }
  return x;
}

/// Desired Lagrangian gradient at the anchor: zero at interior continuous
/// coordinates, sign-correct at bounds, arbitrary at discrete coordinates.
inline Vector target_gradient(Rng& rng, const MixedBox& box, const Vector& x) {
  Vector g(box.dim());
  const Tolerances tol;
  const auto prov = coordinate_provenance(box, x, tol);
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box[i].kind == DomainKind::Discrete) {
      g[i] = uni(rng, -2.0, 2.0);
    } else if (prov[i] == Provenance::Interior) {
      g[i] = 0.0;
    } else {
      const double mag = coin(rng, 0.25) ? 0.0 : uni(rng, 0.0, 2.0);
      g[i] = prov[i] == Provenance::AtLower ? mag : -mag;
    }
  }
  return g;
}

struct Planted {
  ProblemInstance instance;
  Vector x;
  MultiplierVector lambda;
};

/// Chooses which constraints are active and their multipliers.
inline void choose_activity(Rng& rng, std::size_t m, std::vector<bool>& active, Vector& lambda) {
  active.assign(m, false);
  lambda.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    active[j] = coin(rng, 0.65);
    if (active[j]) lambda[j] = coin(rng, 0.2) ? 0.0 : uni(rng, 0.0, 3.0);
  }
}

inline Planted plant_quadratic(Rng& rng, std::size_t n, std::size_t m) {
  MixedBox box = random_box(rng, n);
  const Vector x = random_anchor(rng, box);
  std::vector<bool> active;
  Vector lambda;
  choose_activity(rng, m, active, lambda);

  QuadraticProgram qp;
  Vector g = target_gradient(rng, box, x);
  for (std::size_t j = 0; j < m; ++j) {
    QuadraticFunction q(random_symmetric(rng, n, 2.0), random_vector(rng, n, 2.0), 0.0);
    const double v = q.value(x);
    q.c = -v - (active[j] ? 0.0 : uni(rng, 0.1, 2.0));
    vec::axpy(-lambda[j], q.gradient(x), g);
    qp.constraints.push_back(std::move(q));
  }
  SymmetricMatrix A0 = random_symmetric(rng, n, 2.0);
  Vector a0 = vec::sub(g, A0.multiply(x));
  qp.objective = QuadraticFunction(std::move(A0), std::move(a0), uni(rng, -1.0, 1.0));
  return Planted{ProblemInstance(std::move(box), std::move(qp)), x, MultiplierVector(lambda)};
}

inline ConvexSmoothFunction random_convex(Rng& rng, std::size_t n) {
  QuadraticFunction base(random_psd(rng, n, 1.0), random_vector(rng, n, 2.0), 0.0);
  std::vector<PowerTerm> terms;
  const int count = static_cast<int>(uni(rng, 0.0, 2.99));
  for (int k = 0; k < count; ++k) {
    PowerTerm t;
    t.coeff = uni(rng, 0.0, 0.5);
    t.w = random_vector(rng, n, 1.0);
    t.offset = uni(rng, -1.0, 1.0);
    t.exponent = coin(rng, 0.5) ? 2 : 4;
    terms.push_back(std::move(t));
  }
  return ConvexSmoothFunction(std::move(base), std::move(terms));
}

inline Planted plant_rho_convex(Rng& rng, std::size_t n, std::size_t m) {
  MixedBox box = random_box(rng, n);
  const Vector x = random_anchor(rng, box);
  std::vector<bool> active;
  Vector lambda;
  choose_activity(rng, m, active, lambda);

  RhoConvexProgram rp;
  Vector g = target_gradient(rng, box, x);
  for (std::size_t j = 0; j < m; ++j) {
    RhoConvexFunction r(random_convex(rng, n), random_symmetric(rng, n, 2.0));
    const double v = r.value(x);
    r.f.base.c = -v - (active[j] ? 0.0 : uni(rng, 0.1, 2.0));
    vec::axpy(-lambda[j], r.gradient(x), g);
    rp.constraints.push_back(std::move(r));
  }
  RhoConvexFunction obj(random_convex(rng, n), random_symmetric(rng, n, 2.0));
  const Vector shift = vec::sub(g, obj.gradient(x));
  vec::axpy(1.0, shift, obj.f.base.a);
  rp.objective = std::move(obj);
  return Planted{ProblemInstance(std::move(box), std::move(rp)), x, MultiplierVector(lambda)};
}

/// Denominator sign * (1/2 x^T B x + b^T x + d) with B PSD and d large enough
/// that the bracket is at least 0.5 on the box.
inline QuadraticFunction random_denominator(Rng& rng, const MixedBox& box, int sign) {
  const std::size_t n = box.dim();
  SymmetricMatrix B = random_psd(rng, n, 0.8);
  Vector b = random_vector(rng, n, 0.5);
  double d = uni(rng, 0.5, 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    d += std::abs(b[i]) * std::max(std::abs(box[i].lower), std::abs(box[i].upper));
  }
  const double s = static_cast<double>(sign);
  return QuadraticFunction(s * B, vec::scaled(b, s), s * d);
}

inline Planted plant_fractional(Rng& rng, std::size_t n, std::size_t m) {
  MixedBox box = random_box(rng, n);
  const Vector x = random_anchor(rng, box);
  std::vector<bool> active;
  Vector lambda;
  choose_activity(rng, m, active, lambda);

  FractionalProgram fp;
  Vector g = target_gradient(rng, box, x);
  for (std::size_t j = 0; j < m; ++j) {
    FractionalConstraint fc(
        QuadraticFunction(random_symmetric(rng, n, 2.0), random_vector(rng, n, 2.0),
                          uni(rng, -1.0, 1.0)),
        random_denominator(rng, box, coin(rng, 0.3) ? -1 : 1));
    const double ratio = fc.ratio(x);
    fc.bound = ratio + (active[j] ? 0.0 : uni(rng, 0.1, 1.0));
    const double den = fc.den.value(x);
    Vector t = fc.num.gradient(x);
    vec::axpy(-fc.bound, fc.den.gradient(x), t);
    vec::axpy(-lambda[j] / den, t, g);
    fp.constraints.push_back(std::move(fc));
  }
  QuadraticFunction den0 = random_denominator(rng, box, 1);
  const double d0 = den0.value(x);
  const double s = uni(rng, -2.0, 2.0);
  SymmetricMatrix A0 = random_symmetric(rng, n, 2.0);
  // (A0 x + a0 - s (B0 x + b0)) / d0 = g  and  num0(x) = s d0
  Vector a0 = vec::scaled(g, d0);
  vec::axpy(-1.0, A0.multiply(x), a0);
  vec::axpy(s, den0.gradient(x), a0);
  const double c0 = s * d0 - (0.5 * A0.quadratic_form(x) + vec::dot(a0, x));
  fp.objective = FractionalConstraint(QuadraticFunction(std::move(A0), std::move(a0), c0),
                                      std::move(den0));
  return Planted{ProblemInstance(std::move(box), std::move(fp)), x, MultiplierVector(lambda)};
}

inline Planted plant(Rng& rng, ProblemKind kind, std::size_t n, std::size_t m) {
  switch (kind) {
    case ProblemKind::Quadratic: return plant_quadratic(rng, n, m);
    case ProblemKind::RhoConvex: return plant_rho_convex(rng, n, m);
    case ProblemKind::Fractional: return plant_fractional(rng, n, m);
  }
  return plant_quadratic(rng, n, m);
}

/// Uniform random point of the box (discrete coordinates at a random bound).
inline Vector random_box_point(Rng& rng, const MixedBox& box) {
  Vector x(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const auto& d = box[i];
    x[i] = d.kind == DomainKind::Discrete ? (coin(rng, 0.5) ? d.lower : d.upper)
                                          : uni(rng, d.lower, d.upper);
  }
  return x;
}

}  // namespace gcert::testgen
