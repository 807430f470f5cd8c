#include "gcert/model.hpp"

#include <algorithm>
#include <cmath>

#include "gcert/errors.hpp"
#include "gcert/spectral.hpp"

namespace gcert {

QuadraticFunction::QuadraticFunction(SymmetricMatrix A_, Vector a_, double c_)
    : A(std::move(A_)), a(std::move(a_)), c(c_) {
  if (A.dim() != a.size()) throw DimensionMismatch("QuadraticFunction", A.dim(), a.size());
}

QuadraticFunction QuadraticFunction::zero(std::size_t n) {
  return QuadraticFunction(SymmetricMatrix(n), Vector(n, 0.0), 0.0);
}

double QuadraticFunction::value(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionMismatch("eval_quadratic", dim(), x.size());
  return 0.5 * A.quadratic_form(x) + vec::dot(a, x) + c;
}

Vector QuadraticFunction::gradient(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionMismatch("grad_quadratic", dim(), x.size());
  Vector g = A.multiply(x);
  vec::axpy(1.0, a, g);
  return g;
}

ConvexSmoothFunction::ConvexSmoothFunction(QuadraticFunction base_, std::vector<PowerTerm> terms)
    : base(std::move(base_)), power_terms(std::move(terms)) {
  for (const auto& t : power_terms) {
    if (t.w.size() != base.dim()) throw DimensionMismatch("PowerTerm", base.dim(), t.w.size());
    if (!(t.coeff >= 0.0)) throw ValidationError("power term coefficient must be >= 0");
    if (t.exponent < 2 || t.exponent % 2 != 0) {
      throw ValidationError("power term exponent must be even and >= 2");
    }
  }
  if (!classify(base.A).is_psd()) {
    throw ValidationError("base quadratic of a convex function must be positive semidefinite");
  }
}

double ConvexSmoothFunction::value(std::span<const double> x) const {
  double v = base.value(x);
  for (const auto& t : power_terms) {
    v += t.coeff * std::pow(vec::dot(t.w, x) + t.offset, t.exponent);
  }
  return v;
}

Vector ConvexSmoothFunction::gradient(std::span<const double> x) const {
  Vector g = base.gradient(x);
  for (const auto& t : power_terms) {
    const double s = vec::dot(t.w, x) + t.offset;
    vec::axpy(t.coeff * t.exponent * std::pow(s, t.exponent - 1), t.w, g);
  }
  return g;
}

RhoConvexFunction::RhoConvexFunction(ConvexSmoothFunction f_, SymmetricMatrix A_)
    : f(std::move(f_)), A(std::move(A_)) {
  if (f.dim() != A.dim()) throw DimensionMismatch("RhoConvexFunction", f.dim(), A.dim());
}

double RhoConvexFunction::value(std::span<const double> x) const {
  return f.value(x) - 0.5 * A.quadratic_form(x);
}

Vector RhoConvexFunction::gradient(std::span<const double> x) const {
  Vector g = f.gradient(x);
  vec::axpy(-1.0, A.multiply(x), g);
  return g;
}

FractionalConstraint::FractionalConstraint(QuadraticFunction num_, QuadraticFunction den_,
                                           double bound_)
    : num(std::move(num_)), den(std::move(den_)), bound(bound_) {
  if (num.dim() != den.dim()) throw DimensionMismatch("FractionalConstraint", num.dim(), den.dim());
}

double FractionalConstraint::ratio(std::span<const double> x) const {
  const double d = den.value(x);
  if (std::abs(d) <= kDenominatorFloor) throw DenominatorVanishes(Vector(x.begin(), x.end()), d);
  return num.value(x) / d;
}

Vector FractionalConstraint::ratio_gradient(std::span<const double> x) const {
  const double d = den.value(x);
  if (std::abs(d) <= kDenominatorFloor) throw DenominatorVanishes(Vector(x.begin(), x.end()), d);
  const double r = num.value(x) / d;
  Vector g = num.gradient(x);
  vec::axpy(-r, den.gradient(x), g);
  for (double& v : g) v /= d;
  return g;
}

MixedBox::MixedBox(std::vector<VariableDomain> domains, const Tolerances& tol)
    : domains_(std::move(domains)) {
  if (domains_.empty()) throw ValidationError("problem must have at least one variable");
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    const auto& d = domains_[i];
    if (!(d.lower < d.upper)) {
      throw ValidationError("variable " + std::to_string(i) + ": lower bound must be < upper bound");
    }
    if (d.upper - d.lower <= 100.0 * tol.snap) {
      throw ValidationError("variable " + std::to_string(i) + ": bounds closer than 100 * snap");
    }
  }
}

std::vector<std::size_t> MixedBox::continuous_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    if (domains_[i].kind == DomainKind::Continuous) idx.push_back(i);
  }
  return idx;
}

std::vector<std::size_t> MixedBox::discrete_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    if (domains_[i].kind == DomainKind::Discrete) idx.push_back(i);
  }
  return idx;
}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Quadratic: return "quadratic";
    case ProblemKind::RhoConvex: return "rho_convex";
    case ProblemKind::Fractional: return "fractional";
  }
  return "unknown";
}

namespace {

template <class F>
void check_dims(const F& f, std::size_t n, const char* what) {
  if (f.dim() != n) throw DimensionMismatch(what, n, f.dim());
}

}  // namespace

ProblemInstance::ProblemInstance(MixedBox box, Program program)
    : box_(std::move(box)), program_(std::move(program)) {
  const std::size_t n = box_.dim();
  std::visit(
      [n](const auto& prog) {
        check_dims(prog.objective, n, "objective");
        for (const auto& c : prog.constraints) check_dims(c, n, "constraint");
      },
      program_);
  if (const auto* fp = std::get_if<FractionalProgram>(&program_)) {
    denominator_signs(box_, *fp);
  }
}

ProblemKind ProblemInstance::kind() const {
  switch (program_.index()) {
    case 0: return ProblemKind::Quadratic;
    case 1: return ProblemKind::RhoConvex;
    default: return ProblemKind::Fractional;
  }
}

std::size_t ProblemInstance::num_constraints() const {
  return std::visit([](const auto& prog) { return prog.constraints.size(); }, program_);
}

const QuadraticProgram& ProblemInstance::quadratic() const {
  if (const auto* p = std::get_if<QuadraticProgram>(&program_)) return *p;
  throw WrongKind("expected a quadratic instance, got " + to_string(kind()));
}

const RhoConvexProgram& ProblemInstance::rho_convex() const {
  if (const auto* p = std::get_if<RhoConvexProgram>(&program_)) return *p;
  throw WrongKind("expected a rho_convex instance, got " + to_string(kind()));
}

const FractionalProgram& ProblemInstance::fractional() const {
  if (const auto* p = std::get_if<FractionalProgram>(&program_)) return *p;
  throw WrongKind("expected a fractional instance, got " + to_string(kind()));
}

double ProblemInstance::objective_value(std::span<const double> x) const {
  return std::visit(
      [x](const auto& prog) -> double {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, FractionalProgram>) {
          return prog.objective.ratio(x);
        } else {
          return prog.objective.value(x);
        }
      },
      program_);
}

Vector ProblemInstance::objective_gradient(std::span<const double> x) const {
  return std::visit(
      [x](const auto& prog) -> Vector {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, FractionalProgram>) {
          return prog.objective.ratio_gradient(x);
        } else {
          return prog.objective.gradient(x);
        }
      },
      program_);
}

double ProblemInstance::constraint_value(std::size_t j, std::span<const double> x) const {
  return std::visit(
      [j, x](const auto& prog) -> double {
        using T = std::decay_t<decltype(prog)>;
        const auto& c = prog.constraints.at(j);
        if constexpr (std::is_same_v<T, FractionalProgram>) {
          return c.ratio(x) - c.bound;
        } else {
          return c.value(x);
        }
      },
      program_);
}

Vector ProblemInstance::constraint_gradient(std::size_t j, std::span<const double> x) const {
  return std::visit(
      [j, x](const auto& prog) -> Vector {
        using T = std::decay_t<decltype(prog)>;
        const auto& c = prog.constraints.at(j);
        if constexpr (std::is_same_v<T, FractionalProgram>) {
          return c.ratio_gradient(x);
        } else {
          return c.gradient(x);
        }
      },
      program_);
}

MultiplierVector::MultiplierVector(Vector l, double tol) : lambdas(std::move(l)) {
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] >= -tol)) {
      throw ValidationError("multiplier " + std::to_string(j + 1) + " is negative");
    }
  }
}

double eval_quadratic(const QuadraticFunction& q, std::span<const double> x) { return q.value(x); }
Vector grad_quadratic(const QuadraticFunction& q, std::span<const double> x) {
  return q.gradient(x);
}
double eval_convex(const ConvexSmoothFunction& f, std::span<const double> x) { return f.value(x); }
Vector grad_convex(const ConvexSmoothFunction& f, std::span<const double> x) {
  return f.gradient(x);
}
double eval_fractional(const FractionalConstraint& fc, std::span<const double> x) {
  return fc.ratio(x);
}

FeasibilityReport feasibility(const ProblemInstance& p, std::span<const double> x,
                              const Tolerances& tol) {
  if (x.size() != p.dim()) throw DimensionMismatch("feasibility", p.dim(), x.size());
  FeasibilityReport r;
  r.coordinates.resize(x.size(), CoordinateStatus::Inside);
  r.in_box = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& d = p.box()[i];
    const double below = d.lower - x[i];
    const double above = x[i] - d.upper;
    if (below > tol.snap || above > tol.snap || !std::isfinite(x[i])) {
      r.coordinates[i] = CoordinateStatus::OutOfBox;
      r.in_box = false;
      r.worst_violation = std::max({r.worst_violation, below, above});
      continue;
    }
    if (d.kind == DomainKind::Discrete) {
      const double dist = std::min(std::abs(x[i] - d.lower), std::abs(x[i] - d.upper));
      if (dist > tol.snap) {
        r.coordinates[i] = CoordinateStatus::DiscreteViolation;
        r.in_box = false;
        r.worst_violation = std::max(r.worst_violation, dist);
      }
    }
  }
  r.constraints_satisfied = true;
  r.constraint_values.resize(p.num_constraints());
  for (std::size_t j = 0; j < p.num_constraints(); ++j) {
    const double v = p.constraint_value(j, x);
    r.constraint_values[j] = v;
    if (v > tol.feasibility) {
      r.constraints_satisfied = false;
      r.worst_violation = std::max(r.worst_violation, v);
    }
  }
  r.feasible = r.in_box && r.constraints_satisfied;
  return r;
}

std::vector<Vector> grid_axes(const MixedBox& box, std::size_t points_per_axis) {
  if (points_per_axis < 2) throw ValidationError("grid needs at least 2 points per axis");
  std::vector<Vector> axes;
  axes.reserve(box.dim());
  for (const auto& d : box.domains()) {
    if (d.kind == DomainKind::Discrete) {
      axes.push_back({d.lower, d.upper});
      continue;
    }
    Vector ax(points_per_axis);
    const double span = d.upper - d.lower;
    const double last = static_cast<double>(points_per_axis - 1);
    for (std::size_t k = 0; k < points_per_axis; ++k) {
      ax[k] = d.lower + span * (static_cast<double>(k) / last);
    }
    ax.back() = d.upper;
    axes.push_back(std::move(ax));
  }
  return axes;
}

void for_each_grid_point(const std::vector<Vector>& axes,
                         const std::function<bool(std::span<const double>)>& fn) {
  const std::size_t n = axes.size();
  for (const auto& ax : axes) {
    if (ax.empty()) return;
  }
  std::vector<std::size_t> idx(n, 0);
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = axes[i][0];
  while (true) {
    if (!fn(x)) return;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].size()) {
        x[k] = axes[k][idx[k]];
        break;
      }
      idx[k] = 0;
      x[k] = axes[k][0];
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

std::vector<int> denominator_signs(const MixedBox& box, const FractionalProgram& prog) {
  const std::size_t n_cont = box.continuous_indices().size();
  const std::size_t n_disc = box.dim() - n_cont;
  constexpr double kBudget = 2e6;
  std::size_t per_axis = 17;
  while (per_axis > 3 &&
         std::pow(2.0, static_cast<double>(n_disc)) *
                 std::pow(static_cast<double>(per_axis), static_cast<double>(n_cont)) >
             kBudget) {
    per_axis -= 2;
  }
  const auto axes = grid_axes(box, per_axis);

  std::vector<const QuadraticFunction*> dens;
  dens.push_back(&prog.objective.den);
  for (const auto& c : prog.constraints) dens.push_back(&c.den);

  std::vector<int> signs(dens.size(), 0);
  Vector first_point;
  for_each_grid_point(axes, [&](std::span<const double> x) {
    for (std::size_t j = 0; j < dens.size(); ++j) {
      const double d = dens[j]->value(x);
      if (std::abs(d) <= FractionalConstraint::kDenominatorFloor) {
        throw SignIndefiniteDenominator(j, Vector(x.begin(), x.end()), "vanishes");
      }
      const int s = d > 0 ? 1 : -1;
      if (signs[j] == 0) {
        signs[j] = s;
        if (j == 0) first_point.assign(x.begin(), x.end());
      } else if (signs[j] != s) {
        throw SignIndefiniteDenominator(j, Vector(x.begin(), x.end()), "changes sign");
      }
    }
    return true;
  });
  if (signs[0] < 0) {
    throw SignIndefiniteDenominator(0, first_point, "objective denominator must be positive");
  }
  return signs;
}

}  // namespace gcert
