#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gcert/linalg.hpp"
#include "gcert/tolerances.hpp"

namespace gcert {

/// q(x) = 1/2 x^T A x + a^T x + c
struct QuadraticFunction {
  SymmetricMatrix A;
  Vector a;
  double c = 0.0;

  QuadraticFunction() = default;
  QuadraticFunction(SymmetricMatrix A_, Vector a_, double c_);
  static QuadraticFunction zero(std::size_t n);

  std::size_t dim() const { return A.dim(); }
  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;

  bool operator==(const QuadraticFunction&) const = default;
};

/// coeff * (w^T x + offset)^exponent with coeff >= 0 and an even exponent >= 2.
struct PowerTerm {
  double coeff = 0.0;
  Vector w;
  double offset = 0.0;
  int exponent = 2;

  bool operator==(const PowerTerm&) const = default;
};

/// Convex function of the form  base(x) + sum_k coeff_k (w_k^T x + b_k)^{p_k},
/// with base.A positive semidefinite. Convex by construction.
struct ConvexSmoothFunction {
  QuadraticFunction base;
  std::vector<PowerTerm> power_terms;

  ConvexSmoothFunction() = default;
  /// Throws ValidationError when a term has a negative coefficient, an odd or
  /// too small exponent, a wrong dimension, or base.A is not PSD.
  explicit ConvexSmoothFunction(QuadraticFunction base_, std::vector<PowerTerm> terms = {});

  std::size_t dim() const { return base.dim(); }
  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;

  bool operator==(const ConvexSmoothFunction&) const = default;
};

/// g(x) = f(x) - 1/2 x^T A x with f convex.
struct RhoConvexFunction {
  ConvexSmoothFunction f;
  SymmetricMatrix A;

  RhoConvexFunction() = default;
  RhoConvexFunction(ConvexSmoothFunction f_, SymmetricMatrix A_);

  std::size_t dim() const { return A.dim(); }
  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;
  /// grad f(x) - A x, the term entering the local and global conditions.
  Vector shifted_gradient(std::span<const double> x) const { return gradient(x); }

  bool operator==(const RhoConvexFunction&) const = default;
};

/// num(x) / den(x) <= bound. For an objective the bound is ignored.
struct FractionalConstraint {
  QuadraticFunction num;
  QuadraticFunction den;
  double bound = 0.0;

  FractionalConstraint() = default;
  FractionalConstraint(QuadraticFunction num_, QuadraticFunction den_, double bound_ = 0.0);

  std::size_t dim() const { return num.dim(); }
  /// Throws DenominatorVanishes when |den(x)| <= kDenominatorFloor.
  double ratio(std::span<const double> x) const;
  /// Quotient-rule gradient of num/den.
  Vector ratio_gradient(std::span<const double> x) const;

  static constexpr double kDenominatorFloor = 1e-12;

  bool operator==(const FractionalConstraint&) const = default;
};

enum class DomainKind { Continuous, Discrete };

struct VariableDomain {
  double lower = 0.0;
  double upper = 1.0;
  DomainKind kind = DomainKind::Continuous;

  double width() const { return upper - lower; }
  bool operator==(const VariableDomain&) const = default;
};

/// Per-coordinate domains. Each coordinate is either continuous on [u_i, v_i]
/// or discrete on {u_i, v_i}.
class MixedBox {
 public:
  MixedBox() = default;
  explicit MixedBox(std::vector<VariableDomain> domains, const Tolerances& tol = {});

  std::size_t dim() const { return domains_.size(); }
  const VariableDomain& operator[](std::size_t i) const { return domains_[i]; }
  const std::vector<VariableDomain>& domains() const { return domains_; }
  std::vector<std::size_t> continuous_indices() const;
  std::vector<std::size_t> discrete_indices() const;

  bool operator==(const MixedBox&) const = default;

 private:
  std::vector<VariableDomain> domains_;
};

enum class ProblemKind { Quadratic, RhoConvex, Fractional };

std::string to_string(ProblemKind k);

struct QuadraticProgram {
  QuadraticFunction objective;
  std::vector<QuadraticFunction> constraints;
  bool operator==(const QuadraticProgram&) const = default;
};

struct RhoConvexProgram {
  RhoConvexFunction objective;
  std::vector<RhoConvexFunction> constraints;
  bool operator==(const RhoConvexProgram&) const = default;
};

struct FractionalProgram {
  FractionalConstraint objective;
  std::vector<FractionalConstraint> constraints;
  bool operator==(const FractionalProgram&) const = default;
};

/// A validated instance of one of the three problem classes over a mixed box.
/// Constraint values are reported in "<= 0" form: f_j(x), g_j(x), or
/// num_j(x)/den_j(x) - e_j respectively.
class ProblemInstance {
 public:
  using Program = std::variant<QuadraticProgram, RhoConvexProgram, FractionalProgram>;

  /// Validates dimensions; for the fractional kind also validates that every
  /// denominator is sign-definite over the box (objective denominator positive).
  ProblemInstance(MixedBox box, Program program);

  ProblemKind kind() const;
  std::size_t dim() const { return box_.dim(); }
  std::size_t num_constraints() const;
  const MixedBox& box() const { return box_; }
  const Program& program() const { return program_; }

  const QuadraticProgram& quadratic() const;
  const RhoConvexProgram& rho_convex() const;
  const FractionalProgram& fractional() const;

  double objective_value(std::span<const double> x) const;
  Vector objective_gradient(std::span<const double> x) const;
  double constraint_value(std::size_t j, std::span<const double> x) const;
  Vector constraint_gradient(std::size_t j, std::span<const double> x) const;

  bool operator==(const ProblemInstance&) const = default;

 private:
  MixedBox box_;
  Program program_;
};

struct CandidatePoint {
  Vector x;
  bool operator==(const CandidatePoint&) const = default;
};

/// Multipliers lambda_1..lambda_m. lambda_0 = 1 is implicit and never stored.
struct MultiplierVector {
  Vector lambdas;

  MultiplierVector() = default;
  /// Throws ValidationError if some component is below -tol.
  explicit MultiplierVector(Vector l, double tol = 1e-8);
  static MultiplierVector zeros(std::size_t m) { return MultiplierVector(Vector(m, 0.0)); }

  std::size_t size() const { return lambdas.size(); }
  double operator[](std::size_t j) const { return lambdas[j]; }
  /// Weight of function j in the Lagrangian, with index 0 the objective.
  double weight(std::size_t j) const { return j == 0 ? 1.0 : lambdas[j - 1]; }

  bool operator==(const MultiplierVector&) const = default;
};

double eval_quadratic(const QuadraticFunction& q, std::span<const double> x);
Vector grad_quadratic(const QuadraticFunction& q, std::span<const double> x);
double eval_convex(const ConvexSmoothFunction& f, std::span<const double> x);
Vector grad_convex(const ConvexSmoothFunction& f, std::span<const double> x);
double eval_fractional(const FractionalConstraint& fc, std::span<const double> x);

enum class CoordinateStatus { Inside, OutOfBox, DiscreteViolation };

struct FeasibilityReport {
  std::vector<CoordinateStatus> coordinates;
  Vector constraint_values;
  bool in_box = false;
  bool constraints_satisfied = false;
  bool feasible = false;
  /// Largest violation among box distance and positive constraint values.
  double worst_violation = 0.0;
};

/// Membership of x in the feasible set. Discrete coordinates must equal u_i or v_i
/// within tol.snap, continuous ones lie in [u_i, v_i] within tol.snap, and every
/// constraint value is <= tol.feasibility.
FeasibilityReport feasibility(const ProblemInstance& p, std::span<const double> x,
                              const Tolerances& tol = {});

/// Per-coordinate value lists of a uniform grid over the box: {u, v} for discrete
/// coordinates and points_per_axis evenly spaced values for continuous ones.
std::vector<Vector> grid_axes(const MixedBox& box, std::size_t points_per_axis);

/// Calls fn on every point of the Cartesian product of the given axes, in
/// lexicographic order (last coordinate fastest). Stops early if fn returns false.
void for_each_grid_point(const std::vector<Vector>& axes,
                         const std::function<bool(std::span<const double>)>& fn);

/// Sign of each denominator over the box (index 0 is the objective), determined
/// on every discrete assignment combined with a 17-point-per-axis grid on the
/// continuous coordinates (fewer when the grid would exceed ~2e6 points).
/// Throws SignIndefiniteDenominator on a sign change or a vanishing value, or
/// when the objective denominator is negative.
std::vector<int> denominator_signs(const MixedBox& box, const FractionalProgram& prog);

}  // namespace gcert
