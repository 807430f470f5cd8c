#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gcert/linalg.hpp"
#include "gcert/model.hpp"
#include "gcert/tolerances.hpp"

namespace gcert {

enum class Provenance { AtLower, AtUpper, Interior };

const char* to_string(Provenance p);

/// Per-function gradient terms at a point. Row 0 is the objective, row j the
/// j-th constraint. For the quadratic kind a row is A_j x + a_j, for the
/// rho-convex kind grad f_j(x) - A_j x, and for the fractional kind
/// [(A_j x + a_j) - e_j (B_j x + b_j)] / den_j(x) with e_0 = s(x).
struct GradientTerms {
  std::vector<Vector> rows;
  /// Fractional kind only: den_j(x) for j = 0..m, the objective ratio s(x),
  /// and the scaling c = den_0(x) entering the chi vector.
  Vector denominators;
  double objective_ratio = 0.0;
  double c_scalar = 1.0;

  /// sum_j weight_j * rows[j][i] with weight_0 = 1.
  Vector combine(const MultiplierVector& lambda) const;
};

GradientTerms gradient_terms(const ProblemInstance& p, std::span<const double> x);

/// Gradient of the Lagrangian with lambda_0 = 1, i.e. sum_j lambda_j * rows[j].
Vector lagrangian_gradient(const ProblemInstance& p, std::span<const double> x,
                           const MultiplierVector& lambda);

struct ChiVector {
  Vector values;
  std::vector<Provenance> provenance;
};

/// Coordinate provenance by snap distance to the bounds.
std::vector<Provenance> coordinate_provenance(const MixedBox& box, std::span<const double> x,
                                              const Tolerances& tol = {});

/// -1 at the lower bound, +1 at the upper bound, and the Lagrangian gradient
/// component at interior coordinates (scaled by den_0(x) for the fractional kind).
ChiVector chi(const ProblemInstance& p, std::span<const double> x, const MultiplierVector& lambda,
              const Tolerances& tol = {});

struct CoordinateCheck {
  std::size_t index = 0;
  Provenance provenance = Provenance::Interior;
  double lhs = 0.0;
  /// tol - lhs; negative when the condition fails at this coordinate.
  double margin = 0.0;
  /// Discrete coordinates are reported but never make the verdict fail.
  bool informational = false;
};

struct NecessaryVerdict {
  bool holds = false;
  std::vector<CoordinateCheck> per_coordinate;
  /// max(0, max lhs over continuous coordinates)
  double worst_violation = 0.0;
};

/// lhs_i = chi_i * sum_j lambda_j (A_j x + a_j)_i for continuous i; holds iff all <= tol.
NecessaryVerdict necessary_p1(const ProblemInstance& p, std::span<const double> x,
                              const MultiplierVector& lambda, const Tolerances& tol = {});
NecessaryVerdict necessary_p2(const ProblemInstance& p, std::span<const double> x,
                              const MultiplierVector& lambda, const Tolerances& tol = {});
NecessaryVerdict necessary_p3(const ProblemInstance& p, std::span<const double> x,
                              const MultiplierVector& lambda, const Tolerances& tol = {});
/// Dispatches on the instance kind.
NecessaryVerdict necessary_condition(const ProblemInstance& p, std::span<const double> x,
                                     const MultiplierVector& lambda, const Tolerances& tol = {});

/// Largest |lambda_j * c_j(x)| over the constraints.
double slackness_violation(const ProblemInstance& p, std::span<const double> x,
                           const MultiplierVector& lambda);

/// Throws ContractError unless x is feasible, lambda has the right length and is
/// nonnegative, complementary slackness holds and the necessary condition holds.
void require_kkt_pair(const ProblemInstance& p, std::span<const double> x,
                      const MultiplierVector& lambda, const Tolerances& tol = {});

/// a^T lambda <= b, or |a^T lambda - b| <= tol when equality is set.
struct Halfspace {
  Vector a;
  double b = 0.0;
  bool equality = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  ///< +infinity when unbounded above
};

enum class RegionShape { Empty, Point, IntervalFamily };

const char* to_string(RegionShape s);

/// Set of multipliers lambda >= 0 satisfying complementary slackness and the
/// necessary condition (equality at interior continuous coordinates,
/// inequality at boundary ones).
struct MultiplierRegion {
  RegionShape shape = RegionShape::Empty;
  std::size_t num_constraints = 0;
  std::vector<Halfspace> halfspaces;
  /// Per-component projection of the region.
  std::vector<Interval> projections;
  /// Vertices of the region (capped at kMultiplierCap per component).
  std::vector<Vector> vertices;
  /// Indices of constraints active at x.
  std::vector<std::size_t> active;
  /// The multiplier for which the Lagrangian gradient vanishes at every
  /// continuous coordinate (no box multipliers needed), when it is unique and
  /// lies in the region.
  std::optional<Vector> box_free_multiplier;
  double tol = 1e-8;

  bool contains(std::span<const double> lambda, double slack = -1.0) const;
  /// The unique member when shape == Point.
  Vector point() const;
};

inline constexpr double kMultiplierCap = 1e6;

/// Throws ContractError when x is not feasible.
MultiplierRegion solve_multiplier_region(const ProblemInstance& p, std::span<const double> x,
                                         const Tolerances& tol = {});

/// Deterministic finite sample of the region: a grid over the projection box
/// (33 points per free dimension for at most three free dimensions, fewer
/// beyond so the total stays at most 33^3) filtered by membership, plus the
/// vertices and points on segments between vertices. Unbounded projections
/// are swept up to lo + 10.
std::vector<MultiplierVector> sample_region(const MultiplierRegion& region,
                                            std::size_t points_per_dim = 33);

struct LicqReport {
  bool holds = false;
  std::size_t rank = 0;
  std::size_t columns = 0;
  Vector singular_values;
};

/// Linear independence of the gradients of the active functional constraints
/// and the active continuous box constraints (x_i - u_i)(x_i - v_i) <= 0.
LicqReport licq_check(const ProblemInstance& p, std::span<const double> x,
                      const Tolerances& tol = {});

/// Singular values of the column set (one-sided Jacobi), descending.
Vector singular_values(const std::vector<Vector>& columns);

}  // namespace gcert
