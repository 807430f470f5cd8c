#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gcert/model.hpp"
#include "gcert/tolerances.hpp"

namespace gcert {

struct ValueSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct OracleResult {
  /// False when the scan found no feasible point at all.
  bool found = false;
  /// False when only points within the relaxed grid tolerance were found.
  bool strictly_feasible = false;
  CandidatePoint best_point;
  double best_value = 0.0;
  std::size_t feasible_count = 0;
  std::size_t points_per_axis = 0;
  std::size_t refinement_rounds = 0;
  ValueSummary values;
  /// Strictly feasible evaluated points whose value is within
  /// 1e-6 * (1 + |best|) of the best value.
  std::vector<Vector> near_optimal;
};

struct OracleOptions {
  /// Feasibility tolerance on the coarse grid.
  double coarse_feasibility = 1e-6;
  /// Feasibility tolerance for refinement points and the reported optimum.
  double fine_feasibility = 1e-8;
  double near_optimal_relative = 1e-6;
};

/// Largest supported dimension.
inline constexpr std::size_t kOracleMaxDim = 12;

/// Default grid: 201 points per axis with 3 refinement rounds for n <= 3, 41
/// points for 4 <= n <= 6, and beyond that the largest count keeping the grid
/// at about 5e6 points.
std::size_t default_points_per_axis(const MixedBox& box);
std::size_t default_refinement_rounds(const MixedBox& box);

/// Exhaustive scan of every discrete assignment times a uniform grid on the
/// continuous coordinates, followed by refinement rounds that halve the
/// spacing around the best point. Deterministic.
OracleResult global_search(const ProblemInstance& p, std::size_t points_per_axis,
                           std::size_t refinement_rounds, const OracleOptions& opts = {});
OracleResult global_search(const ProblemInstance& p);

/// Grid points that are local minima of the objective over their feasible
/// neighbors along continuous axes, together with grid points where the
/// objective is stationary along every continuous axis (sign conditions at
/// the bounds), snapped to the bounds and deduplicated at 1e-4. Ordered by
/// objective value, then lexicographically.
std::vector<CandidatePoint> candidate_scan(const ProblemInstance& p, std::size_t points_per_axis,
                                           const OracleOptions& opts = {});

/// 41 points per axis for n <= 3, fewer for larger n.
std::size_t default_scan_points(const MixedBox& box);

}  // namespace gcert
