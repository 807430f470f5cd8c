#include "gcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcert/errors.hpp"

namespace gcert {

namespace {

std::size_t budgeted_points(const MixedBox& box, double budget, std::size_t cap) {
  const auto cont = box.continuous_indices().size();
  if (cont == 0) return 3;
  const double disc = std::pow(2.0, static_cast<double>(box.dim() - cont));
  const double share = std::max(1.0, budget / disc);
  const auto n = static_cast<std::size_t>(std::floor(std::pow(share, 1.0 / cont) + 1e-9));
  return std::clamp<std::size_t>(n, 3, cap);
}

void check_dim(const ProblemInstance& p) {
  if (p.dim() > kOracleMaxDim) {
    throw ContractError("oracle refuses instances with n > " + std::to_string(kOracleMaxDim));
  }
}

Tolerances with_feasibility(double feas) {
  Tolerances t;
  t.feasibility = feas;
  return t;
}

/// Objective value if x is feasible under tol, nullopt otherwise.
std::optional<double> feasible_value(const ProblemInstance& p, std::span<const double> x,
                                     const Tolerances& tol) {
  for (std::size_t j = 0; j < p.num_constraints(); ++j) {
    if (p.constraint_value(j, x) > tol.feasibility) return std::nullopt;
  }
  return p.objective_value(x);
}

bool better(double v, std::span<const double> x, double best_v, const Vector& best_x) {
  if (v != best_v) return v < best_v;
  return std::lexicographical_compare(x.begin(), x.end(), best_x.begin(), best_x.end());
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::size_t default_points_per_axis(const MixedBox& box) {
  if (box.dim() <= 3) return 201;
  if (box.dim() <= 6) return 41;
  return budgeted_points(box, 5e6, 41);
}

std::size_t default_refinement_rounds(const MixedBox& box) { return box.dim() <= 6 ? 3 : 1; }

std::size_t default_scan_points(const MixedBox& box) {
  if (box.dim() <= 3) return 41;
  return budgeted_points(box, 2e6, 21);
}

OracleResult global_search(const ProblemInstance& p) {
  return global_search(p, default_points_per_axis(p.box()), default_refinement_rounds(p.box()));
}

OracleResult global_search(const ProblemInstance& p, std::size_t points_per_axis,
                           std::size_t refinement_rounds, const OracleOptions& opts) {
  check_dim(p);
  if (points_per_axis < 3) throw ContractError("oracle grid needs at least 3 points per axis");
  const Tolerances coarse = with_feasibility(opts.coarse_feasibility);
  const Tolerances fine = with_feasibility(opts.fine_feasibility);
  const std::size_t n = p.dim();
  const auto axes = grid_axes(p.box(), points_per_axis);

  OracleResult r;
  r.points_per_axis = points_per_axis;
  r.refinement_rounds = refinement_rounds;

  double total = 1.0;
  for (const auto& ax : axes) total *= static_cast<double>(ax.size());
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::ceil(total / 1e6)));
  std::vector<double> sampled;

  double coarse_best = std::numeric_limits<double>::infinity();
  Vector coarse_x;
  double strict_best = std::numeric_limits<double>::infinity();
  Vector strict_x;
  std::vector<std::pair<double, Vector>> near;

  auto near_threshold = [&] {
    return strict_best + opts.near_optimal_relative * (1.0 + std::abs(strict_best));
  };
  auto record_strict = [&](double v, std::span<const double> x) {
    if (strict_x.empty() || better(v, x, strict_best, strict_x)) {
      strict_best = v;
      strict_x.assign(x.begin(), x.end());
    }
    if (v <= near_threshold()) {
      near.emplace_back(v, Vector(x.begin(), x.end()));
      if (near.size() > 20000) {
        const double t = near_threshold();
        std::erase_if(near, [t](const auto& e) { return e.first > t; });
      }
    }
  };

  std::size_t index = 0;
  for_each_grid_point(axes, [&](std::span<const double> x) {
    const auto v = feasible_value(p, x, coarse);
    if (v) {
      ++r.feasible_count;
      if (index % stride == 0) sampled.push_back(*v);
      if (coarse_x.empty() || better(*v, x, coarse_best, coarse_x)) {
        coarse_best = *v;
        coarse_x.assign(x.begin(), x.end());
      }
      if (feasible_value(p, x, fine)) record_strict(*v, x);
    }
    ++index;
    return true;
  });

  if (coarse_x.empty()) return r;
  r.found = true;

  const auto cont = p.box().continuous_indices();
  Vector spacing(n, 0.0);
  for (std::size_t i : cont) {
    spacing[i] = p.box()[i].width() / static_cast<double>(points_per_axis - 1);
  }
  for (std::size_t round = 1; round <= refinement_rounds && !cont.empty(); ++round) {
    std::vector<Vector> centers{coarse_x};
    if (!strict_x.empty() && strict_x != coarse_x) centers.push_back(strict_x);
    const double scale = std::ldexp(1.0, -static_cast<int>(round));
    for (const auto& center : centers) {
      std::vector<Vector> local(n);
      for (std::size_t i = 0; i < n; ++i) local[i] = {center[i]};
      for (std::size_t i : cont) {
        local[i].clear();
        for (int k = -2; k <= 2; ++k) {
          const double v = std::clamp(center[i] + k * scale * spacing[i], p.box()[i].lower,
                                      p.box()[i].upper);
          if (std::find(local[i].begin(), local[i].end(), v) == local[i].end()) {
            local[i].push_back(v);
          }
        }
      }
      for_each_grid_point(local, [&](std::span<const double> x) {
        if (const auto v = feasible_value(p, x, fine)) record_strict(*v, x);
        return true;
      });
    }
  }

  if (!strict_x.empty()) {
    r.strictly_feasible = true;
    r.best_point.x = strict_x;
    r.best_value = strict_best;
    const double t = near_threshold();
    std::sort(near.begin(), near.end());
    for (auto& [v, x] : near) {
      if (v <= t) r.near_optimal.push_back(std::move(x));
    }
  } else {
    r.best_point.x = coarse_x;
    r.best_value = coarse_best;
  }
  std::sort(sampled.begin(), sampled.end());
  r.values = ValueSummary{sampled.front(), quantile(sampled, 0.25), quantile(sampled, 0.5),
                          quantile(sampled, 0.75), sampled.back()};
  return r;
}

std::vector<CandidatePoint> candidate_scan(const ProblemInstance& p, std::size_t points_per_axis,
                                           const OracleOptions& opts) {
  check_dim(p);
  if (points_per_axis < 3) throw ContractError("candidate scan needs at least 3 points per axis");
  const Tolerances coarse = with_feasibility(opts.coarse_feasibility);
  const std::size_t n = p.dim();
  const auto axes = grid_axes(p.box(), points_per_axis);
  const auto cont = p.box().continuous_indices();

  std::vector<std::size_t> stride(n, 1);
  std::size_t total = 1;
  for (std::size_t i = n; i-- > 0;) {
    stride[i] = total;
    total *= axes[i].size();
  }
  std::vector<double> values(total, std::numeric_limits<double>::quiet_NaN());
  std::vector<Vector> grads(total);
  {
    std::size_t k = 0;
    for_each_grid_point(axes, [&](std::span<const double> x) {
      if (const auto v = feasible_value(p, x, coarse)) {
        values[k] = *v;
        grads[k] = p.objective_gradient(x);
      }
      ++k;
      return true;
    });
  }

  auto point_at = [&](std::size_t k) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = axes[i][(k / stride[i]) % axes[i].size()];
    return x;
  };

  constexpr double kStationaryTol = 1e-9;
  std::vector<std::pair<double, Vector>> found;
  for (std::size_t k = 0; k < total; ++k) {
    if (std::isnan(values[k])) continue;
    const double f = values[k];
    bool local_min = true;
    bool stationary = true;
    for (std::size_t i : cont) {
      const std::size_t pos = (k / stride[i]) % axes[i].size();
      const std::size_t last = axes[i].size() - 1;
      const double scale = 1.0 + std::abs(f);
      for (int dir : {-1, 1}) {
        if ((dir < 0 && pos == 0) || (dir > 0 && pos == last)) continue;
        const std::size_t nb = dir < 0 ? k - stride[i] : k + stride[i];
        if (!std::isnan(values[nb]) && values[nb] < f - 1e-12 * scale) local_min = false;
      }
      const double g = grads[k][i];
      const double gtol = kStationaryTol * (1.0 + vec::norm_inf(grads[k]));
      if (pos == 0) {
        if (g < -gtol) stationary = false;
      } else if (pos == last) {
        if (g > gtol) stationary = false;
      } else {
        const std::size_t lo = k - stride[i];
        const std::size_t hi = k + stride[i];
        if (std::isnan(values[lo]) || std::isnan(values[hi])) {
          stationary = false;
          continue;
        }
        const double gl = grads[lo][i];
        const double gh = grads[hi][i];
        const bool smallest = std::abs(g) <= std::min(std::abs(gl), std::abs(gh));
        const bool crossing = std::abs(g) <= gtol || (gl < 0) != (gh < 0) ||
                              (g < 0) != (gl < 0) || (g < 0) != (gh < 0);
        if (!(smallest && crossing)) stationary = false;
      }
    }
    if (local_min || stationary) found.emplace_back(f, point_at(k));
  }

  std::sort(found.begin(), found.end());
  std::vector<CandidatePoint> out;
  const Tolerances tol;
  for (auto& [v, x] : found) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(x[i] - p.box()[i].lower) <= tol.snap) x[i] = p.box()[i].lower;
      if (std::abs(x[i] - p.box()[i].upper) <= tol.snap) x[i] = p.box()[i].upper;
    }
    bool dup = false;
    for (const auto& c : out) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(c.x[i] - x[i]));
      if (d <= 1e-4) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(CandidatePoint{std::move(x)});
  }
  return out;
}

}  // namespace gcert
