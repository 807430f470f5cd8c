#include "gcert/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <type_traits>

#include "gcert/errors.hpp"

namespace gcert {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::AtLower: return "AtLower";
    case Provenance::AtUpper: return "AtUpper";
    case Provenance::Interior: return "Interior";
  }
  return "?";
}

const char* to_string(RegionShape s) {
  switch (s) {
    case RegionShape::Empty: return "Empty";
    case RegionShape::Point: return "Point";
    case RegionShape::IntervalFamily: return "IntervalFamily";
  }
  return "?";
}

Vector GradientTerms::combine(const MultiplierVector& lambda) const {
  if (lambda.size() + 1 != rows.size()) {
    throw DimensionMismatch("multiplier vector", rows.size() - 1, lambda.size());
  }
  Vector g = rows.front();
  for (std::size_t j = 1; j < rows.size(); ++j) vec::axpy(lambda.weight(j), rows[j], g);
  return g;
}

namespace {

double checked_denominator(const QuadraticFunction& den, std::span<const double> x) {
  const double d = den.value(x);
  if (std::abs(d) <= FractionalConstraint::kDenominatorFloor) {
    throw DenominatorVanishes(Vector(x.begin(), x.end()), d);
  }
  return d;
}

Vector fractional_term(const FractionalConstraint& fc, double e, double den,
                       std::span<const double> x) {
  Vector t = fc.num.gradient(x);
  vec::axpy(-e, fc.den.gradient(x), t);
  for (double& v : t) v /= den;
  return t;
}

}  // namespace

GradientTerms gradient_terms(const ProblemInstance& p, std::span<const double> x) {
  if (x.size() != p.dim()) throw DimensionMismatch("gradient_terms", p.dim(), x.size());
  GradientTerms t;
  std::visit(
      [&](const auto& prog) {
        using T = std::decay_t<decltype(prog)>;
        if constexpr (std::is_same_v<T, FractionalProgram>) {
          const double den0 = checked_denominator(prog.objective.den, x);
          const double s = prog.objective.num.value(x) / den0;
          t.denominators.push_back(den0);
          t.objective_ratio = s;
          t.c_scalar = den0;
          t.rows.push_back(fractional_term(prog.objective, s, den0, x));
          for (const auto& c : prog.constraints) {
            const double dj = checked_denominator(c.den, x);
            t.denominators.push_back(dj);
            t.rows.push_back(fractional_term(c, c.bound, dj, x));
          }
        } else {
          t.rows.push_back(prog.objective.gradient(x));
          for (const auto& c : prog.constraints) t.rows.push_back(c.gradient(x));
        }
      },
      p.program());
  return t;
}

Vector lagrangian_gradient(const ProblemInstance& p, std::span<const double> x,
                           const MultiplierVector& lambda) {
  return gradient_terms(p, x).combine(lambda);
}

std::vector<Provenance> coordinate_provenance(const MixedBox& box, std::span<const double> x,
                                              const Tolerances& tol) {
  if (x.size() != box.dim()) throw DimensionMismatch("coordinate_provenance", box.dim(), x.size());
  std::vector<Provenance> prov(x.size(), Provenance::Interior);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - box[i].lower) <= tol.snap) {
      prov[i] = Provenance::AtLower;
    } else if (std::abs(x[i] - box[i].upper) <= tol.snap) {
      prov[i] = Provenance::AtUpper;
    }
  }
  return prov;
}

namespace {

void require_feasible(const ProblemInstance& p, std::span<const double> x, const Tolerances& tol,
                      const char* what) {
  const auto rep = feasibility(p, x, tol);
  if (!rep.feasible) {
    throw ContractError(std::string(what) + ": candidate is not feasible (violation " +
                        std::to_string(rep.worst_violation) + ")");
  }
}

void require_multipliers(const ProblemInstance& p, const MultiplierVector& lambda,
                         const Tolerances& tol) {
  if (lambda.size() != p.num_constraints()) {
    throw DimensionMismatch("multiplier vector", p.num_constraints(), lambda.size());
  }
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (!(lambda[j] >= -tol.slackness)) {
      throw ContractError("multiplier " + std::to_string(j + 1) + " is negative");
    }
  }
}

ChiVector chi_from_terms(const MixedBox& box, std::span<const double> x, const GradientTerms& t,
                         const Vector& grad, const Tolerances& tol) {
  ChiVector c;
  c.provenance = coordinate_provenance(box, x, tol);
  c.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (c.provenance[i]) {
      case Provenance::AtLower: c.values[i] = -1.0; break;
      case Provenance::AtUpper: c.values[i] = 1.0; break;
      case Provenance::Interior: c.values[i] = t.c_scalar * grad[i]; break;
    }
  }
  return c;
}

NecessaryVerdict necessary_impl(const ProblemInstance& p, std::span<const double> x,
                                const MultiplierVector& lambda, const Tolerances& tol) {
  require_multipliers(p, lambda, tol);
  require_feasible(p, x, tol, "necessary condition");
  const auto terms = gradient_terms(p, x);
  const Vector grad = terms.combine(lambda);
  const ChiVector c = chi_from_terms(p.box(), x, terms, grad, tol);
  NecessaryVerdict v;
  v.holds = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    CoordinateCheck cc;
    cc.index = i;
    cc.provenance = c.provenance[i];
    cc.lhs = c.values[i] * grad[i];
    cc.margin = tol.necessary - cc.lhs;
    cc.informational = p.box()[i].kind == DomainKind::Discrete;
    if (!cc.informational) {
      v.worst_violation = std::max(v.worst_violation, cc.lhs);
      if (!(cc.lhs <= tol.necessary)) v.holds = false;
    }
    v.per_coordinate.push_back(cc);
  }
  return v;
}

}  // namespace

ChiVector chi(const ProblemInstance& p, std::span<const double> x, const MultiplierVector& lambda,
              const Tolerances& tol) {
  const auto terms = gradient_terms(p, x);
  return chi_from_terms(p.box(), x, terms, terms.combine(lambda), tol);
}

NecessaryVerdict necessary_p1(const ProblemInstance& p, std::span<const double> x,
                              const MultiplierVector& lambda, const Tolerances& tol) {
  p.quadratic();
  return necessary_impl(p, x, lambda, tol);
}

NecessaryVerdict necessary_p2(const ProblemInstance& p, std::span<const double> x,
                              const MultiplierVector& lambda, const Tolerances& tol) {
  p.rho_convex();
  return necessary_impl(p, x, lambda, tol);
}

NecessaryVerdict necessary_p3(const ProblemInstance& p, std::span<const double> x,
                              const MultiplierVector& lambda, const Tolerances& tol) {
  p.fractional();
  return necessary_impl(p, x, lambda, tol);
}

NecessaryVerdict necessary_condition(const ProblemInstance& p, std::span<const double> x,
                                     const MultiplierVector& lambda, const Tolerances& tol) {
  return necessary_impl(p, x, lambda, tol);
}

double slackness_violation(const ProblemInstance& p, std::span<const double> x,
                           const MultiplierVector& lambda) {
  if (lambda.size() != p.num_constraints()) {
    throw DimensionMismatch("multiplier vector", p.num_constraints(), lambda.size());
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    worst = std::max(worst, std::abs(lambda[j] * p.constraint_value(j, x)));
  }
  return worst;
}

void require_kkt_pair(const ProblemInstance& p, std::span<const double> x,
                      const MultiplierVector& lambda, const Tolerances& tol) {
  const auto v = necessary_impl(p, x, lambda, tol);
  const double slack = slackness_violation(p, x, lambda);
  if (slack > tol.slackness) {
    throw ContractError("complementary slackness fails (|lambda_j c_j(x)| = " +
                        std::to_string(slack) + ")");
  }
  if (!v.holds) {
    throw ContractError("local necessary condition fails at the candidate (worst lhs " +
                        std::to_string(v.worst_violation) + ")");
  }
}

// ---------------------------------------------------------------------------
// Multiplier region

namespace {

struct LinearRow {
  Vector a;  // over the active multipliers
  double b = 0.0;
};

double row_tolerance(const LinearRow& r, std::span<const double> lambda, double tol) {
  double scale = 1.0 + std::abs(r.b);
  for (std::size_t k = 0; k < r.a.size(); ++k) scale += std::abs(r.a[k] * lambda[k]);
  return tol * scale;
}

double row_residual(const LinearRow& r, std::span<const double> lambda) {
  double s = -r.b;
  for (std::size_t k = 0; k < r.a.size(); ++k) s += r.a[k] * lambda[k];
  return s;
}

/// Unique solution of the (possibly overdetermined) system, or nullopt when the
/// rows do not determine every unknown or are inconsistent.
std::optional<Vector> solve_unique(const std::vector<LinearRow>& rows, std::size_t k) {
  if (k == 0) {
    for (const auto& r : rows) {
      if (std::abs(r.b) > row_tolerance(r, Vector{}, 1e-9)) return std::nullopt;
    }
    return Vector{};
  }
  std::vector<Vector> m;
  m.reserve(rows.size());
  double scale = 0.0;
  for (const auto& r : rows) {
    Vector row(r.a);
    row.push_back(r.b);
    for (std::size_t c = 0; c < k; ++c) scale = std::max(scale, std::abs(r.a[c]));
    m.push_back(std::move(row));
  }
  if (scale == 0.0) return std::nullopt;
  const double pivot_tol = 1e-11 * scale;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best = r;
    for (std::size_t i = r; i < m.size(); ++i) {
      if (std::abs(m[i][c]) > std::abs(m[best][c])) best = i;
    }
    if (best >= m.size() || std::abs(m[best][c]) <= pivot_tol) return std::nullopt;
    std::swap(m[r], m[best]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r) continue;
      const double f = m[i][c] / m[r][c];
      if (f == 0.0) continue;
      for (std::size_t cc = c; cc <= k; ++cc) m[i][cc] -= f * m[r][cc];
    }
    ++r;
  }
  Vector sol(k);
  for (std::size_t c = 0; c < k; ++c) sol[c] = m[c][k] / m[c][c];
  for (const auto& row : rows) {
    if (std::abs(row_residual(row, sol)) > row_tolerance(row, sol, 1e-9)) return std::nullopt;
  }
  return sol;
}

std::size_t matrix_rank(const std::vector<LinearRow>& rows, std::size_t k) {
  std::vector<Vector> cols(k, Vector(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) cols[c][i] = rows[i].a[c];
  }
  if (rows.empty() || k == 0) return 0;
  const Vector sv = singular_values(cols);
  std::size_t rank = 0;
  for (double s : sv) {
    if (s > 1e-10 * std::max(sv.front(), 1e-300)) ++rank;
  }
  return sv.front() > 0 ? rank : 0;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool MultiplierRegion::contains(std::span<const double> lambda, double slack) const {
  if (lambda.size() != num_constraints) {
    throw DimensionMismatch("MultiplierRegion::contains", num_constraints, lambda.size());
  }
  if (shape == RegionShape::Empty) return false;
  const double t = slack < 0 ? tol : slack;
  for (double l : lambda) {
    if (!(l >= -t)) return false;
  }
  for (const auto& h : halfspaces) {
    const LinearRow r{h.a, h.b};
    const double res = row_residual(r, lambda);
    const double allowed = row_tolerance(r, lambda, t);
    if (h.equality ? std::abs(res) > allowed : res > allowed) return false;
  }
  return true;
}

Vector MultiplierRegion::point() const {
  if (shape != RegionShape::Point) throw ContractError("multiplier region is not a single point");
  return vertices.front();
}

MultiplierRegion solve_multiplier_region(const ProblemInstance& p, std::span<const double> x,
                                         const Tolerances& tol) {
  require_feasible(p, x, tol, "solve_multiplier_region");
  const std::size_t m = p.num_constraints();
  const std::size_t n = p.dim();
  const auto terms = gradient_terms(p, x);
  const auto prov = coordinate_provenance(p.box(), x, tol);

  MultiplierRegion region;
  region.num_constraints = m;
  region.tol = tol.slackness;
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(p.constraint_value(j, x)) <= tol.feasibility) region.active.push_back(j);
  }
  const std::size_t k = region.active.size();

  auto expand = [&](std::span<const double> small) {
    Vector full(m, 0.0);
    for (std::size_t c = 0; c < k; ++c) full[region.active[c]] = small[c];
    return full;
  };

  std::vector<LinearRow> equalities;
  std::vector<LinearRow> inequalities;
  std::vector<LinearRow> stationarity;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.box()[i].kind == DomainKind::Discrete) continue;
    LinearRow r;
    r.a.resize(k);
    for (std::size_t c = 0; c < k; ++c) r.a[c] = terms.rows[region.active[c] + 1][i];
    r.b = -terms.rows[0][i];
    stationarity.push_back(r);
    switch (prov[i]) {
      case Provenance::Interior: equalities.push_back(r); break;
      case Provenance::AtUpper: inequalities.push_back(r); break;
      case Provenance::AtLower: {
        LinearRow neg{vec::scaled(r.a, -1.0), -r.b};
        inequalities.push_back(neg);
        break;
      }
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    const bool is_active =
        std::find(region.active.begin(), region.active.end(), j) != region.active.end();
    Halfspace h;
    h.a.assign(m, 0.0);
    h.a[j] = is_active ? -1.0 : 1.0;
    h.b = 0.0;
    h.equality = !is_active;
    region.halfspaces.push_back(h);
  }
  auto push_full = [&](const LinearRow& r, bool equality) {
    region.halfspaces.push_back(Halfspace{expand(r.a), r.b, equality});
  };
  for (const auto& r : equalities) push_full(r, true);
  for (const auto& r : inequalities) push_full(r, false);

  // Bounding rows used only for vertex enumeration.
  std::vector<LinearRow> bounded = inequalities;
  for (std::size_t c = 0; c < k; ++c) {
    LinearRow lo;
    lo.a.assign(k, 0.0);
    lo.a[c] = -1.0;
    bounded.push_back(lo);
    LinearRow hi;
    hi.a.assign(k, 0.0);
    hi.a[c] = 1.0;
    hi.b = kMultiplierCap;
    bounded.push_back(hi);
  }

  auto feasible_small = [&](const Vector& lam) {
    for (const auto& r : equalities) {
      if (std::abs(row_residual(r, lam)) > row_tolerance(r, lam, tol.slackness)) return false;
    }
    for (const auto& r : bounded) {
      if (row_residual(r, lam) > row_tolerance(r, lam, tol.slackness)) return false;
    }
    return true;
  };

  std::vector<Vector> verts;
  auto add_vertex = [&](const Vector& lam) {
    for (const auto& v : verts) {
      double d = 0.0;
      for (std::size_t c = 0; c < k; ++c) d = std::max(d, std::abs(v[c] - lam[c]));
      if (d <= 1e-9 * (1.0 + vec::norm_inf(lam))) return;
    }
    verts.push_back(lam);
  };

  if (k == 0) {
    if (feasible_small(Vector{})) verts.push_back(Vector{});
  } else {
    const std::size_t rank_e = matrix_rank(equalities, k);
    const std::size_t need = k - std::min(rank_e, k);
    if (need == 0) {
      if (auto sol = solve_unique(equalities, k); sol && feasible_small(*sol)) add_vertex(*sol);
    } else if (need <= bounded.size()) {
      std::vector<std::size_t> idx(need);
      for (std::size_t i = 0; i < need; ++i) idx[i] = i;
      do {
        std::vector<LinearRow> sys = equalities;
        for (std::size_t i : idx) sys.push_back(bounded[i]);
        if (auto sol = solve_unique(sys, k); sol && feasible_small(*sol)) add_vertex(*sol);
      } while (next_combination(idx, bounded.size()));
    }
  }

  region.projections.assign(m, Interval{0.0, 0.0});
  if (verts.empty()) {
    region.shape = RegionShape::Empty;
    return region;
  }
  std::sort(verts.begin(), verts.end());
  for (const auto& v : verts) region.vertices.push_back(expand(v));
  for (std::size_t c = 0; c < k; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : verts) {
      lo = std::min(lo, v[c]);
      hi = std::max(hi, v[c]);
    }
    if (hi >= kMultiplierCap * (1.0 - 1e-9)) hi = std::numeric_limits<double>::infinity();
    region.projections[region.active[c]] = Interval{std::max(lo, 0.0), hi};
  }
  bool point = true;
  for (const auto& v : region.vertices) {
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(v[j] - region.vertices.front()[j]) > 1e-6) point = false;
    }
  }
  region.shape = point ? RegionShape::Point : RegionShape::IntervalFamily;

  if (auto sol = solve_unique(stationarity, k)) {
    const Vector full = expand(*sol);
    if (region.contains(full)) region.box_free_multiplier = full;
  }
  return region;
}

std::vector<MultiplierVector> sample_region(const MultiplierRegion& region,
                                            std::size_t points_per_dim) {
  std::vector<MultiplierVector> out;
  if (region.shape == RegionShape::Empty) return out;
  const std::size_t m = region.num_constraints;
  std::vector<Vector> samples;

  std::vector<std::size_t> free_dims;
  for (std::size_t j = 0; j < m; ++j) {
    if (region.projections[j].hi - region.projections[j].lo > 1e-9) free_dims.push_back(j);
  }
  if (!free_dims.empty()) {
    const std::size_t d = free_dims.size();
    std::size_t q = points_per_dim;
    if (d > 3) {
      const double total = std::pow(static_cast<double>(points_per_dim), 3.0);
      q = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(
                                       std::pow(total, 1.0 / static_cast<double>(d)) + 1e-9)));
    }
    std::vector<Vector> axes(m);
    for (std::size_t j = 0; j < m; ++j) axes[j] = {region.projections[j].lo};
    for (std::size_t j : free_dims) {
      const double lo = region.projections[j].lo;
      const double hi = std::isinf(region.projections[j].hi) ? lo + 10.0 : region.projections[j].hi;
      axes[j].resize(q);
      for (std::size_t t = 0; t < q; ++t) {
        axes[j][t] = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(q - 1);
      }
      axes[j][q - 1] = hi;
    }
    for_each_grid_point(axes, [&](std::span<const double> lam) {
      if (region.contains(lam)) samples.emplace_back(lam.begin(), lam.end());
      return true;
    });
  }

  std::vector<Vector> finite_vertices;
  for (const auto& v : region.vertices) {
    if (vec::norm_inf(v) < kMultiplierCap * (1.0 - 1e-9)) finite_vertices.push_back(v);
  }
  for (const auto& v : finite_vertices) samples.push_back(v);
  if (finite_vertices.size() <= 20) {
    for (std::size_t a = 0; a < finite_vertices.size(); ++a) {
      for (std::size_t b = a + 1; b < finite_vertices.size(); ++b) {
        for (std::size_t t = 1; t + 1 < points_per_dim; ++t) {
          const double s = static_cast<double>(t) / static_cast<double>(points_per_dim - 1);
          Vector lam(m);
          for (std::size_t j = 0; j < m; ++j) {
            lam[j] = (1.0 - s) * finite_vertices[a][j] + s * finite_vertices[b][j];
          }
          samples.push_back(std::move(lam));
        }
      }
    }
  }
  if (samples.empty()) samples.push_back(region.vertices.front());

  std::sort(samples.begin(), samples.end());
  std::vector<Vector> unique;
  for (auto& s : samples) {
    for (double& v : s) v = std::max(v, 0.0);
    if (!unique.empty()) {
      double dist = 0.0;
      for (std::size_t j = 0; j < m; ++j) dist = std::max(dist, std::abs(unique.back()[j] - s[j]));
      if (dist <= 1e-12) continue;
    }
    unique.push_back(std::move(s));
  }
  for (auto& s : unique) out.emplace_back(std::move(s));
  return out;
}

// ---------------------------------------------------------------------------
// LICQ

Vector singular_values(const std::vector<Vector>& columns) {
  std::vector<Vector> u = columns;
  const std::size_t k = u.size();
  if (k == 0) return {};
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double alpha = vec::dot(u[p], u[p]);
        const double beta = vec::dot(u[q], u[q]);
        const double gamma = vec::dot(u[p], u[q]);
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < u[p].size(); ++i) {
          const double a = u[p][i];
          const double b = u[q][i];
          u[p][i] = c * a - s * b;
          u[q][i] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }
  Vector sv(k);
  for (std::size_t c = 0; c < k; ++c) sv[c] = vec::norm2(u[c]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

LicqReport licq_check(const ProblemInstance& p, std::span<const double> x, const Tolerances& tol) {
  require_feasible(p, x, tol, "licq_check");
  const std::size_t n = p.dim();
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < p.num_constraints(); ++j) {
    if (std::abs(p.constraint_value(j, x)) <= tol.feasibility) {
      cols.push_back(p.constraint_gradient(j, x));
    }
  }
  const auto prov = coordinate_provenance(p.box(), x, tol);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.box()[i].kind == DomainKind::Discrete || prov[i] == Provenance::Interior) continue;
    Vector g(n, 0.0);
    g[i] = 2.0 * x[i] - p.box()[i].lower - p.box()[i].upper;
    cols.push_back(std::move(g));
  }
  LicqReport r;
  r.columns = cols.size();
  r.singular_values = singular_values(cols);
  const double smax = r.singular_values.empty() ? 0.0 : r.singular_values.front();
  for (double s : r.singular_values) {
    if (smax > 0 && s > 1e-8 * smax) ++r.rank;
  }
  r.holds = r.columns <= n && r.rank == r.columns;
  return r;
}

}  // namespace gcert
