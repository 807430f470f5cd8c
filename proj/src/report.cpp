#include "gcert/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gcert/errors.hpp"
#include "gcert/fractional.hpp"
#include "gcert/io.hpp"

namespace gcert {

using nlohmann::json;

const char* to_string(Classification c) {
  switch (c) {
    case Classification::CertifiedUniqueGlobal: return "CertifiedUniqueGlobal";
    case Classification::CertifiedGlobal: return "CertifiedGlobal";
    case Classification::LocalOnly: return "LocalOnly";
    case Classification::NotKKT: return "NotKKT";
    case Classification::Infeasible: return "Infeasible";
  }
  return "?";
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

std::string fmt(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

namespace {

std::vector<CertificateResult> certificates_at(const ProblemInstance& p, std::span<const double> x,
                                               const MultiplierVector& lambda,
                                               const PipelineOptions& opts, bool& inconsistent) {
  inconsistent = false;
  switch (p.kind()) {
    case ProblemKind::Quadratic: return {certify_p1(p, x, lambda, opts.tol)};
    case ProblemKind::RhoConvex: {
      auto a = implication_audit(p, x, lambda, opts.sc_budget, opts.tol);
      inconsistent = a.inconsistent;
      return {a.sc1rc, a.sc2rc, a.sc};
    }
    case ProblemKind::Fractional: return {certify_p3(p, x, lambda, opts.tol)};
  }
  return {};
}

/// Label under which a result contributes to the certified sub-region, with
/// a second label for the strict variant.
std::vector<std::string> labels_for(const CertificateResult& r) {
  if (!r.fired()) return {};
  if (r.kind == CertificateKind::SC1QP || r.kind == CertificateKind::SCQP) {
    if (r.verdict == Verdict::CertifiedUnique) return {"SCQP", "SC1QP"};
    return {"SCQP"};
  }
  return {to_string(r.kind)};
}

std::vector<std::string> all_labels(ProblemKind k) {
  switch (k) {
    case ProblemKind::Quadratic: return {"SCQP", "SC1QP"};
    case ProblemKind::RhoConvex: return {"SC1RC", "SC2RC", "SC"};
    case ProblemKind::Fractional: return {"GSC"};
  }
  return {};
}

std::vector<CertifiedSubregion> summarise(const CertificationReport& rep) {
  std::vector<CertifiedSubregion> out;
  const std::size_t m = rep.num_constraints;
  std::size_t free_component = m;
  if (rep.region && !rep.lambda_fixed) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (rep.region->projections[j].hi - rep.region->projections[j].lo > 1e-9) {
        free_component = j;
        ++count;
      }
    }
    if (count != 1) free_component = m;
  }
  for (const auto& label : all_labels(rep.kind)) {
    CertifiedSubregion s;
    s.certificate = label;
    s.total_samples = rep.sweep.size();
    std::vector<std::pair<Vector, bool>> marks;
    for (const auto& lv : rep.sweep) {
      bool hit = false;
      for (const auto& r : lv.results) {
        const auto ls = labels_for(r);
        if (std::find(ls.begin(), ls.end(), label) != ls.end()) hit = true;
      }
      marks.emplace_back(lv.lambda.lambdas, hit);
      if (!hit) continue;
      ++s.certified_samples;
      if (s.bounding_box.empty()) {
        for (double v : lv.lambda.lambdas) s.bounding_box.push_back(Interval{v, v});
      }
      for (std::size_t j = 0; j < m; ++j) {
        s.bounding_box[j].lo = std::min(s.bounding_box[j].lo, lv.lambda[j]);
        s.bounding_box[j].hi = std::max(s.bounding_box[j].hi, lv.lambda[j]);
      }
    }
    if (free_component < m) {
      const std::size_t c = free_component;
      s.component = c;
      std::sort(marks.begin(), marks.end(),
                [c](const auto& a, const auto& b) { return a.first[c] < b.first[c]; });
      std::optional<Interval> run;
      for (const auto& [lam, hit] : marks) {
        if (hit) {
          if (!run) run = Interval{lam[c], lam[c]};
          run->hi = lam[c];
        } else if (run) {
          s.intervals.push_back(*run);
          run.reset();
        }
      }
      if (run) s.intervals.push_back(*run);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

OracleCheck compare_with_oracle(const ProblemInstance& p, std::span<const double> x,
                                const OracleResult& oracle) {
  OracleCheck c;
  c.result = oracle;
  c.candidate_value = p.objective_value(x);
  if (!oracle.found || !oracle.strictly_feasible) return c;
  const double slack = 1e-6 * (1.0 + std::abs(c.candidate_value));
  c.conflict = oracle.best_value < c.candidate_value - slack;
  for (const auto& y : oracle.near_optimal) {
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d = std::max(d, std::abs(y[i] - x[i]));
    if (d > 1e-4) c.uniqueness_conflict = true;
  }
  return c;
}

Classification classify_report(const CertificationReport& r) {
  if (!r.feasibility.feasible) return Classification::Infeasible;
  if (r.sweep.empty()) return Classification::NotKKT;
  bool fired = false;
  bool unique = false;
  for (const auto& lv : r.sweep) {
    for (const auto& c : lv.results) {
      fired = fired || c.fired();
      unique = unique || c.verdict == Verdict::CertifiedUnique;
    }
  }
  if (!fired) return Classification::LocalOnly;
  if (r.oracle && r.oracle->conflict) return Classification::LocalOnly;
  if (unique && !(r.oracle && r.oracle->uniqueness_conflict)) {
    return Classification::CertifiedUniqueGlobal;
  }
  return Classification::CertifiedGlobal;
}

CertificationReport certify_candidate(const ProblemInstance& p, std::span<const double> x,
                                      const PipelineOptions& opts, const OracleResult* oracle) {
  CertificationReport rep;
  rep.kind = p.kind();
  rep.dim = p.dim();
  rep.num_constraints = p.num_constraints();
  rep.candidate.assign(x.begin(), x.end());
  rep.feasibility = feasibility(p, x, opts.tol);
  if (!rep.feasibility.feasible) {
    rep.note = "candidate is not feasible";
    rep.classification = classify_report(rep);
    return rep;
  }
  rep.objective_value = p.objective_value(x);
  rep.licq = licq_check(p, x, opts.tol);

  std::vector<MultiplierVector> lambdas;
  if (opts.lambda) {
    rep.lambda_fixed = true;
    const MultiplierVector lam(*opts.lambda, opts.tol.slackness);
    rep.necessary = necessary_condition(p, x, lam, opts.tol);
    try {
      require_kkt_pair(p, x, lam, opts.tol);
      lambdas.push_back(lam);
    } catch (const ContractError& e) {
      rep.note = e.what();
    }
  } else {
    rep.region = solve_multiplier_region(p, x, opts.tol);
    if (rep.region->shape == RegionShape::Empty) {
      rep.note = "no multiplier satisfies the local necessary condition";
    } else {
      const Vector probe = rep.region->box_free_multiplier
                               ? *rep.region->box_free_multiplier
                               : rep.region->vertices.front();
      rep.necessary =
          necessary_condition(p, x, MultiplierVector(probe, opts.tol.slackness), opts.tol);
      lambdas = sample_region(*rep.region, opts.sweep_points);
    }
  }

  for (const auto& lam : lambdas) {
    LambdaVerdicts lv;
    lv.lambda = lam;
    try {
      lv.results = certificates_at(p, x, lam, opts, lv.implication_inconsistent);
    } catch (const ContractError&) {
      continue;
    }
    rep.implication_inconsistent = rep.implication_inconsistent || lv.implication_inconsistent;
    rep.sweep.push_back(std::move(lv));
  }
  rep.certified = summarise(rep);

  if (opts.run_oracle && p.dim() <= kOracleMaxDim) {
    if (oracle) {
      rep.oracle = compare_with_oracle(p, x, *oracle);
    } else {
      const std::size_t grid = opts.grid.value_or(default_points_per_axis(p.box()));
      const std::size_t rounds =
          opts.refinement_rounds.value_or(default_refinement_rounds(p.box()));
      rep.oracle = compare_with_oracle(p, x, global_search(p, grid, rounds));
    }
  }
  rep.classification = classify_report(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json interval_json(const Interval& iv) {
  json hi = std::isinf(iv.hi) ? json("inf") : json(iv.hi);
  return json::array({iv.lo, hi});
}

json interval_list(const std::vector<Interval>& ivs) {
  json a = json::array();
  for (const auto& iv : ivs) a.push_back(interval_json(iv));
  return a;
}

}  // namespace

json to_json(const MultiplierRegion& r) {
  json j;
  j["shape"] = to_string(r.shape);
  j["active_constraints"] = r.active;
  j["projections"] = interval_list(r.projections);
  j["vertices"] = r.vertices;
  json hs = json::array();
  for (const auto& h : r.halfspaces) {
    hs.push_back(json{{"a", h.a}, {"b", h.b}, {"relation", h.equality ? "==" : "<="}});
  }
  j["halfspaces"] = hs;
  j["box_free_multiplier"] = r.box_free_multiplier ? json(*r.box_free_multiplier) : json(nullptr);
  if (r.shape == RegionShape::Point) j["point"] = r.point();
  return j;
}

json to_json(const CertificateResult& r) {
  json j{{"certificate", to_string(r.kind)},
         {"verdict", to_string(r.verdict)},
         {"lambda", r.lambda_used.lambdas}};
  if (r.witness) {
    j["witness"] = matrix_to_json(*r.witness);
    j["eigenvalues"] = eigs_sym(*r.witness);
    j["definiteness"] = to_string(r.spectrum->classification);
    j["tolerance"] = r.spectrum->tol;
  } else {
    j["lhs"] = r.lhs;
    j["rhs"] = std::isinf(r.rhs) ? json(fmt(r.rhs)) : json(r.rhs);
  }
  if (r.sample_argmin) j["sample_argmin"] = *r.sample_argmin;
  return j;
}

json to_json(const NecessaryVerdict& v) {
  json coords = json::array();
  for (const auto& c : v.per_coordinate) {
    coords.push_back(json{{"index", c.index},
                          {"provenance", to_string(c.provenance)},
                          {"lhs", c.lhs},
                          {"margin", c.margin},
                          {"informational", c.informational}});
  }
  return json{{"holds", v.holds}, {"worst_violation", v.worst_violation}, {"coordinates", coords}};
}

json to_json(const OracleResult& r) {
  json j{{"found", r.found},
         {"strictly_feasible", r.strictly_feasible},
         {"points_per_axis", r.points_per_axis},
         {"refinement_rounds", r.refinement_rounds},
         {"feasible_count", r.feasible_count}};
  if (r.found) {
    j["best_point"] = r.best_point.x;
    j["best_value"] = r.best_value;
    j["value_summary"] = json{{"min", r.values.min},
                              {"q1", r.values.q1},
                              {"median", r.values.median},
                              {"q3", r.values.q3},
                              {"max", r.values.max}};
    j["near_optimal_count"] = r.near_optimal.size();
  }
  return j;
}

json to_json(const CertificationReport& r) {
  json j;
  j["kind"] = to_string(r.kind);
  j["n"] = r.dim;
  j["m"] = r.num_constraints;
  j["candidate"] = r.candidate;
  j["objective_value"] = r.objective_value ? json(*r.objective_value) : json(nullptr);
  j["feasible"] = r.feasibility.feasible;
  j["constraint_values"] = r.feasibility.constraint_values;
  if (r.licq) {
    j["licq"] = json{{"holds", r.licq->holds},
                     {"rank", r.licq->rank},
                     {"columns", r.licq->columns},
                     {"singular_values", r.licq->singular_values}};
  }
  j["lambda_fixed"] = r.lambda_fixed;
  if (r.region) j["multiplier_region"] = to_json(*r.region);
  if (r.necessary) j["necessary"] = to_json(*r.necessary);
  json sweep = json::array();
  for (const auto& lv : r.sweep) {
    json results = json::array();
    for (const auto& c : lv.results) results.push_back(to_json(c));
    sweep.push_back(json{{"lambda", lv.lambda.lambdas},
                         {"results", results},
                         {"implication_inconsistent", lv.implication_inconsistent}});
  }
  j["sweep"] = sweep;
  json cert = json::array();
  for (const auto& s : r.certified) {
    cert.push_back(json{{"certificate", s.certificate},
                        {"component", s.component},
                        {"intervals", interval_list(s.intervals)},
                        {"bounding_box", interval_list(s.bounding_box)},
                        {"certified_samples", s.certified_samples},
                        {"total_samples", s.total_samples}});
  }
  j["certified_subregion"] = cert;
  if (r.oracle) {
    j["oracle"] = to_json(r.oracle->result);
    j["oracle_conflict"] = r.oracle->conflict;
    j["oracle_uniqueness_conflict"] = r.oracle->uniqueness_conflict;
  } else {
    j["oracle"] = nullptr;
    j["oracle_conflict"] = false;
  }
  j["implication_inconsistent"] = r.implication_inconsistent;
  j["classification"] = to_string(r.classification);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

// ---------------------------------------------------------------------------
// Text

std::string to_text(const MultiplierRegion& r) {
  std::ostringstream out;
  out << "multiplier region: " << to_string(r.shape);
  if (r.shape == RegionShape::Point) out << " " << fmt(r.point());
  out << "\n";
  for (std::size_t j = 0; j < r.projections.size(); ++j) {
    out << "  lambda_" << j + 1 << " in [" << fmt(r.projections[j].lo) << ", "
        << fmt(r.projections[j].hi) << "]"
        << (std::find(r.active.begin(), r.active.end(), j) == r.active.end() ? "  (inactive)" : "")
        << "\n";
  }
  if (r.box_free_multiplier) {
    out << "  stationary (box-free) multiplier: " << fmt(*r.box_free_multiplier) << "\n";
  }
  return out.str();
}

std::string to_text(const CertificationReport& r) {
  std::ostringstream out;
  out << "candidate " << fmt(r.candidate) << "  [" << to_string(r.kind) << ", n=" << r.dim
      << ", m=" << r.num_constraints << "]\n";
  if (!r.feasibility.feasible) {
    out << "  infeasible (violation " << fmt(r.feasibility.worst_violation) << ")\n";
  } else {
    out << "  objective value: " << fmt(*r.objective_value) << "\n";
    if (r.licq) {
      out << "  LICQ: " << (r.licq->holds ? "holds" : "fails") << " (rank " << r.licq->rank << " of "
          << r.licq->columns << ")\n";
    }
    if (r.region) {
      std::istringstream lines(to_text(*r.region));
      for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
    }
    if (r.necessary) {
      out << "  local necessary condition: " << (r.necessary->holds ? "holds" : "fails") << "\n";
    }
    if (!r.sweep.empty()) {
      out << "  certificates over " << r.sweep.size() << " multiplier sample(s):\n";
      for (const auto& s : r.certified) {
        out << "    " << s.certificate << ": fired at " << s.certified_samples << "/"
            << s.total_samples;
        if (!s.intervals.empty()) {
          out << ", lambda_" << s.component + 1 << " in";
          for (const auto& iv : s.intervals) out << " [" << fmt(iv.lo) << ", " << fmt(iv.hi) << "]";
        }
        out << "\n";
      }
      const LambdaVerdicts* shown = &r.sweep.front();
      if (r.region && r.region->box_free_multiplier) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& lv : r.sweep) {
          const double d = vec::norm_inf(vec::sub(lv.lambda.lambdas, *r.region->box_free_multiplier));
          if (d < best) {
            best = d;
            shown = &lv;
          }
        }
      }
      const auto& first = *shown;
      for (const auto& c : first.results) {
        out << "    at lambda " << fmt(first.lambda.lambdas) << ": " << to_string(c.kind) << " "
            << to_string(c.verdict);
        if (c.witness) {
          out << ", eigenvalues " << fmt(eigs_sym(*c.witness));
        } else {
          out << ", lhs " << fmt(c.lhs) << " rhs " << fmt(c.rhs);
        }
        out << "\n";
      }
    }
    if (r.oracle) {
      const auto& o = r.oracle->result;
      if (o.found) {
        out << "  oracle: best " << fmt(o.best_value) << " at " << fmt(o.best_point.x) << " ("
            << o.points_per_axis << " points/axis, " << o.refinement_rounds << " rounds)"
            << (r.oracle->conflict ? "  (better than the candidate)" : "") << "\n";
      } else {
        out << "  oracle: no feasible point found\n";
      }
    }
    if (r.implication_inconsistent) out << "  note: SC1RC certified while SC2RC is not\n";
  }
  if (!r.note.empty()) out << "  note: " << r.note << "\n";
  out << "  classification: " << to_string(r.classification) << "\n";
  return out.str();
}

}  // namespace gcert
