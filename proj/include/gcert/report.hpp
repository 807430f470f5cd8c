#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcert/certify.hpp"
#include "gcert/kkt.hpp"
#include "gcert/model.hpp"
#include "gcert/oracle.hpp"
#include "gcert/tolerances.hpp"

namespace gcert {

enum class Classification { CertifiedUniqueGlobal, CertifiedGlobal, LocalOnly, NotKKT, Infeasible };

const char* to_string(Classification c);

/// Certificate verdicts at one multiplier.
struct LambdaVerdicts {
  MultiplierVector lambda;
  std::vector<CertificateResult> results;
  /// SC1RC certified while SC2RC not (rho-convex kind only).
  bool implication_inconsistent = false;
};

/// Multipliers at which a certificate fired, summarised per certificate kind.
struct CertifiedSubregion {
  std::string certificate;
  /// Per free multiplier component: maximal runs of consecutive certified
  /// sweep values. Filled when exactly one component is free.
  std::size_t component = 0;
  std::vector<Interval> intervals;
  /// Bounding box of the certified samples (all components).
  std::vector<Interval> bounding_box;
  std::size_t certified_samples = 0;
  std::size_t total_samples = 0;
};

struct OracleCheck {
  OracleResult result;
  double candidate_value = 0.0;
  /// The oracle found a feasible point strictly better than the candidate.
  bool conflict = false;
  /// A near-optimal oracle point lies farther than 1e-4 from the candidate.
  bool uniqueness_conflict = false;
};

struct CertificationReport {
  ProblemKind kind = ProblemKind::Quadratic;
  std::size_t dim = 0;
  std::size_t num_constraints = 0;
  Vector candidate;
  std::optional<double> objective_value;
  FeasibilityReport feasibility;
  bool lambda_fixed = false;
  std::optional<MultiplierRegion> region;
  std::optional<NecessaryVerdict> necessary;  ///< at the fixed or box-free multiplier
  std::optional<LicqReport> licq;
  std::vector<LambdaVerdicts> sweep;
  std::vector<CertifiedSubregion> certified;
  std::optional<OracleCheck> oracle;
  bool implication_inconsistent = false;
  Classification classification = Classification::LocalOnly;
  std::string note;
};

struct PipelineOptions {
  Tolerances tol;
  std::optional<Vector> lambda;
  bool run_oracle = true;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> refinement_rounds;
  std::size_t sweep_points = 33;
  std::size_t sc_budget = 20000;
};

/// Runs the full pipeline for one candidate: feasibility, multipliers, local
/// condition, certificates over the multiplier sweep, and the oracle cross-check.
/// A precomputed oracle result may be passed to avoid repeated scans.
CertificationReport certify_candidate(const ProblemInstance& p, std::span<const double> x,
                                      const PipelineOptions& opts = {},
                                      const OracleResult* oracle = nullptr);

/// Classification from component results; a pure function of the report fields
/// (feasibility, region or fixed-multiplier verdict, sweep, oracle check).
Classification classify_report(const CertificationReport& r);

OracleCheck compare_with_oracle(const ProblemInstance& p, std::span<const double> x,
                                const OracleResult& oracle);

nlohmann::json to_json(const CertificationReport& r);
nlohmann::json to_json(const MultiplierRegion& r);
nlohmann::json to_json(const CertificateResult& r);
nlohmann::json to_json(const NecessaryVerdict& v);
nlohmann::json to_json(const OracleResult& r);

std::string to_text(const CertificationReport& r);
std::string to_text(const MultiplierRegion& r);

/// Formats a number compactly (up to 10 significant digits, "inf" for infinity).
std::string fmt(double v);
std::string fmt(const Vector& v);

}  // namespace gcert
