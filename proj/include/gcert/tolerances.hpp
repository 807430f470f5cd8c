#pragma once

namespace gcert {

/// Numerical tolerances shared by all verdicts. Defaults are fixed so that
/// verdicts are reproducible across runs.
struct Tolerances {
  /// Distance within which a coordinate counts as sitting on u_i or v_i.
  double snap = 1e-9;
  /// Absolute slack allowed on functional constraints c_j(x) <= 0.
  double feasibility = 1e-8;
  /// Relative definiteness tolerance; the absolute value is psd_relative * (1 + ||M||_F).
  double psd_relative = 1e-9;
  /// Complementary slackness |lambda_j * c_j(x)| and interior stationarity.
  double slackness = 1e-8;
  /// Threshold on the left-hand sides of the local necessary conditions.
  double necessary = 1e-8;
};

}  // namespace gcert
