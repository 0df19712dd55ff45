#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "satseek/lmi.hpp"
#include "satseek/simulate.hpp"

namespace satseek {

// Empirical check of the certified exponential decay on the averaged system.
struct DecayReport {
  double worst_rate = 0.0;     // smallest observed -log(V(t)/V(0))/t
  double required_rate = 0.0;  // 2*eta for the Lyapunov value
  bool pass = false;
  int trajectories = 0;
  double worst_v_excess = 0.0;     // max of V(t)/(V(0) e^{-2 eta t}) - 1
  double worst_norm_excess = 0.0;  // max of ||g(t)||/(kappa e^{-eta t} ||g0||) - 1
  bool invariance_ok = true;       // no trajectory left the ellipsoid
};

struct DecayOptions {
  double step = 1e-3;
  double rate_tol = 1e-3;
  std::uint64_t seed = 0;
};

// Samples initial states on the ellipsoid boundary (vertex weights first,
// then random interior weights for the true Hessian), integrates the averaged
// field, and checks V(t) <= V(0) e^{-2 eta t} (1 + tol) together with the
// kappa-scaled norm bound at every sample.
[[nodiscard]] DecayReport lyapunov_decay(const PlantSpec& plant, const Eigen::MatrixXd& gain,
                                         const Certificate& cert, int n_traj, double t_end,
                                         const DecayOptions& options = {});

struct InvarianceReport {
  bool pass = false;
  double worst_excursion = 0.0;      // max over samples of V(t) - V(0), clipped at 0
  double worst_sector_value = 0.0;   // max of psi' U (psi - L g) along trajectories
  int trajectories = 0;
};

// Trajectories from the ellipsoid boundary must stay inside, and the
// dead-zone sector bound must hold at every sample.
[[nodiscard]] InvarianceReport ellipsoid_invariance(const PlantSpec& plant,
                                                    const Eigen::MatrixXd& gain,
                                                    const Certificate& cert, int n_traj,
                                                    const DecayOptions& options = {});

struct SweepReport {
  std::vector<double> omegas;     // effective fundamental frequencies
  std::vector<double> residuals;  // sup-norm deviation after the transient skip
  double fitted_order = 0.0;      // log-log slope
  std::vector<int> diverged;      // indices of runs excluded for divergence

  [[nodiscard]] std::string to_csv() const;
};

// For each multiplier, scales the dither base frequency, runs the full loop
// and the averaged loop from matched initial conditions (g0 = H * theta_err0),
// and records sup_t || theta_err(t) - H^-1 g_av(t) || after skipping one
// common period. Fits log(residual) against log(omega).
[[nodiscard]] SweepReport averaging_sweep(const SimConfig& base_cfg,
                                          const std::vector<double>& omega_multipliers);

struct GainComparisonRow {
  std::string label;
  double final_error = 0.0;  // dither-averaged ||theta - optimizer|| over the last period
  bool converged = false;
  bool diverged = false;
};

struct GainComparison {
  std::vector<GainComparisonRow> rows;
  double threshold = 0.0;  // convergence bound: 3 * max amplitude

  [[nodiscard]] std::string to_csv() const;
};

// Runs both configurations (shared plant/dither assumed) and reports the
// dither-averaged final errors with converged/not-converged verdicts.
[[nodiscard]] GainComparison compare_gains(const SimConfig& cfg_a, const SimConfig& cfg_b,
                                           const std::string& label_a = "gain_a",
                                           const std::string& label_b = "gain_b");

// Mean of ||theta(t) - optimizer|| over the trailing common period.
[[nodiscard]] double dither_averaged_theta_error(const SimTrace& trace, const PlantSpec& plant,
                                                 const PeriodInfo& period);
// Mean of |y(t) - optimum| over the trailing common period.
[[nodiscard]] double dither_averaged_y_error(const SimTrace& trace, const PlantSpec& plant,
                                             const PeriodInfo& period);

// Condition ratios tied to a certificate: kappa for the gradient coordinate
// (sqrt of the eigenvalue spread of P), kappa_bar for the error coordinate
// (same for H' P H), and the output constant ||H|| kappa_bar^2 ||theta_err0||^2.
struct ConditionRatios {
  double kappa = 0.0;
  double kappa_bar = 0.0;
  double kappa_y = 0.0;
};

[[nodiscard]] ConditionRatios condition_ratios(const Certificate& cert,
                                               const Eigen::MatrixXd& hessian,
                                               const Eigen::VectorXd& theta_err0);

[[nodiscard]] nlohmann::json to_json(const DecayReport& report);
[[nodiscard]] nlohmann::json to_json(const InvarianceReport& report);
[[nodiscard]] nlohmann::json to_json(const SweepReport& report);
[[nodiscard]] nlohmann::json to_json(const GainComparison& report);

}  // namespace satseek
