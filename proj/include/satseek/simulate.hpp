#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "satseek/core_model.hpp"
#include "satseek/dither.hpp"

namespace satseek {

// Default integration step: 40 samples of the fastest dither tone.
[[nodiscard]] double default_step(const DitherSpec& dither);

// Everything needed to run the closed loop once.
struct SimConfig {
  SimConfig(PlantSpec plant, DitherSpec dither, Eigen::MatrixXd gain, SimplexWeight alpha,
            Eigen::VectorXd theta_hat0, double t_end, double step);

  PlantSpec plant;
  DitherSpec dither;
  Eigen::MatrixXd gain;          // K
  SimplexWeight alpha;           // true Hessian weight used by the map
  Eigen::VectorXd theta_hat0;    // integrator initial state
  double t_end;
  double step;
};

// Time-indexed record of the loop signals, rows = samples. theta is exactly
// theta_hat + S(t) at every sample time; u_sat respects the limits exactly.
struct SimTrace {
  std::vector<double> times;
  Eigen::MatrixXd theta_hat;
  Eigen::MatrixXd theta;
  Eigen::MatrixXd u;
  Eigen::MatrixXd u_sat;
  Eigen::MatrixXd g_hat;
  Eigen::VectorXd y;
  bool diverged = false;   // a state component exceeded the divergence bound
  double divergence_time = 0.0;

  [[nodiscard]] Eigen::Index samples() const { return static_cast<Eigen::Index>(times.size()); }
};

// Trace of the averaged gradient state.
struct AverageTrace {
  std::vector<double> times;
  Eigen::MatrixXd g;  // rows = samples
  bool diverged = false;
  double divergence_time = 0.0;

  [[nodiscard]] Eigen::Index samples() const { return static_cast<Eigen::Index>(times.size()); }
};

// G_hat(t) = M(t) * y(theta_hat + S(t)).
[[nodiscard]] Eigen::VectorXd gradient_estimate(const PlantSpec& plant, const DitherSpec& dither,
                                                const SimplexWeight& alpha,
                                                const Eigen::VectorXd& theta_hat, double t);

// Four-term expansion of the same quantity in the error coordinate
// theta_tilde = theta_hat - optimizer, using Omega(t) = (I + Delta(t)) H.
// Agrees with gradient_estimate identically (to roundoff).
[[nodiscard]] Eigen::VectorXd expanded_gradient(const PlantSpec& plant, const DitherSpec& dither,
                                                const SimplexWeight& alpha,
                                                const Eigen::VectorXd& theta_tilde, double t);

// Fixed-step RK4 integration of theta_hat' = sat(K M(t) y(t)). Deterministic;
// stops early with a divergence report if any state magnitude exceeds 1e9.
[[nodiscard]] SimTrace simulate_full(const SimConfig& cfg);

// Fixed-step RK4 integration of the averaged state g' = H(alpha) sat(K g),
// in original time.
[[nodiscard]] AverageTrace simulate_average(const PlantSpec& plant, const Eigen::MatrixXd& gain,
                                            const SimplexWeight& alpha, const Eigen::VectorXd& g0,
                                            double t_end, double step);

// Relabel sample times by tau = omega * t; values unchanged.
[[nodiscard]] SimTrace to_tau(const SimTrace& trace, const PeriodInfo& period);
[[nodiscard]] SimTrace from_tau(const SimTrace& trace, const PeriodInfo& period);

// CSV export, one row per sample, 12 significant digits.
// Columns: t, theta_hat_1..n, theta_1..n, u_1..n, usat_1..n, ghat_1..n, y.
void write_trace_csv(const SimTrace& trace, std::ostream& out);

}  // namespace satseek
