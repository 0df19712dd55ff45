#include "satseek/verify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace satseek {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

Eigen::VectorXd gaussian_direction(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (p + p.transpose()));
  require(eig.eigenvalues().minCoeff() > 0.0, "matrix must be positive definite");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

// Trajectory weights: the polytope vertices first, then seeded interior draws.
SimplexWeight trajectory_alpha(const PlantSpec& plant, int index, std::uint64_t seed) {
  const Eigen::Index vertices = plant.hessian.vertex_count();
  if (index < vertices) return SimplexWeight::vertex(vertices, index);
  return sample_simplex(vertices, seed + static_cast<std::uint64_t>(index));
}

}  // namespace

DecayReport lyapunov_decay(const PlantSpec& plant, const Eigen::MatrixXd& gain,
                           const Certificate& cert, int n_traj, double t_end,
                           const DecayOptions& options) {
  require(n_traj >= 1, "need at least one trajectory");
  const Eigen::Index n = plant.dim();
  const Eigen::MatrixXd p_inv_sqrt = inverse_sqrt(cert.P);
  const double kappa = cert.kappa();

  DecayReport report;
  report.required_rate = 2.0 * cert.eta;
  report.trajectories = n_traj;
  report.pass = true;
  report.worst_rate = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.seed);

  for (int traj = 0; traj < n_traj; ++traj) {
    const SimplexWeight alpha = trajectory_alpha(plant, traj, options.seed);
    const Eigen::VectorXd g0 = p_inv_sqrt * gaussian_direction(rng, n);
    const AverageTrace trace = simulate_average(plant, gain, alpha, g0, t_end, options.step);
    if (trace.diverged) {
      report.pass = false;
      report.invariance_ok = false;
      continue;
    }
    const double v0 = g0.dot(cert.P * g0);
    const double norm0 = g0.norm();
    for (Eigen::Index k = 1; k < trace.samples(); ++k) {
      const double t = trace.times[static_cast<std::size_t>(k)];
      const Eigen::VectorXd g = trace.g.row(k);
      const double v = g.dot(cert.P * g);
      const double v_bound = v0 * std::exp(-2.0 * cert.eta * t);
      const double v_excess = v / v_bound - 1.0;
      report.worst_v_excess = std::max(report.worst_v_excess, v_excess);
      const double norm_bound = kappa * std::exp(-cert.eta * t) * norm0;
      const double norm_excess = g.norm() / norm_bound - 1.0;
      report.worst_norm_excess = std::max(report.worst_norm_excess, norm_excess);
      if (v_excess > options.rate_tol || norm_excess > options.rate_tol) report.pass = false;
      if (v > v0 * (1.0 + options.rate_tol)) report.invariance_ok = false;
      if (v > 1e-280 * v0) {
        report.worst_rate = std::min(report.worst_rate, -std::log(v / v0) / t);
      }
    }
  }
  if (report.worst_rate < report.required_rate - options.rate_tol) report.pass = false;
  return report;
}

InvarianceReport ellipsoid_invariance(const PlantSpec& plant, const Eigen::MatrixXd& gain,
                                      const Certificate& cert, int n_traj,
                                      const DecayOptions& options) {
  require(n_traj >= 1, "need at least one trajectory");
  const Eigen::Index n = plant.dim();
  const Eigen::MatrixXd p_inv_sqrt = inverse_sqrt(cert.P);

  InvarianceReport report;
  report.trajectories = n_traj;
  report.pass = true;
  report.worst_sector_value = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.seed);

  const double t_end = 6.0 / cert.eta;  // several certified time constants
  for (int traj = 0; traj < n_traj; ++traj) {
    const SimplexWeight alpha = trajectory_alpha(plant, traj, options.seed);
    const Eigen::VectorXd g0 = p_inv_sqrt * gaussian_direction(rng, n);
    const AverageTrace trace = simulate_average(plant, gain, alpha, g0, t_end, options.step);
    if (trace.diverged) {
      report.pass = false;
      continue;
    }
    const double v0 = g0.dot(cert.P * g0);
    for (Eigen::Index k = 0; k < trace.samples(); ++k) {
      const Eigen::VectorXd g = trace.g.row(k);
      const double v = g.dot(cert.P * g);
      report.worst_excursion = std::max(report.worst_excursion, v - v0);
      if (v > v0 * (1.0 + options.rate_tol)) report.pass = false;
      const double sector = sector_value(cert, gain, plant.sat_limits, g);
      report.worst_sector_value = std::max(report.worst_sector_value, sector);
      if (sector > 1e-12) report.pass = false;
    }
  }
  return report;
}

SweepReport averaging_sweep(const SimConfig& base_cfg,
                            const std::vector<double>& omega_multipliers) {
  require(omega_multipliers.size() >= 3, "sweep needs at least 3 frequency points");
  for (std::size_t i = 1; i < omega_multipliers.size(); ++i) {
    require(omega_multipliers[i] > omega_multipliers[i - 1],
            "omega multipliers must be strictly increasing");
  }

  const Eigen::MatrixXd h = hessian_at(base_cfg.plant.hessian, base_cfg.alpha);
  const Eigen::MatrixXd h_inv = h.inverse();
  const Eigen::VectorXd theta_err0 = base_cfg.theta_hat0 - base_cfg.plant.optimizer;
  const Eigen::VectorXd g0 = h * theta_err0;

  SweepReport report;
  for (std::size_t idx = 0; idx < omega_multipliers.size(); ++idx) {
    const double mult = omega_multipliers[idx];
    const DitherSpec dither =
        base_cfg.dither.with_base_frequency(base_cfg.dither.base_frequency() * mult);
    const double step = default_step(dither);
    const SimConfig cfg(base_cfg.plant, dither, base_cfg.gain, base_cfg.alpha,
                        base_cfg.theta_hat0, base_cfg.t_end, step);
    const SimTrace full = simulate_full(cfg);
    const AverageTrace avg = simulate_average(base_cfg.plant, base_cfg.gain, base_cfg.alpha, g0,
                                              base_cfg.t_end, step);
    const PeriodInfo period = common_period(dither);
    report.omegas.push_back(period.base_frequency);
    if (full.diverged || avg.diverged) {
      report.diverged.push_back(static_cast<int>(idx));
      report.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double sup = 0.0;
    const Eigen::Index count = std::min(full.samples(), avg.samples());
    for (Eigen::Index k = 0; k < count; ++k) {
      const double t = full.times[static_cast<std::size_t>(k)];
      if (t < period.period) continue;  // transient skip of one common period
      const Eigen::VectorXd theta_err =
          full.theta_hat.row(k).transpose() - base_cfg.plant.optimizer;
      const Eigen::VectorXd theta_err_avg = h_inv * avg.g.row(k).transpose();
      sup = std::max(sup, (theta_err - theta_err_avg).norm());
    }
    report.residuals.push_back(sup);
  }

  // Least-squares slope of log(residual) vs log(omega) over clean runs.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    if (!std::isfinite(report.residuals[i]) || report.residuals[i] <= 0.0) continue;
    const double lx = std::log(report.omegas[i]);
    const double ly = std::log(report.residuals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  report.fitted_order =
      count >= 2 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;
  return report;
}

double dither_averaged_theta_error(const SimTrace& trace, const PlantSpec& plant,
                                   const PeriodInfo& period) {
  require(trace.samples() > 0, "empty trace");
  const double t_last = trace.times.back();
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index k = 0; k < trace.samples(); ++k) {
    if (trace.times[static_cast<std::size_t>(k)] < t_last - period.period) continue;
    sum += (trace.theta.row(k).transpose() - plant.optimizer).norm();
    ++count;
  }
  return sum / count;
}

double dither_averaged_y_error(const SimTrace& trace, const PlantSpec& plant,
                               const PeriodInfo& period) {
  require(trace.samples() > 0, "empty trace");
  const double t_last = trace.times.back();
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index k = 0; k < trace.samples(); ++k) {
    if (trace.times[static_cast<std::size_t>(k)] < t_last - period.period) continue;
    sum += std::abs(trace.y[k] - plant.optimum_value);
    ++count;
  }
  return sum / count;
}

GainComparison compare_gains(const SimConfig& cfg_a, const SimConfig& cfg_b,
                             const std::string& label_a, const std::string& label_b) {
  const PeriodInfo period = common_period(cfg_a.dither);
  GainComparison comparison;
  comparison.threshold = 3.0 * cfg_a.dither.amplitudes().cwiseAbs().maxCoeff();

  for (const auto& [cfg, label] :
       {std::pair<const SimConfig*, std::string>{&cfg_a, label_a}, {&cfg_b, label_b}}) {
    const SimTrace trace = simulate_full(*cfg);
    GainComparisonRow row;
    row.label = label;
    row.diverged = trace.diverged;
    row.final_error = trace.diverged ? std::numeric_limits<double>::infinity()
                                     : dither_averaged_theta_error(trace, cfg->plant, period);
    row.converged = !trace.diverged && row.final_error < comparison.threshold;
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

std::string SweepReport::to_csv() const {
  std::string out = "omega,residual\n";
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", omegas[i], residuals[i]);
    out += buf;
  }
  return out;
}

ConditionRatios condition_ratios(const Certificate& cert, const Eigen::MatrixXd& hessian,
                                 const Eigen::VectorXd& theta_err0) {
  ConditionRatios ratios;
  ratios.kappa = cert.kappa();
  const Eigen::MatrixXd p_bar = hessian.transpose() * cert.P * hessian;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (p_bar + p_bar.transpose()));
  ratios.kappa_bar = std::sqrt(eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(hessian);
  ratios.kappa_y = svd.singularValues()(0) * ratios.kappa_bar * ratios.kappa_bar *
                   theta_err0.squaredNorm();
  return ratios;
}

std::string GainComparison::to_csv() const {
  std::string out = "label,final_error,converged,diverged\n";
  for (const GainComparisonRow& row : rows) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", row.final_error);
    out += row.label + "," + buf + "," + (row.converged ? "true" : "false") + "," +
           (row.diverged ? "true" : "false") + "\n";
  }
  return out;
}

nlohmann::json to_json(const DecayReport& report) {
  return {{"worst_rate", report.worst_rate},
          {"required_rate", report.required_rate},
          {"pass", report.pass},
          {"trajectories", report.trajectories},
          {"worst_v_excess", report.worst_v_excess},
          {"worst_norm_excess", report.worst_norm_excess},
          {"invariance_ok", report.invariance_ok}};
}

nlohmann::json to_json(const InvarianceReport& report) {
  return {{"pass", report.pass},
          {"worst_excursion", report.worst_excursion},
          {"worst_sector_value", report.worst_sector_value},
          {"trajectories", report.trajectories}};
}

nlohmann::json to_json(const SweepReport& report) {
  return {{"omegas", report.omegas},
          {"residuals", report.residuals},
          {"fitted_order", report.fitted_order},
          {"diverged", report.diverged}};
}

nlohmann::json to_json(const GainComparison& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const GainComparisonRow& row : report.rows) {
    rows.push_back({{"label", row.label},
                    {"final_error", row.final_error},
                    {"converged", row.converged},
                    {"diverged", row.diverged}});
  }
  return {{"threshold", report.threshold}, {"rows", std::move(rows)}};
}

}  // namespace satseek
