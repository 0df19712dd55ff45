#include "satseek/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace satseek {

namespace {

constexpr double kDivergenceBound = 1e9;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

bool finite_and_bounded(const Eigen::VectorXd& v) {
  return v.allFinite() && v.cwiseAbs().maxCoeff() <= kDivergenceBound;
}

void append_csv_value(std::string& line, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  line += buf;
}

}  // namespace

double default_step(const DitherSpec& dither) {
  return 2.0 * std::numbers::pi / dither.max_frequency() / 40.0;
}

SimConfig::SimConfig(PlantSpec plant_in, DitherSpec dither_in, Eigen::MatrixXd gain_in,
                     SimplexWeight alpha_in, Eigen::VectorXd theta_hat0_in, double t_end_in,
                     double step_in)
    : plant(std::move(plant_in)),
      dither(std::move(dither_in)),
      gain(std::move(gain_in)),
      alpha(std::move(alpha_in)),
      theta_hat0(std::move(theta_hat0_in)),
      t_end(t_end_in),
      step(step_in) {
  const Eigen::Index n = plant.dim();
  require(dither.n() == n, "dither dimension must match the plant");
  require(gain.rows() == n && gain.cols() == n, "gain must be n x n");
  require(alpha.size() == plant.hessian.vertex_count(), "alpha size must match the polytope");
  require(theta_hat0.size() == n, "initial state dimension mismatch");
  require(step > 0.0, "step must be positive");
  // At least 20 samples of the fastest tone, or demodulation aliases.
  require(step <= 2.0 * std::numbers::pi / dither.max_frequency() / 20.0,
          "step too coarse for the fastest dither tone");
  require(t_end >= 0.0, "t_end must be nonnegative");
}

Eigen::VectorXd gradient_estimate(const PlantSpec& plant, const DitherSpec& dither,
                                  const SimplexWeight& alpha, const Eigen::VectorXd& theta_hat,
                                  double t) {
  const double y = map_eval(plant, alpha, theta_hat + probe_signal(dither, t));
  return demod_signal(dither, t) * y;
}

Eigen::VectorXd expanded_gradient(const PlantSpec& plant, const DitherSpec& dither,
                                  const SimplexWeight& alpha, const Eigen::VectorXd& theta_tilde,
                                  double t) {
  require(theta_tilde.size() == plant.dim(), "error coordinate dimension mismatch");
  const Eigen::MatrixXd h = hessian_at(plant.hessian, alpha);
  const Eigen::VectorXd m = demod_signal(dither, t);
  const Eigen::VectorXd s = probe_signal(dither, t);
  const Eigen::MatrixXd omega =
      (Eigen::MatrixXd::Identity(plant.dim(), plant.dim()) + delta_matrix(dither, plant.dim(), t)) *
      h;
  return m * plant.optimum_value + 0.5 * m * theta_tilde.dot(h * theta_tilde) +
         omega * theta_tilde + 0.5 * omega * s;
}

SimTrace simulate_full(const SimConfig& cfg) {
  const Eigen::Index n = cfg.plant.dim();
  const Eigen::MatrixXd h = hessian_at(cfg.plant.hessian, cfg.alpha);
  const Eigen::VectorXd& limits = cfg.plant.sat_limits;

  const auto raw_input = [&](double t, const Eigen::VectorXd& theta_hat) -> Eigen::VectorXd {
    const Eigen::VectorXd d = theta_hat + probe_signal(cfg.dither, t) - cfg.plant.optimizer;
    const double y = cfg.plant.optimum_value + 0.5 * d.dot(h * d);
    return cfg.gain * (demod_signal(cfg.dither, t) * y);
  };
  const auto field = [&](double t, const Eigen::VectorXd& theta_hat) -> Eigen::VectorXd {
    return saturate(raw_input(t, theta_hat), limits);
  };

  const auto steps = static_cast<Eigen::Index>(std::ceil(cfg.t_end / cfg.step - 1e-9));
  SimTrace trace;
  trace.times.reserve(static_cast<std::size_t>(steps) + 1);
  trace.theta_hat.resize(steps + 1, n);
  trace.theta.resize(steps + 1, n);
  trace.u.resize(steps + 1, n);
  trace.u_sat.resize(steps + 1, n);
  trace.g_hat.resize(steps + 1, n);
  trace.y.resize(steps + 1);

  Eigen::VectorXd theta_hat = cfg.theta_hat0;
  Eigen::Index row = 0;
  for (Eigen::Index k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.step;
    const Eigen::VectorXd s = probe_signal(cfg.dither, t);
    const Eigen::VectorXd theta = theta_hat + s;
    const Eigen::VectorXd d = theta - cfg.plant.optimizer;
    const double y = cfg.plant.optimum_value + 0.5 * d.dot(h * d);
    const Eigen::VectorXd g = demod_signal(cfg.dither, t) * y;
    const Eigen::VectorXd u = cfg.gain * g;

    trace.times.push_back(t);
    trace.theta_hat.row(row) = theta_hat;
    trace.theta.row(row) = theta;
    trace.u.row(row) = u;
    trace.u_sat.row(row) = saturate(u, limits);
    trace.g_hat.row(row) = g;
    trace.y[row] = y;
    ++row;

    if (k == steps) break;

    const Eigen::VectorXd k1 = field(t, theta_hat);
    const Eigen::VectorXd k2 = field(t + 0.5 * cfg.step, theta_hat + 0.5 * cfg.step * k1);
    const Eigen::VectorXd k3 = field(t + 0.5 * cfg.step, theta_hat + 0.5 * cfg.step * k2);
    const Eigen::VectorXd k4 = field(t + cfg.step, theta_hat + cfg.step * k3);
    theta_hat += cfg.step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!finite_and_bounded(theta_hat)) {
      trace.diverged = true;
      trace.divergence_time = t + cfg.step;
      break;
    }
  }

  trace.theta_hat.conservativeResize(row, n);
  trace.theta.conservativeResize(row, n);
  trace.u.conservativeResize(row, n);
  trace.u_sat.conservativeResize(row, n);
  trace.g_hat.conservativeResize(row, n);
  trace.y.conservativeResize(row);
  return trace;
}

AverageTrace simulate_average(const PlantSpec& plant, const Eigen::MatrixXd& gain,
                              const SimplexWeight& alpha, const Eigen::VectorXd& g0, double t_end,
                              double step) {
  const Eigen::Index n = plant.dim();
  require(gain.rows() == n && gain.cols() == n, "gain must be n x n");
  require(g0.size() == n, "initial state dimension mismatch");
  require(step > 0.0 && t_end >= 0.0, "invalid horizon");

  const Eigen::MatrixXd h = hessian_at(plant.hessian, alpha);
  const auto field = [&](const Eigen::VectorXd& g) -> Eigen::VectorXd {
    return h * saturate(gain * g, plant.sat_limits);
  };

  const auto steps = static_cast<Eigen::Index>(std::ceil(t_end / step - 1e-9));
  AverageTrace trace;
  trace.times.reserve(static_cast<std::size_t>(steps) + 1);
  trace.g.resize(steps + 1, n);

  Eigen::VectorXd g = g0;
  Eigen::Index row = 0;
  for (Eigen::Index k = 0;; ++k) {
    trace.times.push_back(static_cast<double>(k) * step);
    trace.g.row(row) = g;
    ++row;
    if (k == steps) break;

    const Eigen::VectorXd k1 = field(g);
    const Eigen::VectorXd k2 = field(g + 0.5 * step * k1);
    const Eigen::VectorXd k3 = field(g + 0.5 * step * k2);
    const Eigen::VectorXd k4 = field(g + step * k3);
    g += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!finite_and_bounded(g)) {
      trace.diverged = true;
      trace.divergence_time = static_cast<double>(k + 1) * step;
      break;
    }
  }
  trace.g.conservativeResize(row, n);
  return trace;
}

SimTrace to_tau(const SimTrace& trace, const PeriodInfo& period) {
  SimTrace out = trace;
  for (double& t : out.times) t *= period.base_frequency;
  out.divergence_time *= period.base_frequency;
  return out;
}

SimTrace from_tau(const SimTrace& trace, const PeriodInfo& period) {
  SimTrace out = trace;
  for (double& t : out.times) t /= period.base_frequency;
  out.divergence_time /= period.base_frequency;
  return out;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  const Eigen::Index n = trace.theta_hat.cols();
  std::string line = "t";
  const auto add_cols = [&](const char* stem) {
    for (Eigen::Index i = 1; i <= n; ++i) {
      line += ",";
      line += stem;
      line += "_";
      line += std::to_string(i);
    }
  };
  add_cols("theta_hat");
  add_cols("theta");
  add_cols("u");
  add_cols("usat");
  add_cols("ghat");
  line += ",y\n";
  out << line;

  for (Eigen::Index r = 0; r < trace.samples(); ++r) {
    line.clear();
    append_csv_value(line, trace.times[static_cast<std::size_t>(r)]);
    const auto add_row = [&](const Eigen::MatrixXd& m) {
      for (Eigen::Index c = 0; c < n; ++c) {
        line += ',';
        append_csv_value(line, m(r, c));
      }
    };
    add_row(trace.theta_hat);
    add_row(trace.theta);
    add_row(trace.u);
    add_row(trace.u_sat);
    add_row(trace.g_hat);
    line += ',';
    append_csv_value(line, trace.y[r]);
    line += '\n';
    out << line;
  }
}

}  // namespace satseek
