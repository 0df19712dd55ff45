#include <doctest.h>

#include <cmath>

#include "satseek/lmi.hpp"
#include "satseek/simulate.hpp"
#include "satseek/verify.hpp"

using namespace satseek;

// Three-dimensional smoke path: the whole pipeline is dimension-generic.
namespace {

Eigen::MatrixXd base_hessian() {
  Eigen::MatrixXd h(3, 3);
  h << 40.0, 8.0, 2.0,
       8.0, 25.0, 5.0,
       2.0, 5.0, 12.0;
  return h;
}

PolytopicHessian hessian_polytope() {
  return {{0.8 * base_hessian(), 1.2 * base_hessian()}, Definiteness::Positive};
}

PlantSpec plant() {
  return {3.0, Eigen::Vector3d(1.0, -2.0, 0.5), hessian_polytope(),
          Eigen::Vector3d(1.5, 1.5, 1.5)};
}

DitherSpec dither() {
  return {Eigen::Vector3d(0.1, 0.1, 0.1),
          {Rational(5), Rational(7), Rational(11)},
          10.0};
}

}  // namespace

TEST_CASE("three-tone frequency set is admissible and periodic") {
  CHECK(validate_frequencies({Rational(5), Rational(7), Rational(11)}).valid);
  const PeriodInfo period = common_period(dither());
  CHECK(period.base_frequency == doctest::Approx(10.0));

  const Eigen::MatrixXd d_avg =
      signal_average([&](double t) { return delta_matrix(dither(), 3, t); }, period);
  CHECK(d_avg.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("three-dimensional synthesis cross-validates and decays") {
  SynthesisOptions options;
  options.eta = 0.5;
  options.epsilon = 0.5;
  const SynthesisResult result =
      solve_synthesis(hessian_polytope(), Eigen::Vector3d(1.5, 1.5, 1.5), options);
  REQUIRE(result.feasible());
  REQUIRE(result.certificate.has_value());
  CHECK(result.analysis_report.worst() < 0.0);
  CHECK(result.inclusion_report.pass);
  CHECK((result.gain * result.slack - result.Z).cwiseAbs().maxCoeff() <= 1e-8);

  const DecayReport decay = lyapunov_decay(plant(), result.gain, *result.certificate, 8, 6.0);
  CHECK(decay.pass);
  CHECK(decay.invariance_ok);
}

TEST_CASE("three-dimensional gradient identity and loop invariants") {
  const PlantSpec p = plant();
  const DitherSpec d = dither();
  const SimplexWeight alpha(Eigen::Vector2d(0.3, 0.7));
  for (std::uint64_t k = 0; k < 100; ++k) {
    const SimplexWeight a = sample_simplex(2, k);
    const Eigen::Vector3d theta_tilde(0.3 * std::sin(0.7 * k), 0.2 * std::cos(1.3 * k),
                                      0.1 * std::sin(2.1 * k + 0.5));
    const double t = 0.05 * static_cast<double>(k);
    const Eigen::VectorXd direct =
        gradient_estimate(p, d, a, p.optimizer + theta_tilde, t);
    const Eigen::VectorXd expanded = expanded_gradient(p, d, a, theta_tilde, t);
    CHECK((direct - expanded).cwiseAbs().maxCoeff() <= 1e-10);
  }

  const SimConfig cfg(p, d, -0.002 * Eigen::MatrixXd::Identity(3, 3), alpha,
                      Eigen::Vector3d(1.2, -1.7, 0.6), 1.0, default_step(d));
  const SimTrace trace = simulate_full(cfg);
  REQUIRE_FALSE(trace.diverged);
  for (Eigen::Index k = 0; k < trace.samples(); ++k) {
    CHECK((trace.u_sat.row(k).transpose().cwiseAbs().array() <= p.sat_limits.array()).all());
  }
}
