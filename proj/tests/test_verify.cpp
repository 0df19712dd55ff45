#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "satseek/verify.hpp"

using namespace satseek;

namespace {

PlantSpec scalar_plant(double limit) {
  Eigen::MatrixXd h(1, 1);
  h << 1.0;
  return {0.0, Eigen::VectorXd::Zero(1), PolytopicHessian({h}, Definiteness::Positive),
          Eigen::VectorXd::Constant(1, limit)};
}

SimConfig smooth_config(double t_end, const Eigen::Vector2d& theta0, double amplitude) {
  // Rail-free loop: raw inputs stay inside the actuator limits, which is the
  // regime where the averaged model provably tracks the full loop.
  const DitherSpec dither =
      fixtures::dither().with_amplitudes(Eigen::Vector2d(amplitude, amplitude));
  const Eigen::MatrixXd gain = -0.003 * Eigen::MatrixXd::Identity(2, 2);
  return {fixtures::plant(), dither, gain, SimplexWeight::vertex(2, 0),
          theta0,            t_end,  default_step(dither)};
}

}  // namespace

TEST_CASE("scalar closed-form decay passes with rate near 2") {
  // H=1, K=-1, large limits: V(t) = V(0) e^{-2t} while eta = 0.1 only needs
  // e^{-0.2 t}.
  const PlantSpec plant = scalar_plant(1e9);
  const Eigen::MatrixXd gain = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const AnalysisResult analysis =
      solve_analysis(plant.hessian, gain, 0.1, plant.sat_limits);
  REQUIRE(analysis.feasible());

  const DecayReport report = lyapunov_decay(plant, gain, *analysis.certificate, 8, 4.0);
  CHECK(report.pass);
  CHECK(report.required_rate == doctest::Approx(0.2));
  CHECK(report.worst_rate == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(report.invariance_ok);
}

TEST_CASE("zero initial state is a trivial pass") {
  const PlantSpec plant = scalar_plant(1e9);
  const Eigen::MatrixXd gain = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const AnalysisResult analysis = solve_analysis(plant.hessian, gain, 0.1, plant.sat_limits);
  REQUIRE(analysis.feasible());
  const AverageTrace trace = simulate_average(plant, gain, SimplexWeight::vertex(1, 0),
                                              Eigen::VectorXd::Zero(1), 1.0, 1e-3);
  CHECK(trace.g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("benchmark certificate decays and stays inside the ellipsoid") {
  SynthesisOptions options;
  const SynthesisResult synth =
      solve_synthesis(fixtures::hessian_polytope(), Eigen::Vector2d(2.0, 2.0), options);
  REQUIRE(synth.feasible());
  const PlantSpec plant = fixtures::plant();

  const DecayReport decay = lyapunov_decay(plant, synth.gain, *synth.certificate, 16, 6.0);
  CHECK(decay.pass);
  CHECK(decay.invariance_ok);
  CHECK(decay.worst_rate >= decay.required_rate - 1e-3);

  const InvarianceReport invariance =
      ellipsoid_invariance(plant, synth.gain, *synth.certificate, 16);
  CHECK(invariance.pass);
  CHECK(invariance.worst_excursion <= 1e-9);
  CHECK(invariance.worst_sector_value <= 1e-12);
}

TEST_CASE("V decreases monotonically along a certified averaged trajectory") {
  const PlantSpec plant = fixtures::plant();
  const AnalysisResult analysis = solve_analysis(plant.hessian, fixtures::reference_gain(), 1.0,
                                                 plant.sat_limits);
  REQUIRE(analysis.feasible());
  const Certificate& cert = *analysis.certificate;

  // Start inside the certified ellipsoid, slightly off the boundary.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cert.P);
  const Eigen::VectorXd g0 =
      0.9 * eig.operatorInverseSqrt() * Eigen::Vector2d(0.6, -0.8);
  const AverageTrace trace = simulate_average(plant, fixtures::reference_gain(),
                                              SimplexWeight::vertex(2, 1), g0, 4.0, 1e-3);
  REQUIRE_FALSE(trace.diverged);
  double previous = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < trace.samples(); ++k) {
    const Eigen::VectorXd g = trace.g.row(k);
    const double v = g.dot(cert.P * g);
    CHECK(v <= previous * (1.0 + 1e-12));
    previous = v;
  }
}

TEST_CASE("averaging sweep shows the reciprocal-frequency order in the smooth regime") {
  const SimConfig base = smooth_config(30.0, Eigen::Vector2d(2.2, 4.3), 0.1);
  const SweepReport report = averaging_sweep(base, {1.0, 2.0, 4.0});
  REQUIRE(report.residuals.size() == 3);
  CHECK(report.diverged.empty());
  for (double r : report.residuals) CHECK(r > 0.0);
  CHECK(report.residuals[1] < report.residuals[0]);
  CHECK(report.residuals[2] < report.residuals[1]);
  CHECK(report.fitted_order <= -0.7);
}

TEST_CASE("sweep rejects unusable multiplier lists") {
  const SimConfig base = smooth_config(1.0, Eigen::Vector2d(2.2, 4.3), 0.1);
  CHECK_THROWS_AS(static_cast<void>(averaging_sweep(base, {1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(averaging_sweep(base, {1.0, 1.0, 2.0})), std::invalid_argument);
}

TEST_CASE("gain comparison with identical gains is deterministic") {
  const SimConfig cfg = smooth_config(2.0, Eigen::Vector2d(2.2, 4.3), 0.1);
  const GainComparison comparison = compare_gains(cfg, cfg, "a", "b");
  REQUIRE(comparison.rows.size() == 2);
  CHECK(comparison.rows[0].final_error == comparison.rows[1].final_error);
  CHECK(comparison.threshold == doctest::Approx(0.3));
  const std::string csv = comparison.to_csv();
  CHECK(csv.find("label,final_error,converged,diverged") == 0);
}

TEST_CASE("dither-averaged errors on a frozen loop") {
  // Zero gain: theta_hat stays put, theta oscillates around it.
  const DitherSpec dither = fixtures::dither();
  const SimConfig cfg(fixtures::plant(), dither, Eigen::MatrixXd::Zero(2, 2),
                      SimplexWeight::vertex(2, 0), Eigen::Vector2d(2.0, 4.0), 2.0,
                      default_step(dither));
  const SimTrace trace = simulate_full(cfg);
  const PeriodInfo period = common_period(dither);
  // ||theta - optimizer|| = ||S(t)||, mean around 0.9 * amplitude * sqrt(2)-ish.
  const double theta_err = dither_averaged_theta_error(trace, cfg.plant, period);
  CHECK(theta_err > 0.05);
  CHECK(theta_err < 0.15);
  // |y - optimum| = 0.5 S' H S = O(a^2 H).
  const double y_err = dither_averaged_y_error(trace, cfg.plant, period);
  CHECK(y_err > 0.05);
  CHECK(y_err < 0.5);
}

TEST_CASE("condition ratios from the certificate") {
  Certificate cert;
  cert.P = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  cert.L = Eigen::MatrixXd::Zero(2, 2);
  cert.U = Eigen::MatrixXd::Identity(2, 2);
  cert.eta = 1.0;
  const Eigen::MatrixXd h = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  const ConditionRatios ratios = condition_ratios(cert, h, Eigen::Vector2d(1.0, 0.0));
  CHECK(ratios.kappa == doctest::Approx(2.0));
  // H' P H = diag(4, 4): spread 1.
  CHECK(ratios.kappa_bar == doctest::Approx(1.0));
  // ||H|| * kappa_bar^2 * ||theta_err0||^2 = 2.
  CHECK(ratios.kappa_y == doctest::Approx(2.0));
}

TEST_CASE("sweep report serializes to csv") {
  SweepReport report;
  report.omegas = {10.0, 20.0};
  report.residuals = {0.5, 0.25};
  report.fitted_order = -1.0;
  const std::string csv = report.to_csv();
  CHECK(csv.find("omega,residual\n") == 0);
  CHECK(csv.find("10,0.5") != std::string::npos);
}

TEST_CASE("reports serialize to json") {
  const PlantSpec plant = scalar_plant(1e9);
  const Eigen::MatrixXd gain = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const AnalysisResult analysis = solve_analysis(plant.hessian, gain, 0.1, plant.sat_limits);
  REQUIRE(analysis.feasible());
  const DecayReport decay = lyapunov_decay(plant, gain, *analysis.certificate, 4, 2.0);
  const nlohmann::json j = to_json(decay);
  CHECK(j.contains("worst_rate"));
  CHECK(j.contains("required_rate"));
  CHECK(j["trajectories"] == 4);
}
