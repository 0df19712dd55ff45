#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "satseek/core_model.hpp"

using namespace satseek;

TEST_CASE("map_eval at the optimizer returns the optimum for any weight") {
  const PlantSpec plant = fixtures::plant();
  CHECK(map_eval(plant, SimplexWeight::vertex(2, 0), plant.optimizer) == doctest::Approx(10.0));
  CHECK(map_eval(plant, fixtures::mid_alpha(), plant.optimizer) == doctest::Approx(10.0));
}

TEST_CASE("map_eval quadratic-form values") {
  const PlantSpec plant = fixtures::plant();
  // Midpoint weight recovers the nominal Hessian.
  const SimplexWeight alpha = fixtures::mid_alpha();
  CHECK(map_eval(plant, alpha, Eigen::Vector2d(3.0, 4.0)) == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(map_eval(plant, alpha, Eigen::Vector2d(2.0, 5.0)) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("map_eval rejects dimension mismatch") {
  const PlantSpec plant = fixtures::plant();
  CHECK_THROWS_AS(static_cast<void>(map_eval(plant, fixtures::mid_alpha(), Eigen::Vector3d(1, 2, 3))),
                  std::invalid_argument);
}

TEST_CASE("hessian_at vertices and midpoint") {
  const PolytopicHessian hess = fixtures::hessian_polytope();
  CHECK((hessian_at(hess, SimplexWeight::vertex(2, 0)) - 0.9 * fixtures::h0()).norm() == 0.0);
  CHECK((hessian_at(hess, SimplexWeight::vertex(2, 1)) - 1.1 * fixtures::h0()).norm() == 0.0);
  CHECK((hessian_at(hess, fixtures::mid_alpha()) - fixtures::h0()).norm() <= 1e-13);
}

TEST_CASE("hessian_at eigenvalues stay within the vertex envelope") {
  const PolytopicHessian hess = fixtures::hessian_polytope();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lo(hess.vertex(0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hi(hess.vertex(1));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::MatrixXd h = hessian_at(hess, sample_simplex(2, seed));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    CHECK(eig.eigenvalues().minCoeff() >= lo.eigenvalues().minCoeff() - 1e-12);
    CHECK(eig.eigenvalues().maxCoeff() <= hi.eigenvalues().maxCoeff() + 1e-12);
  }
}

TEST_CASE("saturate clamps elementwise") {
  const Eigen::Vector2d limits(2.0, 2.0);
  CHECK(saturate(Eigen::Vector2d(3.0, -1.0), limits) == Eigen::Vector2d(2.0, -1.0));
  CHECK(saturate(Eigen::Vector2d(0.0, 0.0), limits) == Eigen::Vector2d(0.0, 0.0));
  CHECK(saturate(Eigen::Vector2d(-5.0, 2.0), limits) == Eigen::Vector2d(-2.0, 2.0));
}

TEST_CASE("deadzone values") {
  const Eigen::Vector2d limits(2.0, 2.0);
  CHECK(deadzone(Eigen::Vector2d(3.0, -1.0), limits) == Eigen::Vector2d(1.0, 0.0));
  CHECK(deadzone(Eigen::Vector2d(1.0, 1.0), limits) == Eigen::Vector2d(0.0, 0.0));
  CHECK(deadzone(Eigen::Vector2d(-5.0, 2.0), limits) == Eigen::Vector2d(-3.0, 0.0));
}

TEST_CASE("saturation is idempotent and splits u exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  const Eigen::Vector3d limits(0.5, 2.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector3d u(dist(rng), dist(rng), dist(rng));
    const Eigen::Vector3d sat = saturate(u, limits);
    CHECK(saturate(sat, limits) == sat);
    CHECK((sat + deadzone(u, limits)) == u);
    CHECK((sat.cwiseAbs().array() <= limits.array()).all());
  }
}

TEST_CASE("positive definiteness makes the optimum a global minimum") {
  const PlantSpec plant = fixtures::plant();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Eigen::Vector2d theta(dist(rng), dist(rng));
    const double y = map_eval(plant, sample_simplex(2, k), theta);
    CHECK(y >= plant.optimum_value);
    if ((theta - plant.optimizer).norm() > 1e-6) CHECK(y > plant.optimum_value);
  }
}

TEST_CASE("negative definiteness makes the optimum a global maximum") {
  // Maximization is the same machinery with the sign convention flipped.
  const PlantSpec plant(10.0, Eigen::Vector2d(2.0, 4.0),
                        PolytopicHessian({-fixtures::h0()}, Definiteness::Negative),
                        Eigen::Vector2d(2.0, 2.0));
  const SimplexWeight alpha = SimplexWeight::vertex(1, 0);
  CHECK(map_eval(plant, alpha, plant.optimizer) == doctest::Approx(10.0));
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector2d theta(dist(rng), dist(rng));
    CHECK(map_eval(plant, alpha, theta) <= plant.optimum_value);
  }
}

TEST_CASE("sample_simplex determinism and validity") {
  CHECK(sample_simplex(1, 42).weights() == Eigen::VectorXd::Ones(1));
  const SimplexWeight a = sample_simplex(2, 123);
  CHECK(a.weights().sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((a.weights().array() >= 0.0).all());
  CHECK(sample_simplex(3, 1).weights() == sample_simplex(3, 1).weights());
  CHECK(sample_simplex(3, 1).weights() != sample_simplex(3, 2).weights());
  CHECK_THROWS_AS(static_cast<void>(sample_simplex(0, 1)), std::invalid_argument);
}

TEST_CASE("constructors reject invalid inputs") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(PolytopicHessian({asym}, Definiteness::Positive), std::invalid_argument);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(PolytopicHessian({indefinite}, Definiteness::Positive), std::invalid_argument);
  CHECK_THROWS_AS(PolytopicHessian({indefinite}, Definiteness::Negative), std::invalid_argument);
  CHECK_NOTHROW(PolytopicHessian({-fixtures::h0()}, Definiteness::Negative));

  CHECK_THROWS_AS(PlantSpec(10.0, Eigen::Vector2d(2, 4), fixtures::hessian_polytope(),
                            Eigen::Vector2d(2.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(PlantSpec(10.0, Eigen::Vector3d(2, 4, 0), fixtures::hessian_polytope(),
                            Eigen::Vector2d(2.0, 2.0)),
                  std::invalid_argument);

  CHECK_THROWS_AS(SimplexWeight(Eigen::Vector2d(0.6, 0.6)), std::invalid_argument);
  CHECK_THROWS_AS(SimplexWeight(Eigen::Vector2d(1.2, -0.2)), std::invalid_argument);
}
