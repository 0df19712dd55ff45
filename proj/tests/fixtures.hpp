#pragma once

#include <Eigen/Dense>

#include "satseek/core_model.hpp"
#include "satseek/dither.hpp"

// Shared two-dimensional benchmark: quadratic map with optimum 10 at [2, 4],
// Hessian polytope (1 +- 0.1) * H0, actuator limits 2, two-tone dither
// (5, 7) * 10 rad/s with amplitude 0.1.
namespace fixtures {

inline Eigen::MatrixXd h0() {
  Eigen::MatrixXd h(2, 2);
  h << 100.0, 30.0, 30.0, 20.0;
  return h;
}

inline satseek::PolytopicHessian hessian_polytope() {
  return {{0.9 * h0(), 1.1 * h0()}, satseek::Definiteness::Positive};
}

inline satseek::PlantSpec plant() {
  return {10.0, Eigen::Vector2d(2.0, 4.0), hessian_polytope(), Eigen::Vector2d(2.0, 2.0)};
}

inline satseek::DitherSpec dither() {
  return {Eigen::Vector2d(0.1, 0.1),
          {satseek::Rational(5), satseek::Rational(7)},
          10.0};
}

inline Eigen::MatrixXd reference_gain() {
  // Known-feasible design for the benchmark polytope (regression anchor).
  Eigen::MatrixXd k(2, 2);
  k << -0.0662, 0.0666, 0.0960, -0.3655;
  return k;
}

inline satseek::SimplexWeight mid_alpha() {
  return satseek::SimplexWeight(Eigen::Vector2d(0.5, 0.5));
}

inline satseek::PolytopicHessian scalar_hessian(double value = 1.0) {
  Eigen::MatrixXd h(1, 1);
  h << value;
  return {{h}, satseek::Definiteness::Positive};
}

}  // namespace fixtures
