#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace satseek {

enum class Definiteness { Positive, Negative };

// Point of the unit simplex: weights >= 0, sum == 1 (tolerance 1e-12).
class SimplexWeight {
 public:
  explicit SimplexWeight(Eigen::VectorXd weights);

  [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }
  [[nodiscard]] Eigen::Index size() const { return weights_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return weights_[i]; }

  // Vertex indicator e_i.
  [[nodiscard]] static SimplexWeight vertex(Eigen::Index count, Eigen::Index index);

 private:
  Eigen::VectorXd weights_;
};

// Convex hull of known symmetric definite vertex matrices. Every convex
// combination inherits the declared definiteness sign, so validating the
// vertices at construction covers the whole polytope.
class PolytopicHessian {
 public:
  PolytopicHessian(std::vector<Eigen::MatrixXd> vertices, Definiteness sign);

  [[nodiscard]] Eigen::Index dim() const { return vertices_.front().rows(); }
  [[nodiscard]] Eigen::Index vertex_count() const {
    return static_cast<Eigen::Index>(vertices_.size());
  }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& vertices() const { return vertices_; }
  [[nodiscard]] const Eigen::MatrixXd& vertex(Eigen::Index i) const {
    return vertices_.at(static_cast<std::size_t>(i));
  }
  [[nodiscard]] Definiteness definiteness_sign() const { return sign_; }

  // Largest spectral norm over the vertices; used to scale LMI margins.
  [[nodiscard]] double max_vertex_norm() const;

 private:
  std::vector<Eigen::MatrixXd> vertices_;
  Definiteness sign_;
};

// Static quadratic map plus actuator limits: everything the loop needs to
// know about the plant. The optimum value and optimizer are "unknown" to the
// controller and only consumed by simulation and verification.
struct PlantSpec {
  PlantSpec(double optimum_value, Eigen::VectorXd optimizer, PolytopicHessian hessian,
            Eigen::VectorXd sat_limits);

  double optimum_value;       // extremum of the map
  Eigen::VectorXd optimizer;  // argument attaining it
  PolytopicHessian hessian;
  Eigen::VectorXd sat_limits;  // elementwise actuator bounds, strictly positive

  [[nodiscard]] Eigen::Index dim() const { return optimizer.size(); }
};

// Convex combination of the polytope vertices.
[[nodiscard]] Eigen::MatrixXd hessian_at(const PolytopicHessian& hess, const SimplexWeight& alpha);

// Quadratic map value at theta; exact, noise-free.
[[nodiscard]] double map_eval(const PlantSpec& plant, const SimplexWeight& alpha,
                              const Eigen::VectorXd& theta);

// Elementwise clamp to [-limits, +limits]. Idempotent.
[[nodiscard]] Eigen::VectorXd saturate(const Eigen::VectorXd& u, const Eigen::VectorXd& limits);

// u - saturate(u); nonzero only where the actuator clips.
[[nodiscard]] Eigen::VectorXd deadzone(const Eigen::VectorXd& u, const Eigen::VectorXd& limits);

// Uniform draw from the unit simplex (normalized exponentials).
// Deterministic for a fixed seed.
[[nodiscard]] SimplexWeight sample_simplex(Eigen::Index count, std::uint64_t seed);

}  // namespace satseek
