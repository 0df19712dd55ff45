#include "satseek/core_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace satseek {

namespace {

constexpr double kSimplexTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr double kDefinitenessTol = 1e-10;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

// Uniform in (0, 1], identical across platforms for a given engine state.
double unit_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

SimplexWeight::SimplexWeight(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  require(weights_.size() >= 1, "simplex weight must have at least one entry");
  require((weights_.array() >= 0.0).all(), "simplex weights must be nonnegative");
  require(std::abs(weights_.sum() - 1.0) <= kSimplexTol, "simplex weights must sum to 1");
}

SimplexWeight SimplexWeight::vertex(Eigen::Index count, Eigen::Index index) {
  require(index >= 0 && index < count, "vertex index out of range");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(count);
  w[index] = 1.0;
  return SimplexWeight(std::move(w));
}

PolytopicHessian::PolytopicHessian(std::vector<Eigen::MatrixXd> vertices, Definiteness sign)
    : vertices_(std::move(vertices)), sign_(sign) {
  require(!vertices_.empty(), "Hessian polytope needs at least one vertex");
  const Eigen::Index n = vertices_.front().rows();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Eigen::MatrixXd& v = vertices_[i];
    require(v.rows() == n && v.cols() == n, "Hessian vertex " + std::to_string(i) +
                                                " must be square with matching dimension");
    const double scale = v.norm();
    require((v - v.transpose()).norm() <= kSymmetryTol * std::max(1.0, scale),
            "Hessian vertex " + std::to_string(i) + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    const double threshold = kDefinitenessTol * std::max(1.0, scale);
    if (sign_ == Definiteness::Positive) {
      require(eig.eigenvalues().minCoeff() > threshold,
              "Hessian vertex " + std::to_string(i) + " is not positive definite");
    } else {
      require(eig.eigenvalues().maxCoeff() < -threshold,
              "Hessian vertex " + std::to_string(i) + " is not negative definite");
    }
  }
}

double PolytopicHessian::max_vertex_norm() const {
  double best = 0.0;
  for (const Eigen::MatrixXd& v : vertices_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    best = std::max(best, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  return best;
}

PlantSpec::PlantSpec(double optimum_value_in, Eigen::VectorXd optimizer_in,
                     PolytopicHessian hessian_in, Eigen::VectorXd sat_limits_in)
    : optimum_value(optimum_value_in),
      optimizer(std::move(optimizer_in)),
      hessian(std::move(hessian_in)),
      sat_limits(std::move(sat_limits_in)) {
  require(optimizer.size() == hessian.dim(), "optimizer dimension must match the Hessian");
  require(sat_limits.size() == hessian.dim(), "saturation limits dimension must match the Hessian");
  require((sat_limits.array() > 0.0).all(), "saturation limits must be strictly positive");
}

Eigen::MatrixXd hessian_at(const PolytopicHessian& hess, const SimplexWeight& alpha) {
  require(alpha.size() == hess.vertex_count(),
          "simplex weight size must equal the number of vertices");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(hess.dim(), hess.dim());
  for (Eigen::Index i = 0; i < hess.vertex_count(); ++i) {
    h += alpha[i] * hess.vertex(i);
  }
  return h;
}

double map_eval(const PlantSpec& plant, const SimplexWeight& alpha, const Eigen::VectorXd& theta) {
  require(theta.size() == plant.dim(), "map input dimension mismatch");
  const Eigen::VectorXd d = theta - plant.optimizer;
  const Eigen::MatrixXd h = hessian_at(plant.hessian, alpha);
  return plant.optimum_value + 0.5 * d.dot(h * d);
}

Eigen::VectorXd saturate(const Eigen::VectorXd& u, const Eigen::VectorXd& limits) {
  require(u.size() == limits.size(), "saturation dimension mismatch");
  return u.cwiseMax(-limits).cwiseMin(limits);
}

Eigen::VectorXd deadzone(const Eigen::VectorXd& u, const Eigen::VectorXd& limits) {
  return u - saturate(u, limits);
}

SimplexWeight sample_simplex(Eigen::Index count, std::uint64_t seed) {
  require(count >= 1, "simplex dimension must be at least 1");
  std::mt19937_64 rng(seed);
  Eigen::VectorXd draws(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    draws[i] = -std::log(unit_uniform(rng));
  }
  return SimplexWeight(draws / draws.sum());
}

}  // namespace satseek
