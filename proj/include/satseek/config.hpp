#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "satseek/core_model.hpp"
#include "satseek/dither.hpp"
#include "satseek/rational.hpp"
#include "satseek/simulate.hpp"

namespace satseek {

[[nodiscard]] nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
[[nodiscard]] Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& what);
[[nodiscard]] nlohmann::json vector_to_json(const Eigen::VectorXd& v);
[[nodiscard]] Eigen::VectorXd vector_from_json(const nlohmann::json& j, const std::string& what);

// Batch-run description. Parsing is strict: unknown keys are rejected,
// frequency multipliers are exact rational strings, and
// load -> save -> load is the identity on every field.
struct ProjectConfig {
  // plant
  double optimum_value = 0.0;
  Eigen::VectorXd optimizer;
  std::vector<Eigen::MatrixXd> hessian_vertices;
  Definiteness definiteness = Definiteness::Positive;
  Eigen::VectorXd sat_limits;

  // dither
  Eigen::VectorXd amplitudes;
  std::vector<Rational> multipliers;
  double base_frequency = 0.0;

  // synthesis
  double eta = 1.0;
  double epsilon = 0.5;
  double margin_tol = 1e-7;  // scale factor: margin = margin_tol * (1 + max ||H_i||)

  // simulation
  Eigen::VectorXd theta_hat0;
  double t_end = 1.0;
  std::optional<double> step;           // default: 40 samples of the fastest tone
  std::optional<Eigen::VectorXd> alpha; // true Hessian weight; default: first vertex

  // outputs
  std::string output_directory = "out";
  std::vector<std::string> output_formats = {"csv", "json", "svg"};

  // optional sections
  std::optional<Eigen::MatrixXd> compare_gain;
  std::string compare_label = "reference";
  std::vector<double> sweep_multipliers = {1.0, 2.0, 4.0, 8.0};

  [[nodiscard]] static ProjectConfig from_json(const nlohmann::json& doc);
  [[nodiscard]] static ProjectConfig load(const std::filesystem::path& path);
  [[nodiscard]] nlohmann::json to_json() const;
  void save(const std::filesystem::path& path) const;

  [[nodiscard]] PolytopicHessian hessian() const;
  [[nodiscard]] PlantSpec plant() const;
  [[nodiscard]] DitherSpec dither() const;
  [[nodiscard]] SimplexWeight sim_alpha() const;
  [[nodiscard]] double sim_step() const;
  [[nodiscard]] SimConfig sim_config(const Eigen::MatrixXd& gain) const;

  [[nodiscard]] bool operator==(const ProjectConfig& other) const;
};

}  // namespace satseek
