#include "satseek/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace satseek {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  require(obj.is_object(), "config section '" + context + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw std::invalid_argument("unknown key '" + key + "' in config section '" + context +
                                  "'");
    }
  }
}

const nlohmann::json& fetch(const nlohmann::json& obj, const std::string& key,
                            const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw std::invalid_argument("missing key '" + key + "' in config section '" + context + "'");
  }
  return *it;
}

double number(const nlohmann::json& j, const std::string& what) {
  require(j.is_number(), "'" + what + "' must be a number");
  return j.get<double>();
}

}  // namespace

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& what) {
  require(j.is_array() && !j.empty() && j.front().is_array(),
          "'" + what + "' must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols,
            "'" + what + "' rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = number(row[static_cast<std::size_t>(c)], what);
    }
  }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), "'" + what + "' must be a nonempty array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = number(j[static_cast<std::size_t>(i)], what);
  }
  return v;
}

ProjectConfig ProjectConfig::from_json(const nlohmann::json& doc) {
  ProjectConfig cfg;
  check_keys(doc, {"plant", "dither", "synthesis", "simulation", "outputs", "compare", "sweep"},
             "<root>");

  {
    const nlohmann::json& plant = fetch(doc, "plant", "<root>");
    check_keys(plant, {"optimum_value", "optimizer", "hessian", "sat_limits"}, "plant");
    cfg.optimum_value = number(fetch(plant, "optimum_value", "plant"), "optimum_value");
    cfg.optimizer = vector_from_json(fetch(plant, "optimizer", "plant"), "optimizer");
    cfg.sat_limits = vector_from_json(fetch(plant, "sat_limits", "plant"), "sat_limits");

    const nlohmann::json& hess = fetch(plant, "hessian", "plant");
    check_keys(hess, {"vertices", "definiteness"}, "plant.hessian");
    const nlohmann::json& vertices = fetch(hess, "vertices", "plant.hessian");
    require(vertices.is_array() && !vertices.empty(), "'vertices' must be a nonempty array");
    for (const auto& v : vertices) {
      cfg.hessian_vertices.push_back(matrix_from_json(v, "hessian vertex"));
    }
    const std::string sign = fetch(hess, "definiteness", "plant.hessian").get<std::string>();
    if (sign == "positive") {
      cfg.definiteness = Definiteness::Positive;
    } else if (sign == "negative") {
      cfg.definiteness = Definiteness::Negative;
    } else {
      throw std::invalid_argument("definiteness must be 'positive' or 'negative'");
    }
  }

  {
    const nlohmann::json& dither = fetch(doc, "dither", "<root>");
    check_keys(dither, {"amplitudes", "multipliers", "base_frequency"}, "dither");
    cfg.amplitudes = vector_from_json(fetch(dither, "amplitudes", "dither"), "amplitudes");
    const nlohmann::json& mult = fetch(dither, "multipliers", "dither");
    require(mult.is_array() && !mult.empty(), "'multipliers' must be a nonempty array");
    for (const auto& m : mult) {
      require(m.is_string(), "frequency multipliers must be exact rational strings");
      cfg.multipliers.push_back(parse_rational(m.get<std::string>()));
    }
    cfg.base_frequency = number(fetch(dither, "base_frequency", "dither"), "base_frequency");
  }

  {
    const nlohmann::json& synth = fetch(doc, "synthesis", "<root>");
    check_keys(synth, {"eta", "epsilon", "margin_tol"}, "synthesis");
    cfg.eta = number(fetch(synth, "eta", "synthesis"), "eta");
    cfg.epsilon = number(fetch(synth, "epsilon", "synthesis"), "epsilon");
    cfg.margin_tol = number(fetch(synth, "margin_tol", "synthesis"), "margin_tol");
  }

  {
    const nlohmann::json& sim = fetch(doc, "simulation", "<root>");
    check_keys(sim, {"theta_hat0", "t_end", "step", "alpha"}, "simulation");
    cfg.theta_hat0 = vector_from_json(fetch(sim, "theta_hat0", "simulation"), "theta_hat0");
    cfg.t_end = number(fetch(sim, "t_end", "simulation"), "t_end");
    if (sim.contains("step") && !sim["step"].is_null()) {
      cfg.step = number(sim["step"], "step");
    }
    if (sim.contains("alpha") && !sim["alpha"].is_null()) {
      cfg.alpha = vector_from_json(sim["alpha"], "alpha");
    }
  }

  {
    const nlohmann::json& outputs = fetch(doc, "outputs", "<root>");
    check_keys(outputs, {"directory", "formats"}, "outputs");
    cfg.output_directory = fetch(outputs, "directory", "outputs").get<std::string>();
    cfg.output_formats.clear();
    for (const auto& f : fetch(outputs, "formats", "outputs")) {
      cfg.output_formats.push_back(f.get<std::string>());
    }
  }

  if (doc.contains("compare")) {
    const nlohmann::json& cmp = doc["compare"];
    check_keys(cmp, {"gain", "label"}, "compare");
    cfg.compare_gain = matrix_from_json(fetch(cmp, "gain", "compare"), "compare gain");
    if (cmp.contains("label")) cfg.compare_label = cmp["label"].get<std::string>();
  }

  if (doc.contains("sweep")) {
    const nlohmann::json& sweep = doc["sweep"];
    check_keys(sweep, {"multipliers"}, "sweep");
    cfg.sweep_multipliers.clear();
    for (const auto& m : fetch(sweep, "multipliers", "sweep")) {
      cfg.sweep_multipliers.push_back(number(m, "sweep multiplier"));
    }
  }

  return cfg;
}

ProjectConfig ProjectConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::json ProjectConfig::to_json() const {
  nlohmann::json doc;
  nlohmann::json vertices = nlohmann::json::array();
  for (const Eigen::MatrixXd& v : hessian_vertices) vertices.push_back(matrix_to_json(v));
  doc["plant"] = {{"optimum_value", optimum_value},
                  {"optimizer", vector_to_json(optimizer)},
                  {"hessian",
                   {{"vertices", std::move(vertices)},
                    {"definiteness",
                     definiteness == Definiteness::Positive ? "positive" : "negative"}}},
                  {"sat_limits", vector_to_json(sat_limits)}};
  nlohmann::json mult = nlohmann::json::array();
  for (const Rational& r : multipliers) mult.push_back(format_rational(r));
  doc["dither"] = {{"amplitudes", vector_to_json(amplitudes)},
                   {"multipliers", std::move(mult)},
                   {"base_frequency", base_frequency}};
  doc["synthesis"] = {{"eta", eta}, {"epsilon", epsilon}, {"margin_tol", margin_tol}};
  doc["simulation"] = {{"theta_hat0", vector_to_json(theta_hat0)}, {"t_end", t_end}};
  if (step.has_value()) doc["simulation"]["step"] = *step;
  if (alpha.has_value()) doc["simulation"]["alpha"] = vector_to_json(*alpha);
  nlohmann::json formats = nlohmann::json::array();
  for (const std::string& f : output_formats) formats.push_back(f);
  doc["outputs"] = {{"directory", output_directory}, {"formats", std::move(formats)}};
  if (compare_gain.has_value()) {
    doc["compare"] = {{"gain", matrix_to_json(*compare_gain)}, {"label", compare_label}};
  }
  if (!sweep_multipliers.empty()) {
    doc["sweep"] = {{"multipliers", sweep_multipliers}};
  }
  return doc;
}

void ProjectConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write config file " + path.string());
  out << to_json().dump(2) << "\n";
}

PolytopicHessian ProjectConfig::hessian() const {
  return {hessian_vertices, definiteness};
}

PlantSpec ProjectConfig::plant() const {
  return {optimum_value, optimizer, hessian(), sat_limits};
}

DitherSpec ProjectConfig::dither() const {
  return {amplitudes, multipliers, base_frequency};
}

SimplexWeight ProjectConfig::sim_alpha() const {
  if (alpha.has_value()) return SimplexWeight(*alpha);
  return SimplexWeight::vertex(static_cast<Eigen::Index>(hessian_vertices.size()), 0);
}

double ProjectConfig::sim_step() const {
  if (step.has_value()) return *step;
  return default_step(dither());
}

SimConfig ProjectConfig::sim_config(const Eigen::MatrixXd& gain) const {
  return {plant(), dither(), gain, sim_alpha(), theta_hat0, t_end, sim_step()};
}

bool ProjectConfig::operator==(const ProjectConfig& other) const {
  const auto eq_vec = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == b.size() && a == b;
  };
  const auto eq_mat = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  if (hessian_vertices.size() != other.hessian_vertices.size()) return false;
  for (std::size_t i = 0; i < hessian_vertices.size(); ++i) {
    if (!eq_mat(hessian_vertices[i], other.hessian_vertices[i])) return false;
  }
  if (alpha.has_value() != other.alpha.has_value()) return false;
  if (alpha.has_value() && !eq_vec(*alpha, *other.alpha)) return false;
  if (compare_gain.has_value() != other.compare_gain.has_value()) return false;
  if (compare_gain.has_value() && !eq_mat(*compare_gain, *other.compare_gain)) return false;
  return optimum_value == other.optimum_value && eq_vec(optimizer, other.optimizer) &&
         definiteness == other.definiteness && eq_vec(sat_limits, other.sat_limits) &&
         eq_vec(amplitudes, other.amplitudes) && multipliers == other.multipliers &&
         base_frequency == other.base_frequency && eta == other.eta &&
         epsilon == other.epsilon && margin_tol == other.margin_tol &&
         eq_vec(theta_hat0, other.theta_hat0) && t_end == other.t_end && step == other.step &&
         output_directory == other.output_directory && output_formats == other.output_formats &&
         compare_label == other.compare_label && sweep_multipliers == other.sweep_multipliers;
}

}  // namespace satseek
