// satseek: synthesis, certification, and simulation of saturated
// gradient extremum-seeking loops.
//
// Exit codes: 0 success, 1 usage/internal error, 2 infeasible or failed
// verdict, 3 divergence (partial trace written).

#include <CLI11.hpp>

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "satseek/config.hpp"
#include "satseek/lmi.hpp"
#include "satseek/plot.hpp"
#include "satseek/simulate.hpp"
#include "satseek/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitDiverged = 3;

struct CommonArgs {
  std::string config_path;
  std::string gain_path;
  std::string out_dir;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool needs_gain) {
  cmd->add_option("--config", args->config_path, "project configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* gain = cmd->add_option("--gain", args->gain_path, "gain file written by synth/analyze");
  if (needs_gain) gain->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args->out_dir, "output directory (default: config outputs.directory)");
  cmd->add_option("--seed", args->seed, "seed for sampled checks");
}

fs::path ensure_out_dir(const satseek::ProjectConfig& cfg, const CommonArgs& args) {
  const fs::path dir = args.out_dir.empty() ? fs::path(cfg.output_directory)
                                            : fs::path(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

json certificate_to_json(const satseek::Certificate& cert) {
  return {{"P", satseek::matrix_to_json(cert.P)},
          {"L", satseek::matrix_to_json(cert.L)},
          {"U", satseek::vector_to_json(cert.U.diagonal())},
          {"eta", cert.eta},
          {"kappa", cert.kappa()}};
}

json margins_to_json(const satseek::AnalysisMarginReport& analysis,
                     const satseek::InclusionReport& inclusion) {
  return {{"analysis_vertex_max_eigenvalues", analysis.vertex_max_eigenvalues},
          {"analysis_margin_tol", analysis.margin_tol},
          {"analysis_pass", analysis.pass},
          {"inclusion_row_min_eigenvalues", inclusion.row_min_eigenvalues},
          {"inclusion_worst_sample_slack", inclusion.worst_sample_slack},
          {"inclusion_pass", inclusion.pass}};
}

Eigen::MatrixXd load_gain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open gain file " + path);
  json doc;
  in >> doc;
  if (!doc.contains("gain")) throw std::invalid_argument("gain file lacks a 'gain' entry");
  return satseek::matrix_from_json(doc["gain"], "gain");
}

bool wants(const satseek::ProjectConfig& cfg, const std::string& format) {
  for (const std::string& f : cfg.output_formats) {
    if (f == format) return true;
  }
  return false;
}

void write_trace_outputs(const satseek::ProjectConfig& cfg, const satseek::SimTrace& trace,
                         const fs::path& dir) {
  if (wants(cfg, "csv")) {
    std::ofstream out(dir / "trace.csv");
    satseek::write_trace_csv(trace, out);
  }
  if (!wants(cfg, "svg")) return;

  const Eigen::Index n = trace.theta_hat.cols();
  const auto column_series = [&](const Eigen::MatrixXd& m, const std::string& stem) {
    std::vector<satseek::PlotSeries> series;
    for (Eigen::Index c = 0; c < n; ++c) {
      satseek::PlotSeries s;
      s.label = stem + "_" + std::to_string(c + 1);
      s.x = trace.times;
      s.y.assign(m.col(c).data(), m.col(c).data() + m.rows());
      series.push_back(std::move(s));
    }
    return series;
  };

  satseek::PlotOptions usat_opts;
  usat_opts.title = "saturated control input";
  usat_opts.x_label = "t [s]";
  usat_opts.y_label = "sat(u)";
  write_svg_plot(dir / "plot_usat.svg", column_series(trace.u_sat, "sat_u"), usat_opts);

  satseek::PlotOptions theta_opts;
  theta_opts.title = "map input";
  theta_opts.x_label = "t [s]";
  theta_opts.y_label = "theta";
  write_svg_plot(dir / "plot_theta.svg", column_series(trace.theta, "theta"), theta_opts);

  satseek::PlotOptions y_opts;
  y_opts.title = "map output";
  y_opts.x_label = "t [s]";
  y_opts.y_label = "y";
  satseek::PlotSeries ys;
  ys.label = "y";
  ys.x = trace.times;
  ys.y.assign(trace.y.data(), trace.y.data() + trace.y.size());
  write_svg_plot(dir / "plot_y.svg", {ys}, y_opts);
}

int cmd_synth(const CommonArgs& args) {
  const auto cfg = satseek::ProjectConfig::load(args.config_path);
  const fs::path dir = ensure_out_dir(cfg, args);
  const satseek::PolytopicHessian hess = cfg.hessian();

  satseek::SynthesisOptions options;
  options.eta = cfg.eta;
  options.epsilon = cfg.epsilon;
  options.margin_scale = cfg.margin_tol;
  options.sample_seed = args.seed;

  write_json(dir / "problem_synthesis.json",
             satseek::build_synthesis_problem(hess, cfg.sat_limits, options).to_json());

  const satseek::SynthesisResult result =
      satseek::solve_synthesis(hess, cfg.sat_limits, options);

  std::string summary = "synthesis status: " + satseek::sdp::to_string(result.status) + "\n";
  if (result.feasible()) {
    std::ostringstream gain_text;
    gain_text << result.gain;
    summary += "eta: " + std::to_string(result.eta) +
               ", epsilon: " + std::to_string(result.epsilon_used) + "\n";
    summary += "gain K:\n" + gain_text.str() + "\n";
    summary += "logdet(Q0): " + std::to_string(result.logdet_q0) + "\n";
    summary += "analysis margins pass: " +
               std::string(result.analysis_report.pass ? "yes" : "no") + "\n";
    summary += "inclusion pass: " + std::string(result.inclusion_report.pass ? "yes" : "no") +
               "\n";

    json gain_doc;
    gain_doc["gain"] = satseek::matrix_to_json(result.gain);
    gain_doc["eta"] = result.eta;
    gain_doc["epsilon"] = result.epsilon_used;
    gain_doc["logdet_q0"] = result.logdet_q0;
    gain_doc["W"] = satseek::matrix_to_json(result.W);
    gain_doc["Q0"] = satseek::matrix_to_json(result.Q0);
    gain_doc["certificate"] = certificate_to_json(*result.certificate);
    gain_doc["margins"] = margins_to_json(result.analysis_report, result.inclusion_report);
    write_json(dir / "gain.json", gain_doc);
  } else {
    summary += "detail: " + result.message + "\n";
  }
  write_text(dir / "summary.txt", summary);
  std::cout << summary;

  if (result.feasible()) return kExitOk;
  return result.status == satseek::sdp::SolveStatus::Infeasible ? kExitInfeasible : kExitError;
}

int cmd_analyze(const CommonArgs& args) {
  const auto cfg = satseek::ProjectConfig::load(args.config_path);
  const fs::path dir = ensure_out_dir(cfg, args);
  const Eigen::MatrixXd gain = load_gain(args.gain_path);
  const satseek::PolytopicHessian hess = cfg.hessian();

  satseek::AnalysisOptions options;
  options.margin_scale = cfg.margin_tol;

  write_json(dir / "problem_analysis.json",
             satseek::build_analysis_problem(hess, gain, cfg.eta, cfg.sat_limits, cfg.margin_tol)
                 .to_json());

  const satseek::AnalysisResult result =
      satseek::solve_analysis(hess, gain, cfg.eta, cfg.sat_limits, options);

  std::string summary = "analysis status: " + satseek::sdp::to_string(result.status) + "\n";
  if (result.feasible()) {
    const satseek::EllipsoidInfo ellipsoid = satseek::ellipsoid_of(*result.certificate);
    const satseek::ConditionRatios ratios = satseek::condition_ratios(
        *result.certificate, hessian_at(hess, cfg.sim_alpha()),
        cfg.theta_hat0 - cfg.optimizer);
    json doc;
    doc["gain"] = satseek::matrix_to_json(gain);
    doc["eta"] = cfg.eta;
    doc["certificate"] = certificate_to_json(*result.certificate);
    doc["margins"] = margins_to_json(result.analysis_report, result.inclusion_report);
    doc["ellipsoid"] = {{"semi_axes", satseek::vector_to_json(ellipsoid.semi_axes)},
                        {"volume_factor", ellipsoid.volume_factor}};
    doc["condition_ratios"] = {
        {"kappa", ratios.kappa}, {"kappa_bar", ratios.kappa_bar}, {"kappa_y", ratios.kappa_y}};
    write_json(dir / "certificate.json", doc);
    summary += "analysis margins pass: " +
               std::string(result.analysis_report.pass ? "yes" : "no") + "\n";
    summary += "inclusion pass: " + std::string(result.inclusion_report.pass ? "yes" : "no") +
               "\n";
  } else {
    summary += "detail: " + result.message + "\n";
  }
  write_text(dir / "summary.txt", summary);
  std::cout << summary;

  if (result.feasible()) return kExitOk;
  return result.status == satseek::sdp::SolveStatus::Infeasible ? kExitInfeasible : kExitError;
}

int cmd_simulate(const CommonArgs& args) {
  const auto cfg = satseek::ProjectConfig::load(args.config_path);
  const fs::path dir = ensure_out_dir(cfg, args);
  const Eigen::MatrixXd gain = load_gain(args.gain_path);

  const satseek::SimConfig sim = cfg.sim_config(gain);
  const satseek::SimTrace trace = satseek::simulate_full(sim);
  write_trace_outputs(cfg, trace, dir);

  const satseek::PeriodInfo period = satseek::common_period(sim.dither);
  const double threshold = 3.0 * sim.dither.amplitudes().cwiseAbs().maxCoeff();
  std::string summary;
  double theta_err = std::numeric_limits<double>::infinity();
  double y_err = std::numeric_limits<double>::infinity();
  if (!trace.diverged) {
    theta_err = satseek::dither_averaged_theta_error(trace, sim.plant, period);
    y_err = satseek::dither_averaged_y_error(trace, sim.plant, period);
  }
  summary += "samples: " + std::to_string(trace.samples()) + "\n";
  summary += "diverged: " + std::string(trace.diverged ? "yes" : "no") + "\n";
  summary += "final dither-averaged theta error: " + std::to_string(theta_err) + "\n";
  summary += "final dither-averaged y error: " + std::to_string(y_err) + "\n";
  summary += "converged (error < " + std::to_string(threshold) +
             "): " + std::string(!trace.diverged && theta_err < threshold ? "yes" : "no") + "\n";
  write_text(dir / "summary.txt", summary);
  std::cout << summary;
  return trace.diverged ? kExitDiverged : kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  const auto cfg = satseek::ProjectConfig::load(args.config_path);
  const fs::path dir = ensure_out_dir(cfg, args);
  const Eigen::MatrixXd gain = load_gain(args.gain_path);

  const satseek::SimConfig base = cfg.sim_config(gain);
  const satseek::SweepReport report = satseek::averaging_sweep(base, cfg.sweep_multipliers);

  if (wants(cfg, "json")) write_json(dir / "sweep.json", satseek::to_json(report));
  if (wants(cfg, "csv")) write_text(dir / "sweep.csv", report.to_csv());
  if (wants(cfg, "svg")) {
    satseek::PlotSeries data;
    data.label = "sup deviation";
    data.x = report.omegas;
    data.y = report.residuals;
    satseek::PlotSeries fit;
    fit.label = "fitted order " + std::to_string(report.fitted_order);
    if (!report.omegas.empty() && report.residuals.front() > 0.0) {
      for (double w : report.omegas) {
        fit.x.push_back(w);
        fit.y.push_back(report.residuals.front() *
                        std::pow(w / report.omegas.front(), report.fitted_order));
      }
    }
    satseek::PlotOptions opts;
    opts.title = "averaging residual vs dither frequency";
    opts.x_label = "omega [rad/s]";
    opts.y_label = "sup deviation";
    opts.log_x = true;
    opts.log_y = true;
    write_svg_plot(dir / "sweep.svg", {data, fit}, opts);
  }

  std::string summary = "fitted order: " + std::to_string(report.fitted_order) + "\n";
  summary += "residuals:";
  for (double r : report.residuals) summary += " " + std::to_string(r);
  summary += "\n";
  if (!report.diverged.empty()) {
    summary += "diverged runs: " + std::to_string(report.diverged.size()) + "\n";
  }
  write_text(dir / "summary.txt", summary);
  std::cout << summary;
  return kExitOk;
}

int cmd_compare(const CommonArgs& args) {
  const auto cfg = satseek::ProjectConfig::load(args.config_path);
  if (!cfg.compare_gain.has_value()) {
    std::cerr << "config lacks a 'compare' section with the reference gain\n";
    return kExitError;
  }
  const fs::path dir = ensure_out_dir(cfg, args);
  const Eigen::MatrixXd gain = load_gain(args.gain_path);

  const satseek::SimConfig cfg_main = cfg.sim_config(gain);
  const satseek::SimConfig cfg_ref = cfg.sim_config(*cfg.compare_gain);
  const satseek::GainComparison comparison =
      satseek::compare_gains(cfg_main, cfg_ref, "designed", cfg.compare_label);

  if (wants(cfg, "json")) write_json(dir / "compare.json", satseek::to_json(comparison));
  if (wants(cfg, "csv")) write_text(dir / "compare.csv", comparison.to_csv());
  write_text(dir / "summary.txt", comparison.to_csv());
  std::cout << comparison.to_csv();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saturated extremum-seeking toolkit"};
  app.require_subcommand(1);

  CommonArgs synth_args, analyze_args, simulate_args, sweep_args, compare_args;
  add_common(app.add_subcommand("synth", "design a robust gain over the Hessian polytope"),
             &synth_args, false);
  add_common(app.add_subcommand("analyze", "certify a given gain"), &analyze_args, true);
  add_common(app.add_subcommand("simulate", "run the saturated loop and export the trace"),
             &simulate_args, true);
  add_common(app.add_subcommand("sweep", "averaging-order sweep over the base frequency"),
             &sweep_args, true);
  add_common(app.add_subcommand("compare", "compare the designed gain with a reference"),
             &compare_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("synth")) return cmd_synth(synth_args);
    if (app.got_subcommand("analyze")) return cmd_analyze(analyze_args);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args);
    if (app.got_subcommand("compare")) return cmd_compare(compare_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
