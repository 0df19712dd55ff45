#include "satseek/lmi.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace satseek {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void require_gain(const Eigen::MatrixXd& gain, Eigen::Index n) {
  require(gain.rows() == n && gain.cols() == n, "gain must be n x n");
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double max_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(m));
  return eig.eigenvalues().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(m));
  return eig.eigenvalues().minCoeff();
}

// Gaussian direction, deterministic across platforms.
Eigen::VectorXd unit_direction(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Box-Muller on fixed 53-bit uniforms.
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(p));
  require(eig.eigenvalues().minCoeff() > 0.0, "matrix must be positive definite");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

const sdp::ConicBackend& pick_backend(const sdp::ConicBackend* requested) {
  return requested != nullptr ? *requested : sdp::default_backend();
}

}  // namespace

double Certificate::kappa() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(P));
  return std::sqrt(eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff());
}

double margin_tolerance(const PolytopicHessian& hess, double scale) {
  return scale * (1.0 + hess.max_vertex_norm());
}

double AnalysisMarginReport::worst() const {
  double w = -std::numeric_limits<double>::infinity();
  for (double v : vertex_max_eigenvalues) w = std::max(w, v);
  return w;
}

Eigen::MatrixXd analysis_block(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& gain,
                               const Certificate& cert) {
  const Eigen::Index n = hessian.rows();
  require_gain(gain, n);
  require(cert.P.rows() == n && cert.L.rows() == n && cert.U.rows() == n,
          "certificate dimension mismatch");
  Eigen::MatrixXd block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = gain.transpose() * hessian * cert.P +
                              cert.P * hessian * gain + 2.0 * cert.eta * cert.P;
  block.topRightCorner(n, n) = cert.L.transpose() * cert.U - cert.P * hessian;
  block.bottomLeftCorner(n, n) = cert.U * cert.L - hessian * cert.P;
  block.bottomRightCorner(n, n) = -2.0 * cert.U;
  return symmetrized(block);
}

AnalysisMarginReport check_analysis(const PolytopicHessian& hess, const Eigen::MatrixXd& gain,
                                    const Certificate& cert, double margin_scale) {
  require((cert.P - cert.P.transpose()).norm() <= 1e-9 * std::max(1.0, cert.P.norm()),
          "certificate P must be symmetric");
  require(cert.U.isDiagonal(1e-12), "certificate U must be diagonal");
  AnalysisMarginReport report;
  report.margin_tol = margin_tolerance(hess, margin_scale);
  report.pass = true;
  for (Eigen::Index i = 0; i < hess.vertex_count(); ++i) {
    const double top = max_eigenvalue(analysis_block(hess.vertex(i), gain, cert));
    report.vertex_max_eigenvalues.push_back(top);
    if (!(top < -report.margin_tol)) report.pass = false;
  }
  return report;
}

InclusionReport check_inclusion(const Certificate& cert, const Eigen::MatrixXd& gain,
                                const Eigen::VectorXd& limits, int samples, std::uint64_t seed) {
  const Eigen::Index n = cert.dim();
  require_gain(gain, n);
  require(limits.size() == n, "limits dimension mismatch");

  InclusionReport report;
  report.lmi_pass = true;
  const Eigen::MatrixXd diff = gain - cert.L;
  for (Eigen::Index l = 0; l < n; ++l) {
    Eigen::MatrixXd block(n + 1, n + 1);
    block.topLeftCorner(n, n) = cert.P;
    block.topRightCorner(n, 1) = diff.row(l).transpose();
    block.bottomLeftCorner(1, n) = diff.row(l);
    block(n, n) = limits[l] * limits[l];
    const double bottom = min_eigenvalue(block);
    report.row_min_eigenvalues.push_back(bottom);
    if (!(bottom > 0.0)) report.lmi_pass = false;
  }

  // Sampled containment: boundary points of the ellipsoid must lie in the
  // sector validity region.
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd p_inv_sqrt = inverse_sqrt(cert.P);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const Eigen::VectorXd g = p_inv_sqrt * unit_direction(rng, n);
    for (Eigen::Index l = 0; l < n; ++l) {
      worst = std::min(worst, limits[l] - std::abs(diff.row(l).dot(g)));
    }
  }
  report.samples = samples;
  report.worst_sample_slack = worst;
  report.sample_pass = worst >= -1e-9 * limits.cwiseAbs().maxCoeff();
  report.pass = report.lmi_pass && report.sample_pass;
  return report;
}

// ---------------------------------------------------------------------------
// Analysis feasibility program, in the coordinates Q = P^-1, Y = L Q, V = U^-1:
//   vertex blocks  [ Q K'H + H K Q + 2 eta Q , Y' - H V ; Y - V H , -2V ] < 0
//   row blocks     [ Q , Q K_l' - Y_l' ; * , u_l^2 ] > 0
// Both families are affine in (Q, Y, V); maximizing logdet(Q) picks the
// largest certified ellipsoid.
// ---------------------------------------------------------------------------

namespace {

struct AnalysisVars {
  int q = -1, y = -1, v = -1;
};

sdp::Problem analysis_problem(const PolytopicHessian& hess, const Eigen::MatrixXd& gain,
                              double eta, const Eigen::VectorXd& limits, double margin,
                              AnalysisVars* ids) {
  const auto n = static_cast<int>(hess.dim());
  sdp::Problem problem;
  AnalysisVars v;
  v.q = problem.add_variable("Q", n, sdp::VarStructure::Symmetric);
  v.y = problem.add_variable("Y", n, sdp::VarStructure::Full);
  v.v = problem.add_variable("V", n, sdp::VarStructure::Diagonal);

  const sdp::AffineMatrix Q = problem.variable(v.q);
  const sdp::AffineMatrix Y = problem.variable(v.y);
  const sdp::AffineMatrix V = problem.variable(v.v);

  for (Eigen::Index i = 0; i < hess.vertex_count(); ++i) {
    const Eigen::MatrixXd& h = hess.vertex(i);
    sdp::AffineMatrix top_left = Q * (gain.transpose() * h) + (h * gain) * Q + (2.0 * eta) * Q;
    sdp::AffineMatrix top_right = Y.transpose() - h * V;
    sdp::AffineMatrix bottom_left = Y - V * h;
    sdp::AffineMatrix bottom_right = -2.0 * V;
    sdp::AffineMatrix block = sdp::AffineMatrix::stack(
        {{std::move(top_left), std::move(top_right)},
         {std::move(bottom_left), std::move(bottom_right)}});
    // Strict negativity with margin: -(block) - margin I >= 0.
    problem.add_psd_block("stability_vertex_" + std::to_string(i),
                          -1.0 * block - sdp::AffineMatrix::identity(2 * n, margin));
  }

  for (int l = 0; l < n; ++l) {
    sdp::AffineMatrix kq_minus_y = Q * gain.row(l).transpose() - Y.row(l).transpose();
    sdp::AffineMatrix block(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) block(i, j) = Q(i, j);
      block(i, n) = kq_minus_y(i, 0);
      block(n, i) = kq_minus_y(i, 0);
    }
    block(n, n) = sdp::LinExpr(limits[l] * limits[l]);
    problem.add_psd_block("inclusion_row_" + std::to_string(l),
                          block - sdp::AffineMatrix::identity(n + 1, margin));
  }

  problem.add_psd_block("V_pd", V - sdp::AffineMatrix::identity(n, margin));
  problem.set_logdet_objective(v.q);

  if (ids != nullptr) *ids = v;
  return problem;
}

}  // namespace

sdp::Problem build_analysis_problem(const PolytopicHessian& hess, const Eigen::MatrixXd& gain,
                                    double eta, const Eigen::VectorXd& limits,
                                    double margin_scale) {
  require_gain(gain, hess.dim());
  require(eta > 0.0, "eta must be positive");
  return analysis_problem(hess, gain, eta, limits, margin_tolerance(hess, margin_scale), nullptr);
}

AnalysisResult solve_analysis(const PolytopicHessian& hess, const Eigen::MatrixXd& gain,
                              double eta, const Eigen::VectorXd& limits,
                              const AnalysisOptions& options) {
  require_gain(gain, hess.dim());
  require(eta > 0.0, "eta must be positive");
  require(limits.size() == hess.dim(), "limits dimension mismatch");

  AnalysisResult result;
  AnalysisVars ids;
  const double margin = margin_tolerance(hess, options.margin_scale);
  const sdp::Problem problem = analysis_problem(hess, gain, eta, limits, margin, &ids);
  const sdp::Solution solution = pick_backend(options.backend).solve(problem, options.solver);
  result.status = solution.status;
  result.message = solution.message;
  if (solution.status != sdp::SolveStatus::Optimal &&
      solution.status != sdp::SolveStatus::Feasible) {
    return result;
  }

  const Eigen::MatrixXd q = problem.extract(solution.x, ids.q);
  const Eigen::MatrixXd y = problem.extract(solution.x, ids.y);
  const Eigen::MatrixXd v = problem.extract(solution.x, ids.v);

  Certificate cert;
  cert.P = symmetrized(q.inverse());
  cert.L = y * cert.P;
  cert.U = v.inverse();
  cert.eta = eta;

  result.analysis_report = check_analysis(hess, gain, cert, options.margin_scale);
  if (result.analysis_report.worst() >= 0.0) {
    result.status = sdp::SolveStatus::NumericalFailure;
    result.message = "recovered certificate failed re-validation";
    return result;
  }

  // The stability block is homogeneous in (P, U) for fixed L, and scaling
  // (P, U) up only helps the inclusion blocks, so a thin recovered margin can
  // be widened exactly at the cost of a smaller certified ellipsoid.
  if (!result.analysis_report.pass) {
    const double scale = 2.0 * result.analysis_report.margin_tol /
                         std::abs(result.analysis_report.worst());
    if (scale > 1.0) {
      cert.P *= scale;
      cert.U *= scale;
      result.analysis_report = check_analysis(hess, gain, cert, options.margin_scale);
    }
  }

  result.inclusion_report = check_inclusion(cert, gain, limits);
  if (!result.analysis_report.pass || !result.inclusion_report.lmi_pass) {
    result.status = sdp::SolveStatus::NumericalFailure;
    result.message = "recovered certificate failed re-validation";
    return result;
  }
  result.certificate = std::move(cert);
  return result;
}

// ---------------------------------------------------------------------------
// Synthesis program (design inequality + saturation rows + W >= Q0 > 0).
// ---------------------------------------------------------------------------

namespace {

struct SynthesisVars {
  int w = -1, v = -1, z = -1, y = -1, t = -1, q0 = -1;
};

sdp::Problem synthesis_problem(const PolytopicHessian& hess, const Eigen::VectorXd& limits,
                               const SynthesisOptions& options, double epsilon,
                               SynthesisVars* ids) {
  const auto n = static_cast<int>(hess.dim());
  const double margin = margin_tolerance(hess, options.margin_scale);
  sdp::Problem problem;
  SynthesisVars v;
  v.w = problem.add_variable("W", n, sdp::VarStructure::Symmetric);
  v.v = problem.add_variable("V", n, sdp::VarStructure::Diagonal);
  v.z = problem.add_variable("Z", n, sdp::VarStructure::Full);
  v.y = problem.add_variable("Y", n, sdp::VarStructure::Full);
  v.t = problem.add_variable("T", n, sdp::VarStructure::Full);
  v.q0 = problem.add_variable("Q0", n, sdp::VarStructure::Symmetric);

  const sdp::AffineMatrix W = problem.variable(v.w);
  const sdp::AffineMatrix V = problem.variable(v.v);
  const sdp::AffineMatrix Z = problem.variable(v.z);
  const sdp::AffineMatrix Y = problem.variable(v.y);
  const sdp::AffineMatrix T = problem.variable(v.t);
  const sdp::AffineMatrix Q0 = problem.variable(v.q0);

  for (Eigen::Index i = 0; i < hess.vertex_count(); ++i) {
    const Eigen::MatrixXd& h = hess.vertex(i);
    sdp::AffineMatrix b11 = h * Z + Z.transpose() * Eigen::MatrixXd(h.transpose()) +
                            (2.0 * options.eta) * W;
    sdp::AffineMatrix b21 = W - T.transpose() + epsilon * (h * Z);
    sdp::AffineMatrix b22 = (-epsilon) * (T.transpose() + T);
    sdp::AffineMatrix b31 = Y - V * Eigen::MatrixXd(h.transpose());
    if (options.lmi_31_block == SectorBlockForm::AsPrinted) b31 += Z;
    sdp::AffineMatrix b32 = (-epsilon) * (V * Eigen::MatrixXd(h.transpose()));
    sdp::AffineMatrix b33 = -2.0 * V;
    sdp::AffineMatrix block = sdp::AffineMatrix::stack(
        {{b11, b21.transpose(), b31.transpose()},
         {b21, b22, b32.transpose()},
         {b31, b32, b33}});
    problem.add_psd_block("design_vertex_" + std::to_string(i),
                          -1.0 * block - sdp::AffineMatrix::identity(3 * n, margin));
  }

  // Saturation rows carry the same strictness margin: the recovered
  // certificate must satisfy the inclusion condition strictly.
  for (int l = 0; l < n; ++l) {
    sdp::AffineMatrix z_minus_y = Z.row(l) - Y.row(l);
    sdp::AffineMatrix block(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) block(i, j) = W(i, j);
      block(i, n) = z_minus_y(0, i);
      block(n, i) = z_minus_y(0, i);
    }
    block(n, n) = sdp::LinExpr(limits[l] * limits[l]);
    problem.add_psd_block("saturation_row_" + std::to_string(l),
                          block - sdp::AffineMatrix::identity(n + 1, margin));
  }

  problem.add_psd_block("W_pd", W - sdp::AffineMatrix::identity(n, margin));
  problem.add_psd_block("V_pd", V - sdp::AffineMatrix::identity(n, margin));
  problem.add_psd_block("W_dominates_Q0", W - Q0);
  problem.set_logdet_objective(v.q0);

  if (ids != nullptr) *ids = v;
  return problem;
}

SynthesisResult solve_synthesis_fixed_epsilon(const PolytopicHessian& hess,
                                              const Eigen::VectorXd& limits,
                                              const SynthesisOptions& options, double epsilon) {
  SynthesisResult result;
  result.eta = options.eta;
  result.epsilon_used = epsilon;

  SynthesisVars ids;
  const sdp::Problem problem = synthesis_problem(hess, limits, options, epsilon, &ids);
  const sdp::Solution solution = pick_backend(options.backend).solve(problem, options.solver);
  result.status = solution.status;
  result.message = solution.message;
  if (solution.status != sdp::SolveStatus::Optimal &&
      solution.status != sdp::SolveStatus::Feasible) {
    return result;
  }

  result.W = problem.extract(solution.x, ids.w);
  result.V = problem.extract(solution.x, ids.v);
  result.Z = problem.extract(solution.x, ids.z);
  result.Y = problem.extract(solution.x, ids.y);
  result.slack = problem.extract(solution.x, ids.t);
  result.Q0 = problem.extract(solution.x, ids.q0);
  result.logdet_q0 = solution.objective;

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(result.slack);
  const double cond =
      svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (!std::isfinite(cond) || cond > options.max_slack_condition) {
    result.status = sdp::SolveStatus::NumericalFailure;
    result.message = "slack variable numerically singular (condition " + std::to_string(cond) + ")";
    return result;
  }

  const Eigen::MatrixXd t_inv = result.slack.inverse();
  result.gain = result.Z * t_inv;

  Certificate cert;
  cert.P = symmetrized(t_inv.transpose() * result.W * t_inv);
  cert.L = result.Y * t_inv;
  cert.U = Eigen::MatrixXd(result.V.diagonal().cwiseInverse().asDiagonal());
  cert.eta = options.eta;

  result.analysis_report = check_analysis(hess, result.gain, cert, options.margin_scale);
  result.inclusion_report =
      check_inclusion(cert, result.gain, limits, 1000, options.sample_seed);
  if (result.analysis_report.worst() >= 0.0 || !result.inclusion_report.pass) {
    result.status = sdp::SolveStatus::NumericalFailure;
    result.message = "cross-validation of the recovered certificate failed";
    return result;
  }
  result.certificate = std::move(cert);
  return result;
}

}  // namespace

sdp::Problem build_synthesis_problem(const PolytopicHessian& hess, const Eigen::VectorXd& limits,
                                     const SynthesisOptions& options) {
  require(options.eta > 0.0 && options.epsilon > 0.0, "eta and epsilon must be positive");
  require(limits.size() == hess.dim(), "limits dimension mismatch");
  return synthesis_problem(hess, limits, options, options.epsilon, nullptr);
}

SynthesisResult solve_synthesis(const PolytopicHessian& hess, const Eigen::VectorXd& limits,
                                const SynthesisOptions& options) {
  require(options.eta > 0.0 && options.epsilon > 0.0, "eta and epsilon must be positive");
  require(limits.size() == hess.dim(), "limits dimension mismatch");
  require((limits.array() > 0.0).all(), "limits must be strictly positive");

  SynthesisResult result = solve_synthesis_fixed_epsilon(hess, limits, options, options.epsilon);
  if (result.status != sdp::SolveStatus::Infeasible || !options.epsilon_grid_fallback) {
    return result;
  }
  for (const double eps : {1e-2, 3e-2, 1e-1, 3e-1, 1.0, 3.0, 1e1}) {
    if (std::abs(eps - options.epsilon) < 1e-12) continue;
    SynthesisResult retry = solve_synthesis_fixed_epsilon(hess, limits, options, eps);
    if (retry.feasible()) {
      retry.message += " (epsilon grid fallback: " + std::to_string(eps) + ")";
      return retry;
    }
  }
  return result;
}

EllipsoidInfo ellipsoid_of(const Certificate& cert) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(cert.P));
  require(eig.eigenvalues().minCoeff() > 0.0, "certificate P must be positive definite");
  EllipsoidInfo info;
  info.P = cert.P;
  info.semi_axes = eig.eigenvalues().cwiseSqrt().cwiseInverse().reverse();
  info.volume_factor = 1.0 / std::sqrt(eig.eigenvalues().prod());
  return info;
}

double sector_value(const Certificate& cert, const Eigen::MatrixXd& gain,
                    const Eigen::VectorXd& limits, const Eigen::VectorXd& g) {
  const Eigen::VectorXd u = gain * g;
  const Eigen::VectorXd psi = deadzone(u, limits);
  return psi.dot(cert.U * (psi - cert.L * g));
}

}  // namespace satseek
