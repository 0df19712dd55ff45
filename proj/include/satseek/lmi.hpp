#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satseek/core_model.hpp"
#include "satseek/sdp.hpp"

namespace satseek {

// Witness of exponential stability of the averaged saturated loop:
// V(g) = g' P g decays at rate 2*eta inside the certified ellipsoid, with the
// dead-zone handled through the (L, U) sector pair.
struct Certificate {
  Eigen::MatrixXd P;  // symmetric positive definite
  Eigen::MatrixXd L;
  Eigen::MatrixXd U;  // diagonal positive definite
  double eta = 0.0;

  [[nodiscard]] Eigen::Index dim() const { return P.rows(); }
  // Condition ratio sqrt(lmax(P)/lmin(P)); bounds ||g(t)||/||g(0)||.
  [[nodiscard]] double kappa() const;
};

// Margin used to realize strict inequalities: "< 0" means "<= -margin I".
[[nodiscard]] double margin_tolerance(const PolytopicHessian& hess, double scale = 1e-7);

struct AnalysisMarginReport {
  std::vector<double> vertex_max_eigenvalues;  // one per polytope vertex
  double margin_tol = 0.0;
  bool pass = false;  // all max eigenvalues < -margin_tol

  [[nodiscard]] double worst() const;
};

struct InclusionReport {
  std::vector<double> row_min_eigenvalues;  // one per actuator row
  double worst_sample_slack = 0.0;          // min over boundary samples of u_l - |(K-L)_l g|
  int samples = 0;
  bool lmi_pass = false;
  bool sample_pass = false;
  bool pass = false;
};

// Stability block of the averaged loop for one Hessian value:
//   [ K'HP + PHK + 2 eta P , L'U - PH ; UL - HP , -2U ].
// Affine in H, so vertex negativity certifies the whole polytope.
[[nodiscard]] Eigen::MatrixXd analysis_block(const Eigen::MatrixXd& hessian,
                                             const Eigen::MatrixXd& gain,
                                             const Certificate& cert);

// Largest eigenvalue of the stability block at every vertex.
[[nodiscard]] AnalysisMarginReport check_analysis(const PolytopicHessian& hess,
                                                  const Eigen::MatrixXd& gain,
                                                  const Certificate& cert,
                                                  double margin_scale = 1e-7);

// Ellipsoid-in-sector-region condition, one (n+1)x(n+1) block per row:
//   [ P , (K - L)_l' ; (K - L)_l , u_l^2 ] > 0,
// plus a sampled check that boundary points of the ellipsoid satisfy
// |(K - L)_l g| <= u_l.
[[nodiscard]] InclusionReport check_inclusion(const Certificate& cert, const Eigen::MatrixXd& gain,
                                              const Eigen::VectorXd& limits, int samples = 1000,
                                              std::uint64_t seed = 0);

struct AnalysisOptions {
  double margin_scale = 1e-7;
  sdp::SolverOptions solver{};
  const sdp::ConicBackend* backend = nullptr;  // nullptr: default_backend()
};

struct AnalysisResult {
  sdp::SolveStatus status = sdp::SolveStatus::NumericalFailure;
  std::optional<Certificate> certificate;
  AnalysisMarginReport analysis_report;
  InclusionReport inclusion_report;
  std::string message;

  [[nodiscard]] bool feasible() const {
    return status == sdp::SolveStatus::Optimal || status == sdp::SolveStatus::Feasible;
  }
};

// Searches (P, L, U) for a fixed gain by semidefinite programming, maximizing
// the volume of the certified ellipsoid. The search runs in the congruence
// coordinates (Q, Y, V) = (P^-1, L P^-1, U^-1), where both inequality families
// are jointly affine.
[[nodiscard]] AnalysisResult solve_analysis(const PolytopicHessian& hess,
                                            const Eigen::MatrixXd& gain, double eta,
                                            const Eigen::VectorXd& limits,
                                            const AnalysisOptions& options = {});

// Replay document for the analysis program (see sdp::Problem::to_json).
[[nodiscard]] sdp::Problem build_analysis_problem(const PolytopicHessian& hess,
                                                  const Eigen::MatrixXd& gain, double eta,
                                                  const Eigen::VectorXd& limits,
                                                  double margin_scale = 1e-7);

// The printed (3,1) block of the design inequality conflicts with its own
// derivation; both variants are available and cross-validation arbitrates.
enum class SectorBlockForm { Proof, AsPrinted };

struct SynthesisOptions {
  double eta = 1.0;
  double epsilon = 0.5;
  SectorBlockForm lmi_31_block = SectorBlockForm::Proof;
  bool epsilon_grid_fallback = true;  // retry over a log grid when infeasible
  double margin_scale = 1e-7;
  double max_slack_condition = 1e10;
  std::uint64_t sample_seed = 0;
  sdp::SolverOptions solver{};
  const sdp::ConicBackend* backend = nullptr;
};

struct SynthesisResult {
  sdp::SolveStatus status = sdp::SolveStatus::NumericalFailure;
  Eigen::MatrixXd gain;   // K = Z T^-1
  Eigen::MatrixXd W, V, Z, Y, slack, Q0;
  double epsilon_used = 0.0;
  double eta = 0.0;
  double logdet_q0 = 0.0;
  std::optional<Certificate> certificate;  // P = T^-T W T^-1, L = Y T^-1, U = V^-1
  AnalysisMarginReport analysis_report;
  InclusionReport inclusion_report;
  std::string message;

  [[nodiscard]] bool feasible() const {
    return status == sdp::SolveStatus::Optimal || status == sdp::SolveStatus::Feasible;
  }
};

// Robust gain design: maximizes logdet(Q0) subject to the vertex design
// inequalities, the per-row saturation blocks, and W >= Q0 > 0. The recovered
// certificate is re-validated through check_analysis / check_inclusion; a
// failed cross-validation is reported as numerical failure, never silently.
[[nodiscard]] SynthesisResult solve_synthesis(const PolytopicHessian& hess,
                                              const Eigen::VectorXd& limits,
                                              const SynthesisOptions& options = {});

[[nodiscard]] sdp::Problem build_synthesis_problem(const PolytopicHessian& hess,
                                                   const Eigen::VectorXd& limits,
                                                   const SynthesisOptions& options = {});

struct EllipsoidInfo {
  Eigen::MatrixXd P;
  Eigen::VectorXd semi_axes;   // 1/sqrt(eigenvalues of P), ascending
  double volume_factor = 0.0;  // det(P)^(-1/2); volume = unit-ball volume * factor
};

[[nodiscard]] EllipsoidInfo ellipsoid_of(const Certificate& cert);

// Dead-zone sector value psi(Kg)' U (psi(Kg) - Lg); nonpositive on the
// validity region G.
[[nodiscard]] double sector_value(const Certificate& cert, const Eigen::MatrixXd& gain,
                                  const Eigen::VectorXd& limits, const Eigen::VectorXd& g);

}  // namespace satseek
