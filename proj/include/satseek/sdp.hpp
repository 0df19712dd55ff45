#pragma once

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace satseek::sdp {

// ============================================================================
// Affine expressions over the problem's scalar unknowns
// ============================================================================

// constant + sum coeff_k * x_k. Kept sparse; terms may repeat and are
// consolidated when blocks are compiled.
struct LinExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT: implicit by design

  [[nodiscard]] static LinExpr variable(int index, double coeff = 1.0) {
    LinExpr e;
    e.terms.emplace_back(index, coeff);
    return e;
  }

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double s);
};

[[nodiscard]] LinExpr operator+(LinExpr a, const LinExpr& b);
[[nodiscard]] LinExpr operator-(LinExpr a, const LinExpr& b);
[[nodiscard]] LinExpr operator*(double s, LinExpr a);
[[nodiscard]] LinExpr operator-(LinExpr a);

// Dense matrix of affine expressions.
class AffineMatrix {
 public:
  AffineMatrix(Eigen::Index rows, Eigen::Index cols);

  [[nodiscard]] static AffineMatrix constant(const Eigen::MatrixXd& value);
  [[nodiscard]] static AffineMatrix zero(Eigen::Index rows, Eigen::Index cols);
  [[nodiscard]] static AffineMatrix identity(Eigen::Index dim, double scale = 1.0);

  [[nodiscard]] Eigen::Index rows() const { return rows_; }
  [[nodiscard]] Eigen::Index cols() const { return cols_; }

  [[nodiscard]] LinExpr& operator()(Eigen::Index i, Eigen::Index j);
  [[nodiscard]] const LinExpr& operator()(Eigen::Index i, Eigen::Index j) const;

  [[nodiscard]] AffineMatrix transpose() const;
  [[nodiscard]] AffineMatrix row(Eigen::Index i) const;

  AffineMatrix& operator+=(const AffineMatrix& o);
  AffineMatrix& operator-=(const AffineMatrix& o);

  // Stacks blocks[i][j]; all row/column sizes must be consistent.
  [[nodiscard]] static AffineMatrix stack(
      const std::vector<std::vector<AffineMatrix>>& blocks);

 private:
  Eigen::Index rows_, cols_;
  std::vector<LinExpr> entries_;
};

[[nodiscard]] AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b);
[[nodiscard]] AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b);
[[nodiscard]] AffineMatrix operator*(double s, AffineMatrix a);
[[nodiscard]] AffineMatrix operator*(const Eigen::MatrixXd& a, const AffineMatrix& x);
[[nodiscard]] AffineMatrix operator*(const AffineMatrix& x, const Eigen::MatrixXd& a);

// ============================================================================
// Problem description
// ============================================================================

enum class VarStructure { Symmetric, Diagonal, Full };

[[nodiscard]] std::string to_string(VarStructure s);

struct MatrixVar {
  std::string name;
  int dim = 0;
  VarStructure structure = VarStructure::Full;
  int offset = 0;        // first scalar index
  int scalar_count = 0;  // number of scalar unknowns
};

// Affine semidefinite feasibility/optimization problem:
//   find/optimize x with  G_b(x) >= 0  for every block b,
//   maximizing  sum_k c_k x_k  (+ logdet of one symmetric matrix variable).
// Strictness margins are the caller's responsibility (shift the blocks).
class Problem {
 public:
  int add_variable(const std::string& name, int dim, VarStructure structure);

  [[nodiscard]] AffineMatrix variable(int id) const;
  [[nodiscard]] const std::vector<MatrixVar>& variables() const { return vars_; }
  [[nodiscard]] int scalar_count() const { return scalar_count_; }

  void add_psd_block(const std::string& name, const AffineMatrix& expr);

  // Objective: maximize logdet of a symmetric matrix variable (at most one).
  void set_logdet_objective(int var_id);
  // Objective: additionally maximize sum of linear terms over scalar indices.
  void add_linear_objective(int scalar_index, double coeff);

  struct Block {
    std::string name;
    Eigen::MatrixXd constant;
    std::vector<std::pair<int, Eigen::MatrixXd>> coeffs;  // per scalar index

    [[nodiscard]] Eigen::MatrixXd assemble(const Eigen::VectorXd& x) const;
  };

  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] std::optional<int> logdet_variable() const { return logdet_var_; }
  [[nodiscard]] const std::vector<std::pair<int, double>>& linear_objective() const {
    return linear_objective_;
  }

  // Reads a matrix variable out of a scalar solution vector.
  [[nodiscard]] Eigen::MatrixXd extract(const Eigen::VectorXd& x, int var_id) const;

  // Self-contained replay document: variables, affine blocks as coefficient
  // lists, and the objective.
  [[nodiscard]] nlohmann::json to_json() const;

 private:
  std::vector<MatrixVar> vars_;
  std::vector<Block> blocks_;
  std::optional<int> logdet_var_;
  std::vector<std::pair<int, double>> linear_objective_;
  int scalar_count_ = 0;
};

// ============================================================================
// Backends
// ============================================================================

enum class SolveStatus { Optimal, Feasible, Infeasible, NumericalFailure };

[[nodiscard]] std::string to_string(SolveStatus s);

struct SolverOptions {
  double var_bound = 1e6;       // box |x_k| <= var_bound keeps barriers bounded
  double gap_tol = 1e-6;        // stop the path once nu/t drops below this
  double newton_tol = 1e-12;    // half squared Newton decrement
  int max_newton_iters = 200;
  double t_growth = 8.0;
  int max_path_stages = 200;
  double infeasibility_tol = 1e-9;  // phase-1 slack above -tol means infeasible
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double phase1_slack = std::numeric_limits<double>::quiet_NaN();
  std::string message;
};

struct Capabilities {
  bool semidefinite_cones = false;
  bool linear_equalities = false;
  bool logdet_objective = false;
};

class ConicBackend {
 public:
  virtual ~ConicBackend() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual Capabilities capabilities() const = 0;
  [[nodiscard]] virtual Solution solve(const Problem& problem,
                                       const SolverOptions& options) const = 0;
};

// Logarithmic-barrier path-following interior-point method. Phase 1 minimizes
// the eigenvalue slack to decide strict feasibility; phase 2 follows the
// central path of the (logdet + linear) objective.
class BarrierBackend final : public ConicBackend {
 public:
  [[nodiscard]] std::string name() const override { return "barrier"; }
  [[nodiscard]] Capabilities capabilities() const override { return {true, false, true}; }
  [[nodiscard]] Solution solve(const Problem& problem,
                               const SolverOptions& options) const override;
};

[[nodiscard]] std::vector<std::string> backend_names();
// Throws on unknown names.
[[nodiscard]] const ConicBackend& backend(const std::string& name);
// Honors the SATSEEK_BACKEND environment variable; defaults to "barrier".
[[nodiscard]] const ConicBackend& default_backend();

}  // namespace satseek::sdp
