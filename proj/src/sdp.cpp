#include "satseek/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace satseek::sdp {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

// ============================================================================
// LinExpr / AffineMatrix
// ============================================================================

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant -= o.constant;
  for (const auto& [k, c] : o.terms) terms.emplace_back(k, -c);
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  constant *= s;
  for (auto& [k, c] : terms) c *= s;
  return *this;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }

AffineMatrix::AffineMatrix(Eigen::Index rows, Eigen::Index cols)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows * cols)) {}

AffineMatrix AffineMatrix::constant(const Eigen::MatrixXd& value) {
  AffineMatrix m(value.rows(), value.cols());
  for (Eigen::Index i = 0; i < value.rows(); ++i)
    for (Eigen::Index j = 0; j < value.cols(); ++j) m(i, j) = LinExpr(value(i, j));
  return m;
}

AffineMatrix AffineMatrix::zero(Eigen::Index rows, Eigen::Index cols) {
  return {rows, cols};
}

AffineMatrix AffineMatrix::identity(Eigen::Index dim, double scale) {
  return constant(scale * Eigen::MatrixXd::Identity(dim, dim));
}

LinExpr& AffineMatrix::operator()(Eigen::Index i, Eigen::Index j) {
  return entries_[static_cast<std::size_t>(i * cols_ + j)];
}

const LinExpr& AffineMatrix::operator()(Eigen::Index i, Eigen::Index j) const {
  return entries_[static_cast<std::size_t>(i * cols_ + j)];
}

AffineMatrix AffineMatrix::transpose() const {
  AffineMatrix out(cols_, rows_);
  for (Eigen::Index i = 0; i < rows_; ++i)
    for (Eigen::Index j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

AffineMatrix AffineMatrix::row(Eigen::Index i) const {
  AffineMatrix out(1, cols_);
  for (Eigen::Index j = 0; j < cols_; ++j) out(0, j) = (*this)(i, j);
  return out;
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "affine matrix shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "affine matrix shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

AffineMatrix AffineMatrix::stack(const std::vector<std::vector<AffineMatrix>>& blocks) {
  require(!blocks.empty() && !blocks.front().empty(), "empty block stack");
  Eigen::Index rows = 0, cols = 0;
  for (const AffineMatrix& b : blocks.front()) cols += b.cols();
  for (const auto& row : blocks) rows += row.front().rows();
  AffineMatrix out(rows, cols);
  Eigen::Index r0 = 0;
  for (const auto& row : blocks) {
    Eigen::Index c0 = 0;
    const Eigen::Index rblock = row.front().rows();
    for (const AffineMatrix& b : row) {
      require(b.rows() == rblock, "inconsistent block row heights");
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
      c0 += b.cols();
    }
    require(c0 == cols, "inconsistent block row widths");
    r0 += rblock;
  }
  return out;
}

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }

AffineMatrix operator*(double s, AffineMatrix a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) *= s;
  return a;
}

AffineMatrix operator*(const Eigen::MatrixXd& a, const AffineMatrix& x) {
  require(a.cols() == x.rows(), "matrix product shape mismatch");
  AffineMatrix out(a.rows(), x.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      LinExpr acc;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        if (a(i, k) != 0.0) acc += a(i, k) * x(k, j);
      }
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

AffineMatrix operator*(const AffineMatrix& x, const Eigen::MatrixXd& a) {
  require(x.cols() == a.rows(), "matrix product shape mismatch");
  AffineMatrix out(x.rows(), a.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      LinExpr acc;
      for (Eigen::Index k = 0; k < x.cols(); ++k) {
        if (a(k, j) != 0.0) acc += a(k, j) * x(i, k);
      }
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

// ============================================================================
// Problem
// ============================================================================

std::string to_string(VarStructure s) {
  switch (s) {
    case VarStructure::Symmetric: return "symmetric";
    case VarStructure::Diagonal: return "diagonal";
    case VarStructure::Full: return "full";
  }
  return "?";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

int Problem::add_variable(const std::string& name, int dim, VarStructure structure) {
  require(dim >= 1, "matrix variable dimension must be positive");
  MatrixVar v;
  v.name = name;
  v.dim = dim;
  v.structure = structure;
  v.offset = scalar_count_;
  switch (structure) {
    case VarStructure::Symmetric: v.scalar_count = dim * (dim + 1) / 2; break;
    case VarStructure::Diagonal: v.scalar_count = dim; break;
    case VarStructure::Full: v.scalar_count = dim * dim; break;
  }
  scalar_count_ += v.scalar_count;
  vars_.push_back(std::move(v));
  return static_cast<int>(vars_.size()) - 1;
}

AffineMatrix Problem::variable(int id) const {
  const MatrixVar& v = vars_.at(static_cast<std::size_t>(id));
  AffineMatrix m(v.dim, v.dim);
  switch (v.structure) {
    case VarStructure::Symmetric: {
      int k = v.offset;
      for (int i = 0; i < v.dim; ++i) {
        for (int j = i; j < v.dim; ++j) {
          m(i, j) = LinExpr::variable(k);
          m(j, i) = LinExpr::variable(k);
          ++k;
        }
      }
      break;
    }
    case VarStructure::Diagonal: {
      for (int i = 0; i < v.dim; ++i) m(i, i) = LinExpr::variable(v.offset + i);
      break;
    }
    case VarStructure::Full: {
      int k = v.offset;
      for (int i = 0; i < v.dim; ++i)
        for (int j = 0; j < v.dim; ++j) m(i, j) = LinExpr::variable(k++);
      break;
    }
  }
  return m;
}

void Problem::add_psd_block(const std::string& name, const AffineMatrix& expr) {
  require(expr.rows() == expr.cols(), "PSD block must be square");
  const Eigen::Index n = expr.rows();
  Block block;
  block.name = name;
  block.constant = Eigen::MatrixXd::Zero(n, n);
  std::map<int, Eigen::MatrixXd> coeffs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const LinExpr& e = expr(i, j);
      // Symmetrize while scattering; asymmetric inputs are averaged.
      block.constant(i, j) += 0.5 * e.constant;
      block.constant(j, i) += 0.5 * e.constant;
      for (const auto& [k, c] : e.terms) {
        auto [it, inserted] = coeffs.try_emplace(k, Eigen::MatrixXd::Zero(n, n));
        it->second(i, j) += 0.5 * c;
        it->second(j, i) += 0.5 * c;
      }
    }
  }
  for (auto& [k, m] : coeffs) {
    if (m.cwiseAbs().maxCoeff() > 0.0) block.coeffs.emplace_back(k, std::move(m));
  }
  blocks_.push_back(std::move(block));
}

void Problem::set_logdet_objective(int var_id) {
  require(!logdet_var_.has_value(), "logdet objective already set");
  const MatrixVar& v = vars_.at(static_cast<std::size_t>(var_id));
  require(v.structure != VarStructure::Full, "logdet objective needs a symmetric variable");
  logdet_var_ = var_id;
}

void Problem::add_linear_objective(int scalar_index, double coeff) {
  require(scalar_index >= 0 && scalar_index < scalar_count_, "objective index out of range");
  linear_objective_.emplace_back(scalar_index, coeff);
}

Eigen::MatrixXd Problem::Block::assemble(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd g = constant;
  for (const auto& [k, a] : coeffs) g += x[k] * a;
  return g;
}

Eigen::MatrixXd Problem::extract(const Eigen::VectorXd& x, int var_id) const {
  const MatrixVar& v = vars_.at(static_cast<std::size_t>(var_id));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(v.dim, v.dim);
  switch (v.structure) {
    case VarStructure::Symmetric: {
      int k = v.offset;
      for (int i = 0; i < v.dim; ++i)
        for (int j = i; j < v.dim; ++j) {
          m(i, j) = x[k];
          m(j, i) = x[k];
          ++k;
        }
      break;
    }
    case VarStructure::Diagonal:
      for (int i = 0; i < v.dim; ++i) m(i, i) = x[v.offset + i];
      break;
    case VarStructure::Full: {
      int k = v.offset;
      for (int i = 0; i < v.dim; ++i)
        for (int j = 0; j < v.dim; ++j) m(i, j) = x[k++];
      break;
    }
  }
  return m;
}

nlohmann::json Problem::to_json() const {
  nlohmann::json doc;
  doc["format"] = "satseek-conic-problem";
  doc["version"] = 1;
  doc["scalar_count"] = scalar_count_;
  nlohmann::json vars = nlohmann::json::array();
  for (const MatrixVar& v : vars_) {
    vars.push_back({{"name", v.name},
                    {"dim", v.dim},
                    {"structure", to_string(v.structure)},
                    {"offset", v.offset},
                    {"scalars", v.scalar_count}});
  }
  doc["variables"] = std::move(vars);

  nlohmann::json objective;
  objective["sense"] = "maximize";
  if (logdet_var_.has_value()) {
    objective["logdet"] = vars_[static_cast<std::size_t>(*logdet_var_)].name;
  } else {
    objective["logdet"] = nullptr;
  }
  nlohmann::json linear = nlohmann::json::array();
  for (const auto& [k, c] : linear_objective_) {
    linear.push_back({{"scalar", k}, {"coeff", c}});
  }
  objective["linear"] = std::move(linear);
  doc["objective"] = std::move(objective);

  nlohmann::json blocks = nlohmann::json::array();
  for (const Block& b : blocks_) {
    nlohmann::json jb;
    jb["name"] = b.name;
    jb["size"] = b.constant.rows();
    jb["constant"] = matrix_to_json(b.constant);
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [k, m] : b.coeffs) {
      coeffs.push_back({{"scalar", k}, {"matrix", matrix_to_json(m)}});
    }
    jb["coefficients"] = std::move(coeffs);
    blocks.push_back(std::move(jb));
  }
  doc["blocks"] = std::move(blocks);
  return doc;
}

// ============================================================================
// Barrier interior-point backend
// ============================================================================

namespace {

struct WorkBlock {
  Eigen::MatrixXd constant;
  std::vector<std::pair<int, Eigen::MatrixXd>> coeffs;

  [[nodiscard]] Eigen::MatrixXd assemble(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd g = constant;
    for (const auto& [k, a] : coeffs) g += x[k] * a;
    return g;
  }
};

// Cholesky-based PD check; returns logdet or nullopt when not PD.
std::optional<double> logdet_if_pd(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto& l = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double d = l(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    logdet += std::log(d);
  }
  return 2.0 * logdet;
}

struct BarrierEval {
  bool interior = false;
  double value = -std::numeric_limits<double>::infinity();
};

BarrierEval barrier_value(const std::vector<WorkBlock>& blocks, const std::vector<double>& weights,
                          const Eigen::VectorXd& lin, const Eigen::VectorXd& x) {
  BarrierEval eval;
  double total = lin.dot(x);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto logdet = logdet_if_pd(blocks[b].assemble(x));
    if (!logdet.has_value()) return eval;
    total += weights[b] * *logdet;
  }
  eval.interior = true;
  eval.value = total;
  return eval;
}

// Maximizes lin.x + sum_b w_b logdet(G_b(x)) by damped Newton from a strictly
// interior start. Returns false on line-search collapse before the tolerance.
bool newton_maximize(const std::vector<WorkBlock>& blocks, const std::vector<double>& weights,
                     const Eigen::VectorXd& lin, Eigen::VectorXd& x, const SolverOptions& opt) {
  const int m = static_cast<int>(x.size());
  Eigen::VectorXd grad(m);
  Eigen::MatrixXd hess(m, m);
  std::vector<Eigen::MatrixXd> ginv_a;

  for (int iter = 0; iter < opt.max_newton_iters; ++iter) {
    grad = lin;
    hess.setZero();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const WorkBlock& blk = blocks[b];
      const Eigen::MatrixXd g = blk.assemble(x);
      Eigen::LLT<Eigen::MatrixXd> llt(g);
      if (llt.info() != Eigen::Success) return false;
      const double w = weights[b];
      ginv_a.clear();
      ginv_a.reserve(blk.coeffs.size());
      for (const auto& [k, a] : blk.coeffs) ginv_a.push_back(llt.solve(a));
      for (std::size_t p = 0; p < blk.coeffs.size(); ++p) {
        const int kp = blk.coeffs[p].first;
        grad[kp] += w * ginv_a[p].trace();
        for (std::size_t q = p; q < blk.coeffs.size(); ++q) {
          const int kq = blk.coeffs[q].first;
          const double v = -w * (ginv_a[p].cwiseProduct(ginv_a[q].transpose())).sum();
          hess(kp, kq) += v;
          if (kp != kq) hess(kq, kp) += v;
        }
      }
    }

    // Ascent direction: (-hess) d = grad with -hess positive semidefinite.
    Eigen::MatrixXd neg = -hess;
    const double ridge = 1e-13 * std::max(1.0, neg.diagonal().maxCoeff());
    neg.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(neg);
    if (ldlt.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = ldlt.solve(grad);
    const double decrement2 = grad.dot(d);
    if (!(decrement2 > 0.0) || 0.5 * decrement2 < opt.newton_tol) return true;

    const BarrierEval f0 = barrier_value(blocks, weights, lin, x);
    double alpha = 1.0;
    bool moved = false;
    while (alpha > 1e-14) {
      const Eigen::VectorXd xn = x + alpha * d;
      const BarrierEval fn = barrier_value(blocks, weights, lin, xn);
      if (fn.interior && fn.value > f0.value + 0.25 * alpha * decrement2) {
        x = xn;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return true;  // stalled at the working precision
  }
  return true;
}

void append_box_blocks(std::vector<WorkBlock>& blocks, int count, double bound) {
  for (int k = 0; k < count; ++k) {
    WorkBlock lo, hi;
    lo.constant = Eigen::MatrixXd::Constant(1, 1, bound);
    lo.coeffs.emplace_back(k, Eigen::MatrixXd::Constant(1, 1, -1.0));
    hi.constant = Eigen::MatrixXd::Constant(1, 1, bound);
    hi.coeffs.emplace_back(k, Eigen::MatrixXd::Constant(1, 1, 1.0));
    blocks.push_back(std::move(lo));
    blocks.push_back(std::move(hi));
  }
}

double total_barrier_dim(const std::vector<WorkBlock>& blocks) {
  double nu = 0.0;
  for (const WorkBlock& b : blocks) nu += static_cast<double>(b.constant.rows());
  return nu;
}

}  // namespace

Solution BarrierBackend::solve(const Problem& problem, const SolverOptions& opt) const {
  Solution sol;
  const int m = problem.scalar_count();
  if (problem.blocks().empty()) {
    sol.status = SolveStatus::NumericalFailure;
    sol.message = "no constraint blocks";
    return sol;
  }

  std::vector<WorkBlock> base;
  base.reserve(problem.blocks().size());
  for (const Problem::Block& b : problem.blocks()) {
    base.push_back({b.constant, b.coeffs});
  }

  // Objective block: the logdet variable is both constraint (weight 1) and
  // objective (weight t).
  std::optional<std::size_t> obj_block;
  if (problem.logdet_variable().has_value()) {
    const int id = *problem.logdet_variable();
    const MatrixVar& v = problem.variables()[static_cast<std::size_t>(id)];
    WorkBlock blk;
    blk.constant = Eigen::MatrixXd::Zero(v.dim, v.dim);
    if (v.structure == VarStructure::Symmetric) {
      int k = v.offset;
      for (int i = 0; i < v.dim; ++i)
        for (int j = i; j < v.dim; ++j) {
          Eigen::MatrixXd a = Eigen::MatrixXd::Zero(v.dim, v.dim);
          a(i, j) = 1.0;
          a(j, i) = 1.0;
          blk.coeffs.emplace_back(k++, std::move(a));
        }
    } else {
      for (int i = 0; i < v.dim; ++i) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(v.dim, v.dim);
        a(i, i) = 1.0;
        blk.coeffs.emplace_back(v.offset + i, std::move(a));
      }
    }
    obj_block = base.size();
    base.push_back(std::move(blk));
  }

  // ---------------------------------------------------------------- phase 1
  // minimize s subject to G_b(x) + s I > 0 and variable boxes.
  {
    std::vector<WorkBlock> aug;
    aug.reserve(base.size() + 2 * static_cast<std::size_t>(m));
    for (const WorkBlock& b : base) {
      WorkBlock wb = b;
      wb.coeffs.emplace_back(m, Eigen::MatrixXd::Identity(b.constant.rows(), b.constant.rows()));
      aug.push_back(std::move(wb));
    }
    append_box_blocks(aug, m, opt.var_bound);

    Eigen::VectorXd xs = Eigen::VectorXd::Zero(m + 1);
    double worst = 0.0;
    for (const WorkBlock& b : base) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.constant);
      worst = std::max(worst, -eig.eigenvalues().minCoeff());
    }
    xs[m] = worst + 1.0;

    const double nu = total_barrier_dim(aug);
    const std::vector<double> weights(aug.size(), 1.0);
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(m + 1);
    double t = 1.0;
    bool feasible = false;
    double slack = xs[m];
    for (int stage = 0; stage < opt.max_path_stages; ++stage) {
      lin[m] = -t;
      if (!newton_maximize(aug, weights, lin, xs, opt)) {
        sol.status = SolveStatus::NumericalFailure;
        sol.message = "phase-1 Newton failure";
        return sol;
      }
      slack = xs[m];
      if (slack < -10.0 * opt.infeasibility_tol) {
        feasible = true;
        break;
      }
      // Central-path bound: the optimal slack is above slack - nu/t.
      if (slack - nu / t > opt.infeasibility_tol) {
        feasible = false;
        break;
      }
      if (nu / t < 0.05 * opt.infeasibility_tol) {
        feasible = slack < -opt.infeasibility_tol;
        break;
      }
      t *= opt.t_growth;
    }
    sol.phase1_slack = slack;
    if (!feasible) {
      sol.status = SolveStatus::Infeasible;
      sol.message = "phase-1 slack " + std::to_string(slack);
      return sol;
    }
    sol.x = xs.head(m);
  }

  // ---------------------------------------------------------------- phase 2
  std::vector<WorkBlock> aug = base;
  append_box_blocks(aug, m, opt.var_bound);
  const double nu = total_barrier_dim(aug);
  std::vector<double> weights(aug.size(), 1.0);
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(m);

  const bool has_objective = obj_block.has_value() || !problem.linear_objective().empty();
  Eigen::VectorXd x = sol.x;

  if (!has_objective) {
    // Analytic center: a well-interior witness of feasibility.
    if (!newton_maximize(aug, weights, lin, x, opt)) {
      sol.status = SolveStatus::NumericalFailure;
      sol.message = "centering Newton failure";
      return sol;
    }
    sol.x = x;
    sol.status = SolveStatus::Feasible;
    sol.objective = 0.0;
    return sol;
  }

  double t = 1.0;
  for (int stage = 0; stage < opt.max_path_stages; ++stage) {
    if (obj_block.has_value()) weights[*obj_block] = 1.0 + t;
    lin.setZero();
    for (const auto& [k, c] : problem.linear_objective()) lin[k] += t * c;
    if (!newton_maximize(aug, weights, lin, x, opt)) {
      sol.status = SolveStatus::NumericalFailure;
      sol.message = "phase-2 Newton failure at stage " + std::to_string(stage);
      return sol;
    }
    if (nu / t < opt.gap_tol) break;
    t *= opt.t_growth;
  }

  sol.x = x;
  sol.status = SolveStatus::Optimal;
  double objective = 0.0;
  for (const auto& [k, c] : problem.linear_objective()) objective += c * x[k];
  if (obj_block.has_value()) {
    const auto logdet = logdet_if_pd(aug[*obj_block].assemble(x));
    objective += logdet.value_or(std::numeric_limits<double>::quiet_NaN());
  }
  sol.objective = objective;
  sol.message = "path gap " + std::to_string(nu / t);
  return sol;
}

// ============================================================================
// Backend registry
// ============================================================================

std::vector<std::string> backend_names() { return {"barrier"}; }

const ConicBackend& backend(const std::string& name) {
  static const BarrierBackend barrier;
  if (name == "barrier") return barrier;
  throw std::invalid_argument("unknown conic backend '" + name + "'; available: barrier");
}

const ConicBackend& default_backend() {
  if (const char* env = std::getenv("SATSEEK_BACKEND")) {
    return backend(env);
  }
  return backend("barrier");
}

}  // namespace satseek::sdp
