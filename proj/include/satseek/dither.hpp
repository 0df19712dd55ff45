#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "satseek/rational.hpp"

namespace satseek {

// One violated frequency-exclusion rule: multiplier `index` collides with
// `offending_value` produced by `rule` (e.g. "half-sum(1,2)").
struct FrequencyViolation {
  std::size_t index;
  Rational offending_value;
  std::string rule;
};

struct FrequencyReport {
  bool valid = true;
  std::vector<FrequencyViolation> violations;
};

// Checks the pairwise exclusion rules on the multipliers, in exact rational
// arithmetic. For each i the multiplier must avoid: every other multiplier,
// every half-sum (w_j + w_k)/2 with (j,k) != (i,i), and every sum or
// absolute difference w_k +- w_l with k != l.
[[nodiscard]] FrequencyReport validate_frequencies(const std::vector<Rational>& multipliers);

// Common period of all dither tones and the matching fundamental frequency.
struct PeriodInfo {
  double period;          // seconds
  double base_frequency;  // 2*pi / period
};

// Probe/demodulation signal pair. Tone i runs at multipliers[i] * base_frequency;
// the multipliers are exact rationals so period and validity computations stay exact.
class DitherSpec {
 public:
  DitherSpec(Eigen::VectorXd amplitudes, std::vector<Rational> multipliers,
             double base_frequency);

  [[nodiscard]] Eigen::Index n() const { return amplitudes_.size(); }
  [[nodiscard]] const Eigen::VectorXd& amplitudes() const { return amplitudes_; }
  [[nodiscard]] const std::vector<Rational>& multipliers() const { return multipliers_; }
  [[nodiscard]] double base_frequency() const { return base_frequency_; }
  [[nodiscard]] double frequency(Eigen::Index i) const {
    return rational_to_double(multipliers_[static_cast<std::size_t>(i)]) * base_frequency_;
  }
  [[nodiscard]] Eigen::VectorXd frequencies() const;
  [[nodiscard]] double max_frequency() const;

  // Same tones at a scaled base frequency; the rational multiplier structure
  // is preserved, so periods and validity are unaffected.
  [[nodiscard]] DitherSpec with_base_frequency(double base) const;
  [[nodiscard]] DitherSpec with_amplitudes(Eigen::VectorXd amplitudes) const;

 private:
  Eigen::VectorXd amplitudes_;
  std::vector<Rational> multipliers_;
  double base_frequency_;
};

// S(t): entries a_i sin(w_i t).
[[nodiscard]] Eigen::VectorXd probe_signal(const DitherSpec& spec, double t);

// M(t): entries (2/a_i) sin(w_i t).
[[nodiscard]] Eigen::VectorXd demod_signal(const DitherSpec& spec, double t);

// d/dt of the probe and demodulation signals.
[[nodiscard]] Eigen::VectorXd probe_rate(const DitherSpec& spec, double t);
[[nodiscard]] Eigen::VectorXd demod_rate(const DitherSpec& spec, double t);

// Smallest T > 0 making every tone T-periodic, via exact rational LCM of the
// tone periods.
[[nodiscard]] PeriodInfo common_period(const DitherSpec& spec);

// Delta(t) = M(t) S(t)^T - I. Diagonal entries -cos(2 w_i t); off-diagonal
// (a_j/a_i) [cos((w_i - w_j) t) - cos((w_i + w_j) t)]. Zero average over one
// common period.
[[nodiscard]] Eigen::MatrixXd delta_matrix(const DitherSpec& spec, Eigen::Index hess_dim,
                                           double t);

// (1/T) * integral of f over [0, T] by composite Simpson on a uniform grid.
// Exact (to roundoff) for the trigonometric polynomials generated here once
// the grid resolves the highest harmonic. `quadrature_points` counts
// subintervals and must be >= 64; odd counts are rounded up.
template <class F>
[[nodiscard]] auto signal_average(F&& f, const PeriodInfo& period, int quadrature_points = 4096) {
  using Result = std::decay_t<decltype(f(0.0))>;
  if (quadrature_points < 64) {
    throw std::invalid_argument("signal_average needs at least 64 quadrature points");
  }
  int n = quadrature_points;
  if (n % 2 != 0) ++n;
  const double h = period.period / n;
  Result acc = f(0.0);
  acc += f(period.period);
  for (int k = 1; k < n; ++k) {
    const double w = (k % 2 == 0) ? 2.0 : 4.0;
    acc += w * f(k * h);
  }
  // Simpson weight h/3 combined with the 1/T average.
  Result out = acc * (h / (3.0 * period.period));
  return out;
}

}  // namespace satseek
