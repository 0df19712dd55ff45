#include "satseek/dither.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace satseek {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

FrequencyReport validate_frequencies(const std::vector<Rational>& multipliers) {
  const std::size_t n = multipliers.size();
  for (std::size_t i = 0; i < n; ++i) {
    require(multipliers[i] > Rational(0), "frequency multipliers must be positive");
  }
  FrequencyReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& wi = multipliers[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && wi == multipliers[j]) {
        report.violations.push_back(
            {i, multipliers[j], "equal(" + std::to_string(j) + ")"});
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        if (j == i && k == i) continue;  // (w_i + w_i)/2 == w_i trivially
        const Rational half = (multipliers[j] + multipliers[k]) / 2;
        if (wi == half) {
          report.violations.push_back(
              {i, half, "half-sum(" + std::to_string(j) + "," + std::to_string(k) + ")"});
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k + 1; l < n; ++l) {
        const Rational sum = multipliers[k] + multipliers[l];
        const Rational diff = boost::abs(multipliers[k] - multipliers[l]);
        if (wi == sum) {
          report.violations.push_back(
              {i, sum, "sum(" + std::to_string(k) + "," + std::to_string(l) + ")"});
        }
        if (wi == diff) {
          report.violations.push_back(
              {i, diff, "difference(" + std::to_string(k) + "," + std::to_string(l) + ")"});
        }
      }
    }
  }
  report.valid = report.violations.empty();
  return report;
}

DitherSpec::DitherSpec(Eigen::VectorXd amplitudes, std::vector<Rational> multipliers,
                       double base_frequency)
    : amplitudes_(std::move(amplitudes)),
      multipliers_(std::move(multipliers)),
      base_frequency_(base_frequency) {
  require(amplitudes_.size() >= 1, "dither needs at least one tone");
  require(static_cast<std::size_t>(amplitudes_.size()) == multipliers_.size(),
          "amplitude and multiplier counts must match");
  require((amplitudes_.array() != 0.0).all(), "dither amplitudes must be nonzero");
  require(std::isfinite(base_frequency_) && base_frequency_ > 0.0,
          "base frequency must be positive");
  const FrequencyReport report = validate_frequencies(multipliers_);
  if (!report.valid) {
    std::string detail;
    for (const FrequencyViolation& v : report.violations) {
      detail += " [multiplier " + std::to_string(v.index) + " hits " +
                format_rational(v.offending_value) + " via " + v.rule + "]";
    }
    throw std::invalid_argument("dither frequency multipliers violate the exclusion rules:" +
                                detail);
  }
}

Eigen::VectorXd DitherSpec::frequencies() const {
  Eigen::VectorXd w(n());
  for (Eigen::Index i = 0; i < n(); ++i) w[i] = frequency(i);
  return w;
}

double DitherSpec::max_frequency() const { return frequencies().maxCoeff(); }

DitherSpec DitherSpec::with_base_frequency(double base) const {
  return {amplitudes_, multipliers_, base};
}

DitherSpec DitherSpec::with_amplitudes(Eigen::VectorXd amplitudes) const {
  return {std::move(amplitudes), multipliers_, base_frequency_};
}

Eigen::VectorXd probe_signal(const DitherSpec& spec, double t) {
  Eigen::VectorXd s(spec.n());
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    s[i] = spec.amplitudes()[i] * std::sin(spec.frequency(i) * t);
  }
  return s;
}

Eigen::VectorXd demod_signal(const DitherSpec& spec, double t) {
  Eigen::VectorXd m(spec.n());
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    m[i] = 2.0 / spec.amplitudes()[i] * std::sin(spec.frequency(i) * t);
  }
  return m;
}

Eigen::VectorXd probe_rate(const DitherSpec& spec, double t) {
  Eigen::VectorXd s(spec.n());
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    const double w = spec.frequency(i);
    s[i] = spec.amplitudes()[i] * w * std::cos(w * t);
  }
  return s;
}

Eigen::VectorXd demod_rate(const DitherSpec& spec, double t) {
  Eigen::VectorXd m(spec.n());
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    const double w = spec.frequency(i);
    m[i] = 2.0 / spec.amplitudes()[i] * w * std::cos(w * t);
  }
  return m;
}

PeriodInfo common_period(const DitherSpec& spec) {
  // Tone period: (2*pi / base) * (q_i / p_i); rational LCM over the tones.
  Rational lcm(spec.multipliers().front().denominator(),
               spec.multipliers().front().numerator());
  for (std::size_t i = 1; i < spec.multipliers().size(); ++i) {
    const Rational& m = spec.multipliers()[i];
    lcm = rational_lcm(lcm, Rational(m.denominator(), m.numerator()));
  }
  const double period = 2.0 * std::numbers::pi / spec.base_frequency() * rational_to_double(lcm);
  return {period, 2.0 * std::numbers::pi / period};
}

Eigen::MatrixXd delta_matrix(const DitherSpec& spec, Eigen::Index hess_dim, double t) {
  require(hess_dim == spec.n(), "delta_matrix dimension mismatch");
  const Eigen::Index n = spec.n();
  Eigen::MatrixXd delta(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = spec.frequency(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        delta(i, i) = -std::cos(2.0 * wi * t);
      } else {
        const double wj = spec.frequency(j);
        const double ratio = spec.amplitudes()[j] / spec.amplitudes()[i];
        delta(i, j) = ratio * (std::cos((wi - wj) * t) - std::cos((wi + wj) * t));
      }
    }
  }
  return delta;
}

}  // namespace satseek
