#include "evofam/modulus.hpp"

#include "evofam/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evofam {

Modulus Modulus::power(double coeff, double exponent) {
  if (!(coeff >= 0.0)) {
    throw std::invalid_argument("modulus: power coefficient must be >= 0");
  }
  if (!(exponent >= 0.0)) {
    throw std::invalid_argument("modulus: power exponent must be >= 0");
  }
  Modulus m;
  m.kind_ = Kind::Power;
  m.coeff_ = coeff;
  m.exponent_ = exponent;
  return m;
}

Modulus Modulus::table(std::vector<double> t, std::vector<double> omega) {
  if (t.size() != omega.size() || t.size() < 2) {
    throw std::invalid_argument("modulus table needs >= 2 matching knots");
  }
  if (t.front() != 0.0) {
    throw std::invalid_argument("modulus table must start at t = 0");
  }
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!(t[i] < t[i + 1])) {
      throw std::invalid_argument("modulus table knots must increase strictly");
    }
  }
  for (double w : omega) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("modulus table values must be >= 0");
    }
  }
  Modulus m;
  m.kind_ = Kind::Table;
  m.knots_ = std::move(t);
  m.values_ = std::move(omega);
  return m;
}

double Modulus::operator()(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("modulus argument must be >= 0");
  if (kind_ == Kind::Power) {
    if (coeff_ == 0.0) return 0.0;
    return coeff_ * std::pow(t, exponent_);
  }
  if (t >= knots_.back()) return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return (1.0 - w) * values_[lo] + w * values_[hi];
}

namespace {

DiniReport check_dini_power(double c, double a, double gamma, double T) {
  DiniReport report;
  report.samplesUsed = 0;
  if (c == 0.0) return report;  // ω ≡ 0: both quantities vanish.

  const double excess = a - 0.5 * gamma;
  if (excess > 0) {
    report.supRatio = c * std::pow(T, excess);
  } else if (excess == 0) {
    report.supRatio = c;
  } else {
    report.supRatio = std::numeric_limits<double>::infinity();
    report.supFinite = false;
  }
  if (excess > 0) {
    report.integralValue = c * std::pow(T, excess) / excess;
  } else {
    report.integralValue = std::numeric_limits<double>::infinity();
    report.integralFinite = false;
  }
  return report;
}

DiniReport check_dini_table(const Modulus& omega, double gamma, double T) {
  DiniReport report;

  // sup ω(t)/t^{γ/2} on the geometric grid t = T·2^{-k}. The tail of the
  // ratio sequence decides the infinity flag: if the ratio is still rising
  // at the smallest sampled scales the sup does not exist.
  constexpr int kLevels = 61;  // k = 0..60
  double sup = 0.0;
  std::vector<double> ratios(kLevels);
  for (int k = 0; k < kLevels; ++k) {
    const double t = T * std::pow(2.0, -k);
    ratios[k] = omega(t) / std::pow(t, 0.5 * gamma);
    sup = std::max(sup, ratios[k]);
  }
  report.samplesUsed += kLevels;
  bool tail_rising = true;
  for (int k = kLevels - 5; k < kLevels - 1; ++k) {
    if (!(ratios[k + 1] > ratios[k] * (1.0 + 1e-12))) tail_rising = false;
  }
  if (tail_rising && ratios[kLevels - 1] >= sup * (1.0 - 1e-12)) {
    report.supRatio = std::numeric_limits<double>::infinity();
    report.supFinite = false;
  } else {
    report.supRatio = sup;
  }

  // ∫₀^T ω(t)/t^{1+γ/2} dt. Substituting t = τ^{2/γ} gives
  // (2/γ)·∫₀^{T^{γ/2}} ω(τ^{2/γ})/τ² dτ, which is regular at 0 whenever ω
  // vanishes linearly there. Integrate over dyadic shells shrinking toward
  // τ = 0 with a fixed Gauss rule per shell; a tail that fails to decay is
  // the divergence signal.
  const double p = 2.0 / gamma;
  const double tau_max = std::pow(T, 0.5 * gamma);
  const auto& rule = gauss_legendre(15);
  const int kMaxShells = 400;
  double total = 0.0;
  double hi = tau_max;
  bool diverged = true;
  for (int shell = 0; shell < kMaxShells; ++shell) {
    const double lo = 0.5 * hi;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double tau = mid + half * rule.nodes[i];
      const double t = std::pow(tau, p);
      acc += rule.weights[i] * omega(t) / (tau * tau);
    }
    acc *= half * p;
    report.samplesUsed += static_cast<std::int64_t>(rule.nodes.size());
    total += acc;
    hi = lo;
    if (!std::isfinite(total)) break;
    if (shell > 8 && acc <= 1e-14 * std::max(total, 1e-300)) {
      diverged = false;
      break;
    }
  }
  if (!std::isfinite(total)) diverged = true;
  if (diverged) {
    report.integralValue = std::numeric_limits<double>::infinity();
    report.integralFinite = false;
  } else {
    report.integralValue = total;
  }
  return report;
}

}  // namespace

DiniReport check_dini(const Modulus& omega, double gamma, double T) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("check_dini: gamma must lie in (0,1)");
  }
  if (!(T > 0.0)) {
    throw std::invalid_argument("check_dini: T must be positive");
  }
  if (omega.kind() == Modulus::Kind::Power) {
    return check_dini_power(omega.power_coeff(), omega.power_exponent(), gamma, T);
  }
  return check_dini_table(omega, gamma, T);
}

}  // namespace evofam
