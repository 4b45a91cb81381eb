#pragma once

#include <cstdint>
#include <vector>

namespace evofam {

/// Continuity modulus ω: [0,T] → [0,∞). Either the closed power family
/// c·t^a (checkable analytically near t = 0) or a user table with linear
/// interpolation; tables must start at t = 0 and clamp to their last value
/// beyond the final knot.
class Modulus {
 public:
  enum class Kind { Power, Table };

  static Modulus power(double coeff, double exponent);
  static Modulus table(std::vector<double> t, std::vector<double> omega);
  static Modulus zero() { return power(0.0, 1.0); }

  Kind kind() const { return kind_; }
  double power_coeff() const { return coeff_; }
  double power_exponent() const { return exponent_; }

  double operator()(double t) const;

 private:
  Modulus() = default;
  Kind kind_ = Kind::Power;
  double coeff_ = 0.0;
  double exponent_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Outcome of the two Dini conditions: sup_{t≤T} ω(t)/t^{γ/2} and
/// ∫₀^T ω(t)/t^{1+γ/2} dt. Either quantity may fail to be finite; the
/// flags say so and the values are then meaningless.
struct DiniReport {
  double supRatio = 0.0;
  bool supFinite = true;
  double integralValue = 0.0;
  bool integralFinite = true;
  std::int64_t samplesUsed = 0;
};

/// Evaluates both Dini conditions for the modulus. Power-family moduli are
/// handled in closed form; tabulated moduli are sampled on the geometric
/// grid t = T·2^{-k} (sup) and integrated adaptively after the
/// substitution t = τ^{2/γ} that removes the endpoint singularity.
/// Requires γ ∈ (0,1) and T > 0.
DiniReport check_dini(const Modulus& omega, double gamma, double T);

}  // namespace evofam
