#pragma once

#include "evofam/gelfand.hpp"
#include "evofam/modulus.hpp"
#include "evofam/types.hpp"

#include <functional>
#include <memory>
#include <span>

namespace evofam {

struct UniformityReport {
  double alphaMin = 0.0;
  double mMax = 0.0;
  bool pass = false;
};

struct KatoConstants {
  double low = 0.0;
  double high = 0.0;
};

/// Time-dependent sesquilinear form a(t;·,·) on a Gelfand triple, given by
/// a matrix evaluator A(t) with A(t)[i][j] = a(t; e_j, e_i), so that
/// a(t;u,v) = v^H·A(t)·u. Declared bound/coercivity constants are
/// certifiable claims, not trusted facts: verify_uniformity checks them on
/// a grid, and propagation refuses forms whose declared coercivity is not
/// positive (apply shifted() first for merely quasi-coercive forms).
///
/// Evaluators must be pure functions of t; everything here is reentrant.
class NonautonomousForm {
 public:
  using Evaluator = std::function<Matrix(double)>;

  NonautonomousForm(std::shared_ptr<const GelfandTriple> triple, double horizon,
                    Evaluator evaluate, double declared_bound,
                    double declared_coercivity, Modulus modulus, double gamma);

  const GelfandTriple& triple() const { return *triple_; }
  const std::shared_ptr<const GelfandTriple>& triple_ptr() const { return triple_; }
  double horizon() const { return horizon_; }
  double declared_bound() const { return declared_bound_; }
  double declared_coercivity() const { return declared_coercivity_; }
  const Modulus& modulus() const { return modulus_; }
  double gamma() const { return gamma_; }

  /// A(t); t is validated against [0,T] (with roundoff slack) and clamped.
  Matrix evaluate(double t) const;

  /// Largest α(t) with Re a(t,u,u) ≥ α(t)‖u‖²_V: smallest eigenvalue of the
  /// Hermitian part of A(t) against vGram.
  double coercivity_constant(double t) const;

  /// Smallest M(t) with |a(t,u,v)| ≤ M(t)‖u‖_V‖v‖_V.
  double boundedness_constant(double t) const;

  /// Grid sweep of the two constants; pass iff the declared constants hold
  /// uniformly over the grid.
  UniformityReport verify_uniformity(std::span<const double> grid) const;

  /// Smallest C with |a(t,u,v) − a(s,u,v)| ≤ C‖u‖_{V_γu}‖v‖_{V_γv}:
  /// the spectral norm of diag(λ^{-γv/2})·Φ^H·(A(t)−A(s))·Φ·diag(λ^{-γu/2}).
  double dini_deviation(double t, double s, double gamma_u, double gamma_v) const;

  /// a*(t;u,v) = conj(a(t;v,u)); same constants and descriptors.
  NonautonomousForm adjoint() const;

  /// a*_r(t,u,v) = conj(a(T−t,v,u)); same constants and descriptors.
  NonautonomousForm returned_adjoint() const;

  /// a_ω(t;·,·) = a(t;·,·) + ω_s(·|·)_H. Declared constants are recomputed
  /// from the spectral bounds of the H-term against the V norm.
  NonautonomousForm shifted(double omega_s) const;

  /// Extreme values of ‖A_H(t)^{1/2} u‖_H / ‖u‖_V where A_H(t) = M⁻¹A(t):
  /// the discrete square-root-property constants. Requires the spectrum of
  /// A_H(t) in the open right half-plane.
  KatoConstants kato_constants(double t) const;

 private:
  std::shared_ptr<const GelfandTriple> triple_;
  double horizon_;
  Evaluator evaluate_;
  double declared_bound_;
  double declared_coercivity_;
  Modulus modulus_;
  double gamma_;
};

}  // namespace evofam
