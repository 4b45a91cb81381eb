#pragma once

#include "evofam/forms.hpp"
#include "evofam/gelfand.hpp"

#include <cstdint>
#include <memory>

namespace evofam {

/// 1D analogue of the heat equation with time-dependent Robin boundary
/// conditions: P1 elements on a uniform mesh of Ω = (0,1), natural boundary,
/// A(t) = stiffness + β(t)·(rank-2 endpoint term) with β(t) = b₀ + b₁·t^α.
/// The time profile is exactly Hölder-α at t = 0, so declared and true
/// moduli coincide.
struct RobinProblem {
  int nElems = 16;
  double betaBase = 1.0;   // b₀
  double betaAmp = 1.0;    // b₁
  double holder = 0.75;    // α ∈ (1/4, 1]
  double horizon = 1.0;

  static RobinProblem stock() { return RobinProblem{64, 1.0, 0.3, 0.75, 1.0}; }
};

struct RobinBuild {
  std::shared_ptr<const GelfandTriple> triple;
  NonautonomousForm form;
  double gamma = 0.0;          // declared interpolation exponent r₀ + 1/2
  double modulusCoeff = 0.0;   // c in ω(t) = c·t^α
  double suggestedShift = 0.0; // 0 when the raw form is coercive
};

RobinBuild build_robin(const RobinProblem& problem);

/// 1D analogue of the Schrödinger operator with time-dependent potential:
/// P1 elements with Dirichlet conditions on (−L, L), weight m₀(x) = 1 + x²,
/// potential m(t,x) = μ(t)·m₀(x) with μ(t) = offset + amp·sin(freq·t).
/// vGram carries the weighted H¹ inner product of the weighted form domain.
struct SchrodingerProblem {
  int nElems = 16;
  double halfWidth = 1.0;   // L
  double muOffset = 1.0;
  double muAmp = 0.5;
  double muFreq = 1.0;
  double sobolevIndex = 0.5;  // γ descriptor; clamped into (0,1) if at an endpoint
  double horizon = 1.0;

  static SchrodingerProblem stock() {
    return SchrodingerProblem{48, 1.0, 1.0, 0.5, 1.0, 0.5, 1.0};
  }
};

struct SchrodingerBuild {
  std::shared_ptr<const GelfandTriple> triple;
  NonautonomousForm form;
  double alpha1 = 0.0;  // lower envelope of μ
  double alpha2 = 0.0;  // upper envelope of μ
  double kappa = 0.0;   // Lipschitz constant of μ
  double modulusCoeff = 0.0;       // κ' in ω(t) = κ'·t
  double conditionConstant = 0.0;  // κ·(1 + L²): weight bound on the truncation
};

SchrodingerBuild build_schrodinger(const SchrodingerProblem& problem);

/// Reproducible random coercive problem for property tests: HPD Grams with
/// all generalized eigenvalues ≥ 1 and A(t) = A₀ + φ(t)·B with A₀ coercive
/// and ‖B‖ small enough that coercivity persists on [0, T]. Same seed,
/// same matrices, bitwise.
enum class Smoothness { Lipschitz, Holder };

struct RandomBuild {
  std::shared_ptr<const GelfandTriple> triple;
  NonautonomousForm form;
};

RandomBuild random_problem(int n, std::uint64_t seed, Smoothness smoothness,
                           double holder_exponent = 0.75, double horizon = 1.0);

}  // namespace evofam
