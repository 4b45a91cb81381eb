#pragma once

#include "evofam/forms.hpp"
#include "evofam/propagator.hpp"
#include "evofam/subdivision.hpp"
#include "evofam/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace evofam {

/// Evolution-family axioms on a grid of (r,s,t) triples with s ≤ r ≤ t:
/// the identity U(t,t) = I and the cocycle law U(t,s) = U(t,r)·U(r,s),
/// both measured in L(H).
struct AxiomReport {
  double maxIdentityDefect = 0.0;
  double maxCocycleDefect = 0.0;
};

AxiomReport check_axioms(const NonautonomousForm& form, const Subdivision& lambda,
                         std::span<const std::array<double, 3>> triples,
                         double exp_tolerance = kDefaultExpTolerance,
                         int threads = 1);

/// The returned-adjoint duality: the H-adjoint of the returned-adjoint
/// propagator on Λ equals the propagator of the original form on the
/// reflected partition Λ_T at the reflected times,
///   h_adjoint(U*_{r,Λ}(t,s)) = U_{Λ_T}(T−s, T−t).
/// WrongPartition evaluates the right side on Λ instead of Λ_T: the
/// regression guard for the reflection subtlety (large defect expected for
/// nonuniform Λ).
enum class DualityVariant { Correct, WrongPartition };

struct DualityReport {
  double maxDefect = 0.0;
  DualityVariant variant = DualityVariant::Correct;
};

DualityReport check_duality(const NonautonomousForm& form, const Subdivision& lambda,
                            std::span<const std::pair<double, double>> pairs,
                            DualityVariant variant = DualityVariant::Correct,
                            double exp_tolerance = kDefaultExpTolerance,
                            int threads = 1);

/// The V'-extension bound, computed along two independent routes: directly
/// as sup ‖U_Λ(t,s)‖_{L(V')} and through the duality identity as
/// sup ‖U*_{r,Λ_T}(T−s,T−t)‖_{L(V)}. The two sups coincide up to
/// exponential/rounding error; agreementDefect is the largest per-pair gap.
struct VprimeExtensionReport {
  double supDirect = 0.0;
  double supAdjointRoute = 0.0;
  double agreementDefect = 0.0;
};

VprimeExtensionReport vprime_extension_bound(
    const NonautonomousForm& form, const Subdivision& lambda,
    std::span<const std::pair<double, double>> pairs,
    double exp_tolerance = kDefaultExpTolerance, int threads = 1);

/// One sampled increment of the propagator between two ε-separated points
/// of Δ = {t ≥ s}.
struct ModulusEntry {
  double t = 0.0, s = 0.0;
  double tp = 0.0, sp = 0.0;
  double delta = 0.0;      // |t−t'| + |s−s'|
  double increment = 0.0;  // ‖U(t,s) − U(t',s')‖_{L(space)}
};

struct ModulusTable {
  Space space = Space::H;
  double epsilon = 0.0;
  std::vector<ModulusEntry> entries;
  double fittedExponent = 0.0;  // least-squares slope of log(increment) vs log(delta)
};

struct PairOfPairs {
  double t = 0.0, s = 0.0, tp = 0.0, sp = 0.0;
};

/// Operator-norm increments of (t,s) ↦ U_Λ(t,s) on a fixed fine Λ, for each
/// requested space, over a common pair grid (all points ε-separated from
/// the diagonal). The V' norm goes through the duality route of op_norm.
std::vector<ModulusTable> continuity_modulus(
    const NonautonomousForm& form, const Subdivision& lambda_fine, double epsilon,
    std::span<const PairOfPairs> pair_grid, std::span<const Space> spaces,
    double exp_tolerance = kDefaultExpTolerance, int threads = 1);

/// Deterministic grids for the checkers.
std::vector<std::array<double, 3>> random_triples(double T, int count,
                                                  std::uint64_t seed);
std::vector<std::pair<double, double>> random_pairs(double T, int count,
                                                    std::uint64_t seed,
                                                    double min_gap = 0.0);

/// Pair grid for continuity_modulus: around a fan of base points, partners
/// at geometrically spaced distances delta_max → delta_min (alternating the
/// perturbed coordinate), clamped into the ε-separated region.
std::vector<PairOfPairs> modulus_pair_grid(double T, double epsilon, int bases,
                                           int deltas_per_base, double delta_max,
                                           double delta_min);

}  // namespace evofam
