#pragma once

#include "evofam/forms.hpp"
#include "evofam/subdivision.hpp"
#include "evofam/types.hpp"

#include <span>
#include <vector>

namespace evofam {

/// Defaults shared by the propagation entry points.
inline constexpr double kDefaultExpTolerance = 1e-12;
inline constexpr int kDefaultQuadratureOrder = 8;

/// U_Λ(t,s) on coefficient vectors, with the data that produced it.
struct PropagatorEval {
  Matrix matrix;
  double t = 0.0;
  double s = 0.0;
  Subdivision subdivision;
  double expTolerance = kDefaultExpTolerance;
};

/// Interval average of the form's operator over [a, b]: entrywise
/// Gauss-Legendre of A(·) divided by the cell length. Exact for evaluators
/// polynomial in t of degree ≤ 2·order − 1.
Matrix averaged_generator(const NonautonomousForm& form, double a, double b,
                          int quadrature_order = kDefaultQuadratureOrder);

/// One frozen-coefficient step: exp(−τ·M⁻¹·A_cell).
Matrix step(const Matrix& a_cell, double tau, const GelfandTriple& triple,
            double exp_tolerance = kDefaultExpTolerance);

/// The subdivision propagator: the ordered product of frozen-coefficient
/// semigroup steps over the cells straddled by [s, t], with partial steps
/// at both ends. U_Λ(t,t) is the identity exactly. Requires a coercive
/// declared form (shift quasi-coercive forms first) and Λ spanning [0,T].
PropagatorEval propagate(const NonautonomousForm& form, const Subdivision& lambda,
                         double t, double s,
                         double exp_tolerance = kDefaultExpTolerance,
                         int quadrature_order = kDefaultQuadratureOrder);

/// Precomputed per-cell averaged generators and full-cell factors over a
/// fixed Λ. eval() only exponentiates the two partial end cells, so grids
/// of (t,s) queries against one Λ are cheap. Immutable after construction;
/// eval() is const and thread-safe. Holds a reference to the form, which
/// must outlive the cache.
class PropagatorCache {
 public:
  PropagatorCache(const NonautonomousForm& form, Subdivision lambda,
                  double exp_tolerance = kDefaultExpTolerance,
                  int quadrature_order = kDefaultQuadratureOrder,
                  int threads = 1);

  const Subdivision& subdivision() const { return lambda_; }
  double exp_tolerance() const { return exp_tolerance_; }
  const Matrix& generator(std::size_t cell) const { return generators_[cell]; }

  Matrix eval(double t, double s) const;

 private:
  const NonautonomousForm* form_;
  Subdivision lambda_;
  double exp_tolerance_;
  std::vector<Matrix> generators_;    // averaged generator per cell
  std::vector<Matrix> full_factors_;  // step over the whole cell
};

/// Stand-in for the limit propagator: U_Λ on dyadically refined uniform
/// subdivisions, refined until two successive levels differ by less than
/// `tol` in the L(H) operator norm. Throws NumericalError when the cell
/// budget is exhausted (the last difference is reported in the message).
struct ReferenceResult {
  PropagatorEval eval;
  double achievedDiff = 0.0;
  long cells = 0;
};

ReferenceResult reference_propagator(const NonautonomousForm& form, double t,
                                     double s, double tol,
                                     double exp_tolerance = kDefaultExpTolerance,
                                     long max_cells = 1L << 20);

/// Error table of U_Λ(t,s) against the self-convergent reference for a list
/// of uniform cell counts, with the least-squares order in log-log
/// coordinates. Errors are measured in L(H) at the fixed (t,s); the
/// subdivision mesh is the abscissa.
struct ConvergenceRow {
  long cells = 0;
  double mesh = 0.0;
  double error = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double fittedOrder = 0.0;
  long referenceCells = 0;
  double referenceDiff = 0.0;
};

ConvergenceTable convergence_study(const NonautonomousForm& form, double t,
                                   double s, std::span<const long> levels,
                                   double reference_tol = 1e-8,
                                   double exp_tolerance = kDefaultExpTolerance);

}  // namespace evofam
