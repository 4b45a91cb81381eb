#include "evofam/propagator.hpp"

#include "evofam/matfun.hpp"
#include "evofam/parallel.hpp"
#include "evofam/quadrature.hpp"
#include "evofam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace evofam {

namespace {

void check_window(const NonautonomousForm& form, const Subdivision& lambda,
                  double t, double s) {
  if (!(s >= 0.0 && t <= form.horizon() && s <= t)) {
    throw std::invalid_argument("propagate: need 0 <= s <= t <= T");
  }
  if (std::abs(lambda.horizon() - form.horizon()) >
      1e-12 * std::max(1.0, form.horizon())) {
    throw std::invalid_argument("propagate: subdivision does not span [0, T]");
  }
  if (!(form.declared_coercivity() > 0.0)) {
    throw std::invalid_argument(
        "propagate: form is not declared coercive; apply shifted() first");
  }
}

/// Product over straddled cells per the construction: a partial factor on
/// the first cell, full factors in between, a partial factor on the last,
/// applied left-to-right as U = F_last · … · F_first. `factor(k, tau)`
/// returns the step over cell k of duration tau.
template <typename FactorFn>
Matrix assemble_product(const Subdivision& lambda, double t, double s,
                        Eigen::Index n, FactorFn&& factor) {
  if (t == s) return Matrix::Identity(n, n);
  const std::size_t ks = lambda.cell_index(s);
  const std::size_t kt = lambda.cell_index(t);
  if (ks == kt) {
    return factor(ks, t - s);
  }
  Matrix U = factor(ks, lambda.point(ks + 1) - s);
  for (std::size_t k = ks + 1; k < kt; ++k) {
    U = factor(k, lambda.point(k + 1) - lambda.point(k)) * U;
  }
  const double tail = t - lambda.point(kt);
  if (tail > 0.0) U = factor(kt, tail) * U;
  return U;
}

}  // namespace

Matrix averaged_generator(const NonautonomousForm& form, double a, double b,
                          int quadrature_order) {
  if (!(a < b)) throw std::invalid_argument("averaged_generator: empty cell");
  const auto& rule = gauss_legendre(quadrature_order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Matrix acc = Matrix::Zero(form.triple().dim(), form.triple().dim());
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * form.evaluate(mid + half * rule.nodes[i]);
    weight_sum += rule.weights[i];
  }
  // Dividing by the computed weight sum (=2 up to roundoff) keeps the
  // autonomous case exact.
  return acc / weight_sum;
}

Matrix step(const Matrix& a_cell, double tau, const GelfandTriple& triple,
            double exp_tolerance) {
  if (!(tau >= 0.0)) throw std::invalid_argument("step: tau must be >= 0");
  if (!a_cell.allFinite()) {
    throw std::invalid_argument("step: generator has non-finite entries");
  }
  const Eigen::Index n = triple.dim();
  if (tau == 0.0) return Matrix::Identity(n, n);
  const Matrix G = triple.solve_mass(a_cell);
  return expm((-tau) * G, exp_tolerance);
}

PropagatorEval propagate(const NonautonomousForm& form, const Subdivision& lambda,
                         double t, double s, double exp_tolerance,
                         int quadrature_order) {
  check_window(form, lambda, t, s);
  const Eigen::Index n = form.triple().dim();
  Matrix U = assemble_product(
      lambda, t, s, n, [&](std::size_t k, double tau) {
        const Matrix Ak = averaged_generator(form, lambda.point(k),
                                             lambda.point(k + 1), quadrature_order);
        return step(Ak, tau, form.triple(), exp_tolerance);
      });
  return PropagatorEval{std::move(U), t, s, lambda, exp_tolerance};
}

PropagatorCache::PropagatorCache(const NonautonomousForm& form, Subdivision lambda,
                                 double exp_tolerance, int quadrature_order,
                                 int threads)
    : form_(&form),
      lambda_(std::move(lambda)),
      exp_tolerance_(exp_tolerance) {
  check_window(form, lambda_, form.horizon(), 0.0);
  const std::size_t cells = lambda_.cells();
  generators_.resize(cells);
  full_factors_.resize(cells);
  parallel_for(cells, threads, [&](std::size_t k) {
    generators_[k] = averaged_generator(*form_, lambda_.point(k),
                                        lambda_.point(k + 1), quadrature_order);
    full_factors_[k] = step(generators_[k], lambda_.point(k + 1) - lambda_.point(k),
                            form_->triple(), exp_tolerance_);
  });
}

Matrix PropagatorCache::eval(double t, double s) const {
  check_window(*form_, lambda_, t, s);
  const Eigen::Index n = form_->triple().dim();
  return assemble_product(lambda_, t, s, n, [&](std::size_t k, double tau) {
    const double width = lambda_.point(k + 1) - lambda_.point(k);
    if (tau == width) return full_factors_[k];
    return step(generators_[k], tau, form_->triple(), exp_tolerance_);
  });
}

ReferenceResult reference_propagator(const NonautonomousForm& form, double t,
                                     double s, double tol, double exp_tolerance,
                                     long max_cells) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("reference_propagator: tol must be > 0");
  }
  const double T = form.horizon();
  long cells = 1;
  PropagatorEval prev = propagate(form, Subdivision::uniform(T, 1), t, s,
                                  exp_tolerance);
  double diff = std::numeric_limits<double>::infinity();
  while (cells < max_cells) {
    cells *= 2;
    PropagatorEval next = propagate(
        form, Subdivision::uniform(T, static_cast<std::size_t>(cells)), t, s,
        exp_tolerance);
    diff = form.triple().op_norm(next.matrix - prev.matrix, Space::H);
    prev = std::move(next);
    if (diff < tol) {
      return ReferenceResult{std::move(prev), diff, cells};
    }
  }
  std::ostringstream msg;
  msg << "reference_propagator: no convergence to " << tol << " within "
      << max_cells << " cells (last difference " << diff << ")";
  throw NumericalError(msg.str());
}

ConvergenceTable convergence_study(const NonautonomousForm& form, double t,
                                   double s, std::span<const long> levels,
                                   double reference_tol, double exp_tolerance) {
  if (levels.empty()) {
    throw std::invalid_argument("convergence_study: empty level list");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || (i > 0 && levels[i] <= levels[i - 1])) {
      throw std::invalid_argument(
          "convergence_study: cell counts must be positive and increasing");
    }
  }
  if (!(s < t)) throw std::invalid_argument("convergence_study: need s < t");

  const ReferenceResult ref =
      reference_propagator(form, t, s, reference_tol, exp_tolerance);
  ConvergenceTable table;
  table.referenceCells = ref.cells;
  table.referenceDiff = ref.achievedDiff;
  const double T = form.horizon();
  std::vector<double> meshes, errors;
  for (long cells : levels) {
    const Subdivision lambda = Subdivision::uniform(T, static_cast<std::size_t>(cells));
    const PropagatorEval eval = propagate(form, lambda, t, s, exp_tolerance);
    ConvergenceRow row;
    row.cells = cells;
    row.mesh = lambda.mesh();
    row.error = form.triple().op_norm(eval.matrix - ref.eval.matrix, Space::H);
    meshes.push_back(row.mesh);
    errors.push_back(row.error);
    table.rows.push_back(row);
  }
  table.fittedOrder = loglog_slope(meshes, errors);
  return table;
}

}  // namespace evofam
