#include "evofam/properties.hpp"

#include "evofam/parallel.hpp"
#include "evofam/rng.hpp"
#include "evofam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace evofam {

namespace {

/// Evaluates the cache at every distinct (t,s) key, in parallel, and hands
/// back an index. Reductions over the results then run in caller order.
class EvalTable {
 public:
  EvalTable(const PropagatorCache& cache, std::vector<std::pair<double, double>> keys,
            int threads) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    keys_ = std::move(keys);
    values_.resize(keys_.size());
    parallel_for(keys_.size(), threads, [&](std::size_t i) {
      values_[i] = cache.eval(keys_[i].first, keys_[i].second);
    });
  }

  const Matrix& at(double t, double s) const {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(),
                                     std::make_pair(t, s));
    if (it == keys_.end() || it->first != t || it->second != s) {
      throw std::logic_error("EvalTable: missing key");
    }
    return values_[static_cast<std::size_t>(it - keys_.begin())];
  }

 private:
  std::vector<std::pair<double, double>> keys_;
  std::vector<Matrix> values_;
};

}  // namespace

AxiomReport check_axioms(const NonautonomousForm& form, const Subdivision& lambda,
                         std::span<const std::array<double, 3>> triples,
                         double exp_tolerance, int threads) {
  for (const auto& rst : triples) {
    const double r = rst[0], s = rst[1], t = rst[2];
    if (!(0.0 <= s && s <= r && r <= t && t <= form.horizon())) {
      throw std::invalid_argument("check_axioms: triple must satisfy s <= r <= t");
    }
  }
  const PropagatorCache cache(form, lambda, exp_tolerance,
                              kDefaultQuadratureOrder, threads);
  std::vector<std::pair<double, double>> keys;
  for (const auto& rst : triples) {
    const double r = rst[0], s = rst[1], t = rst[2];
    keys.emplace_back(t, t);
    keys.emplace_back(t, s);
    keys.emplace_back(t, r);
    keys.emplace_back(r, s);
  }
  const EvalTable table(cache, std::move(keys), threads);

  AxiomReport report;
  const Matrix I = Matrix::Identity(form.triple().dim(), form.triple().dim());
  for (const auto& rst : triples) {
    const double r = rst[0], s = rst[1], t = rst[2];
    report.maxIdentityDefect =
        std::max(report.maxIdentityDefect,
                 form.triple().op_norm(table.at(t, t) - I, Space::H));
    const Matrix defect = table.at(t, s) - table.at(t, r) * table.at(r, s);
    report.maxCocycleDefect = std::max(report.maxCocycleDefect,
                                       form.triple().op_norm(defect, Space::H));
  }
  return report;
}

DualityReport check_duality(const NonautonomousForm& form, const Subdivision& lambda,
                            std::span<const std::pair<double, double>> pairs,
                            DualityVariant variant, double exp_tolerance,
                            int threads) {
  const double T = form.horizon();
  for (const auto& [t, s] : pairs) {
    if (!(0.0 <= s && s <= t && t <= T)) {
      throw std::invalid_argument("check_duality: pairs must satisfy 0 <= s <= t <= T");
    }
  }
  const NonautonomousForm returned = form.returned_adjoint();
  const Subdivision right_lambda =
      variant == DualityVariant::Correct ? lambda.reversed() : lambda;
  const PropagatorCache left_cache(returned, lambda, exp_tolerance,
                                   kDefaultQuadratureOrder, threads);
  const PropagatorCache right_cache(form, right_lambda, exp_tolerance,
                                    kDefaultQuadratureOrder, threads);

  std::vector<double> defects(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto [t, s] = pairs[i];
    const Matrix left = form.triple().h_adjoint(left_cache.eval(t, s));
    const Matrix right = right_cache.eval(T - s, T - t);
    defects[i] = form.triple().op_norm(left - right, Space::H);
  });

  DualityReport report;
  report.variant = variant;
  for (double d : defects) report.maxDefect = std::max(report.maxDefect, d);
  return report;
}

VprimeExtensionReport vprime_extension_bound(
    const NonautonomousForm& form, const Subdivision& lambda,
    std::span<const std::pair<double, double>> pairs, double exp_tolerance,
    int threads) {
  const double T = form.horizon();
  for (const auto& [t, s] : pairs) {
    if (!(0.0 <= s && s <= t && t <= T)) {
      throw std::invalid_argument(
          "vprime_extension_bound: pairs must satisfy 0 <= s <= t <= T");
    }
  }
  const NonautonomousForm returned = form.returned_adjoint();
  const PropagatorCache direct_cache(form, lambda, exp_tolerance,
                                     kDefaultQuadratureOrder, threads);
  const PropagatorCache adjoint_cache(returned, lambda.reversed(), exp_tolerance,
                                      kDefaultQuadratureOrder, threads);

  std::vector<double> direct(pairs.size()), dual(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto [t, s] = pairs[i];
    direct[i] = form.triple().op_norm(direct_cache.eval(t, s), Space::Vprime);
    dual[i] = form.triple().op_norm(adjoint_cache.eval(T - s, T - t), Space::V);
  });

  VprimeExtensionReport report;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    report.supDirect = std::max(report.supDirect, direct[i]);
    report.supAdjointRoute = std::max(report.supAdjointRoute, dual[i]);
    report.agreementDefect =
        std::max(report.agreementDefect, std::abs(direct[i] - dual[i]));
  }
  return report;
}

std::vector<ModulusTable> continuity_modulus(
    const NonautonomousForm& form, const Subdivision& lambda_fine, double epsilon,
    std::span<const PairOfPairs> pair_grid, std::span<const Space> spaces,
    double exp_tolerance, int threads) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("continuity_modulus: epsilon must be > 0");
  }
  const double T = form.horizon();
  for (const auto& p : pair_grid) {
    const bool ok = 0.0 <= p.s && p.s <= p.t && p.t <= T && 0.0 <= p.sp &&
                    p.sp <= p.tp && p.tp <= T && p.t - p.s >= epsilon &&
                    p.tp - p.sp >= epsilon;
    if (!ok) {
      throw std::invalid_argument(
          "continuity_modulus: pair violates the epsilon-separated region");
    }
  }

  const PropagatorCache cache(form, lambda_fine, exp_tolerance,
                              kDefaultQuadratureOrder, threads);
  std::vector<std::pair<double, double>> keys;
  for (const auto& p : pair_grid) {
    keys.emplace_back(p.t, p.s);
    keys.emplace_back(p.tp, p.sp);
  }
  const EvalTable table(cache, std::move(keys), threads);

  // Increments per pair, all requested spaces on the same difference.
  std::vector<std::vector<double>> increments(spaces.size());
  for (auto& v : increments) v.resize(pair_grid.size());
  parallel_for(pair_grid.size(), threads, [&](std::size_t i) {
    const auto& p = pair_grid[i];
    const Matrix diff = table.at(p.t, p.s) - table.at(p.tp, p.sp);
    for (std::size_t j = 0; j < spaces.size(); ++j) {
      increments[j][i] = form.triple().op_norm(diff, spaces[j]);
    }
  });

  std::vector<ModulusTable> tables;
  for (std::size_t j = 0; j < spaces.size(); ++j) {
    ModulusTable mt;
    mt.space = spaces[j];
    mt.epsilon = epsilon;
    std::vector<double> deltas, norms;
    for (std::size_t i = 0; i < pair_grid.size(); ++i) {
      const auto& p = pair_grid[i];
      ModulusEntry e;
      e.t = p.t;
      e.s = p.s;
      e.tp = p.tp;
      e.sp = p.sp;
      e.delta = std::abs(p.t - p.tp) + std::abs(p.s - p.sp);
      e.increment = increments[j][i];
      mt.entries.push_back(e);
      deltas.push_back(e.delta);
      norms.push_back(e.increment);
    }
    mt.fittedExponent = loglog_slope(deltas, norms);
    tables.push_back(std::move(mt));
  }
  return tables;
}

std::vector<std::array<double, 3>> random_triples(double T, int count,
                                                  std::uint64_t seed) {
  detail::SplitMix64 rng(seed);
  std::vector<std::array<double, 3>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double a = T * rng.next_uniform();
    double b = T * rng.next_uniform();
    double c = T * rng.next_uniform();
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    out.push_back({b, a, c});  // (r, s, t) with s <= r <= t
  }
  return out;
}

std::vector<std::pair<double, double>> random_pairs(double T, int count,
                                                    std::uint64_t seed,
                                                    double min_gap) {
  detail::SplitMix64 rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    double a = T * rng.next_uniform();
    double b = T * rng.next_uniform();
    if (a > b) std::swap(a, b);
    if (b - a < min_gap) continue;
    out.emplace_back(b, a);  // (t, s)
  }
  return out;
}

std::vector<PairOfPairs> modulus_pair_grid(double T, double epsilon, int bases,
                                           int deltas_per_base, double delta_max,
                                           double delta_min) {
  if (!(epsilon > 0.0 && delta_min > 0.0 && delta_min < delta_max)) {
    throw std::invalid_argument("modulus_pair_grid: bad delta or epsilon range");
  }
  if (!(epsilon + delta_max <= T)) {
    throw std::invalid_argument("modulus_pair_grid: delta_max too large for T");
  }
  std::vector<PairOfPairs> grid;
  const double ratio =
      deltas_per_base > 1
          ? std::pow(delta_min / delta_max, 1.0 / (deltas_per_base - 1))
          : 1.0;
  for (int b = 0; b < bases; ++b) {
    // Base points sweep the admissible wedge t − s ≥ ε away from its corners.
    const double u = (b + 0.5) / bases;
    const double t = epsilon + (T - epsilon - delta_max) * u;
    const double s = 0.5 * (t - epsilon) * u;
    double delta = delta_max;
    for (int d = 0; d < deltas_per_base; ++d, delta *= ratio) {
      PairOfPairs p;
      p.t = t;
      p.s = s;
      // Alternate which coordinate moves; keep t' within [0,T] and the
      // partner ε-separated (moving t upward and s downward preserves both).
      switch (d % 3) {
        case 0:
          p.tp = t + delta;
          p.sp = s;
          break;
        case 1:
          p.tp = t;
          p.sp = std::max(0.0, s - delta);
          break;
        default:
          p.tp = t + 0.5 * delta;
          p.sp = std::max(0.0, s - 0.5 * delta);
          break;
      }
      if (p.tp > T) p.tp = T;
      if (std::abs(p.t - p.tp) + std::abs(p.s - p.sp) <= 0.0) continue;
      grid.push_back(p);
    }
  }
  return grid;
}

}  // namespace evofam
