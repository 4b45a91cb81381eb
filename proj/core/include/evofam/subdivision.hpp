#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace evofam {

/// Ordered partition Λ = (0 = λ₀ < λ₁ < … < λ_{n+1} = T) of [0,T].
///
/// Reversal (the partition Λ_T with points T − λ_{n+1-k}) is stored as an
/// orientation flag over the same point array, so reversing twice restores
/// the original partition exactly, including in floating point, where
/// T − (T − λ) need not round back to λ. The mesh |Λ| is likewise computed
/// from the underlying array and is reflection-invariant.
class Subdivision {
 public:
  /// Points must increase strictly, start at 0, and keep gaps above a small
  /// multiple of machine epsilon relative to T.
  explicit Subdivision(std::vector<double> points);

  static Subdivision uniform(double T, std::size_t cells);

  /// Reproducible nonuniform partition: `cells` cells with interior points
  /// drawn uniformly (rejection keeps gaps ≥ min_gap_fraction·T).
  static Subdivision random(double T, std::size_t cells, std::uint64_t seed,
                            double min_gap_fraction = 1e-3);

  std::size_t cells() const { return points_.size() - 1; }
  std::size_t size() const { return points_.size(); }
  double horizon() const { return points_.back(); }

  /// k-th partition point in the current orientation.
  double point(std::size_t k) const;

  /// Materialized points (current orientation).
  std::vector<double> points() const;

  /// max_k (λ_{k+1} − λ_k), reflection-invariant.
  double mesh() const;

  /// Λ_T: the reflected partition.
  Subdivision reversed() const;

  /// Index k with point(k) ≤ x < point(k+1); x = T maps to the last cell.
  std::size_t cell_index(double x) const;

  bool operator==(const Subdivision& other) const;

 private:
  std::vector<double> points_;  // forward orientation, always
  bool reversed_ = false;
};

}  // namespace evofam
