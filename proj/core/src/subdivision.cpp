#include "evofam/subdivision.hpp"

#include "evofam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evofam {

Subdivision::Subdivision(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("subdivision needs at least two points");
  }
  if (points_.front() != 0.0) {
    throw std::invalid_argument("subdivision must start at exactly 0");
  }
  const double T = points_.back();
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw std::invalid_argument("subdivision horizon must be positive and finite");
  }
  const double min_gap = 4.0 * std::numeric_limits<double>::epsilon() * T;
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    if (!(points_[k + 1] - points_[k] > min_gap)) {
      throw std::invalid_argument("subdivision points must increase strictly");
    }
  }
}

Subdivision Subdivision::uniform(double T, std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("subdivision needs >= 1 cell");
  std::vector<double> pts(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    pts[k] = T * (static_cast<double>(k) / static_cast<double>(cells));
  }
  pts.front() = 0.0;
  pts.back() = T;
  return Subdivision(std::move(pts));
}

Subdivision Subdivision::random(double T, std::size_t cells, std::uint64_t seed,
                                double min_gap_fraction) {
  if (cells == 0) throw std::invalid_argument("subdivision needs >= 1 cell");
  detail::SplitMix64 rng(seed);
  const double min_gap = min_gap_fraction * T;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> pts;
    pts.reserve(cells + 1);
    pts.push_back(0.0);
    for (std::size_t k = 0; k + 1 < cells; ++k) pts.push_back(T * rng.next_uniform());
    pts.push_back(T);
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      if (pts[k + 1] - pts[k] < min_gap) ok = false;
    }
    if (ok) return Subdivision(std::move(pts));
  }
  throw std::invalid_argument("random subdivision: could not satisfy minimum gap");
}

double Subdivision::point(std::size_t k) const {
  const std::size_t n = points_.size();
  if (k >= n) throw std::out_of_range("subdivision point index");
  if (!reversed_) return points_[k];
  // Endpoints stay exact under reflection.
  if (k == 0) return 0.0;
  if (k == n - 1) return points_.back();
  return points_.back() - points_[n - 1 - k];
}

std::vector<double> Subdivision::points() const {
  std::vector<double> out(points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k) out[k] = point(k);
  return out;
}

double Subdivision::mesh() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    m = std::max(m, points_[k + 1] - points_[k]);
  }
  return m;
}

Subdivision Subdivision::reversed() const {
  Subdivision out = *this;
  out.reversed_ = !out.reversed_;
  return out;
}

std::size_t Subdivision::cell_index(double x) const {
  const double T = points_.back();
  if (!(x >= 0.0 && x <= T)) {
    throw std::invalid_argument("cell_index: point outside [0, T]");
  }
  if (x >= point(points_.size() - 2)) return cells() - 1;
  std::size_t lo = 0, hi = points_.size() - 1;
  // invariant: point(lo) <= x < point(hi)
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (point(mid) <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

bool Subdivision::operator==(const Subdivision& other) const {
  if (points_.size() != other.points_.size()) return false;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (point(k) != other.point(k)) return false;
  }
  return true;
}

}  // namespace evofam
