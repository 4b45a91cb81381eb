#pragma once

#include <span>

namespace evofam {

/// Least-squares slope of log(y) against log(x). Pairs with a nonpositive
/// coordinate are skipped (they carry no information in log-log space).
/// Returns NaN when fewer than two usable pairs remain.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace evofam
