#pragma once

#include "evofam/types.hpp"

namespace evofam {

/// Matrix exponential by scaling-and-squaring with diagonal Padé
/// approximants (degrees 3/5/7/9/13 picked from the 1-norm). The Padé
/// thresholds are the double-precision ones, so the backward error is at
/// unit-roundoff level; `tolerance` is the contract the caller requires and
/// must be no tighter than machine precision.
Matrix expm(const Matrix& A, double tolerance = 1e-12);

/// Principal matrix square root via complex Schur factorization and the
/// triangular recurrence. Requires the spectrum to avoid the closed left
/// half-plane; throws std::domain_error otherwise.
Matrix sqrtm_principal(const Matrix& A);

}  // namespace evofam
