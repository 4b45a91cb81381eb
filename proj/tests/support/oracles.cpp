#include "support/oracles.hpp"

#include <cmath>
#include <limits>

namespace evofam::test {

namespace {

using LongComplex = std::complex<long double>;
using LongMatrix =
    Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;

long double one_norm(const LongMatrix& A) {
  long double best = 0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    long double acc = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) acc += std::abs(A(i, j));
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace

Matrix taylor_expm(const Matrix& A) {
  const Eigen::Index n = A.rows();
  LongMatrix X = A.cast<LongComplex>();
  int halvings = 0;
  while (one_norm(X) > 0.25L) {
    X *= 0.5L;
    ++halvings;
  }
  LongMatrix term = LongMatrix::Identity(n, n);
  LongMatrix sum = term;
  for (int k = 1; k <= 60; ++k) {
    term = (term * X) / static_cast<long double>(k);
    sum += term;
    if (one_norm(term) < 1e-26L * std::max<long double>(one_norm(sum), 1.0L)) break;
  }
  for (int k = 0; k < halvings; ++k) sum = sum * sum;
  return sum.cast<Complex>();
}

Matrix implicit_midpoint_propagator(const NonautonomousForm& form, double t,
                                    double s, double tol) {
  const Eigen::Index n = form.triple().dim();
  const Matrix I = Matrix::Identity(n, n);
  if (t == s) return I;

  auto generator = [&form](double r) {
    return Matrix(form.triple().solve_mass(form.evaluate(r)));
  };
  auto sweep = [&](long steps) {
    const double h = (t - s) / steps;
    Matrix U = I;
    for (long k = 0; k < steps; ++k) {
      const Matrix G = generator(s + (k + 0.5) * h);
      const Matrix lhs = I + (0.5 * h) * G;
      const Matrix rhs = (I - (0.5 * h) * G) * U;
      U = lhs.partialPivLu().solve(rhs);
    }
    return U;
  };

  // Adaptivity by global halving with a Richardson stopping test. Local
  // step-doubling controllers stall on stiff transients (the pairwise
  // estimate saturates while the budget shrinks with h); uniform A-stable
  // sweeps at doubled resolution do not.
  long steps = 64;
  Matrix coarse = sweep(steps);
  for (int level = 0; level < 16; ++level) {
    steps *= 2;
    Matrix fine = sweep(steps);
    const double est = (fine - coarse).norm();
    if (est <= 0.5 * tol) return fine;
    coarse = std::move(fine);
  }
  throw NumericalError("implicit midpoint oracle: step budget exhausted");
}

Vector random_vector(detail::SplitMix64& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = Complex(rng.next_normal(), rng.next_normal());
  }
  return v;
}

Matrix random_matrix(detail::SplitMix64& rng, Eigen::Index n) {
  Matrix X(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      X(i, j) = Complex(rng.next_normal(), rng.next_normal());
    }
  }
  return X;
}

McExtremes mc_extremes(Eigen::Index n, int samples, std::uint64_t seed,
                       const std::function<double(const Vector&)>& ratio) {
  detail::SplitMix64 rng(seed);
  McExtremes ext;
  ext.low = std::numeric_limits<double>::infinity();
  ext.high = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector u = random_vector(rng, n);
    if (u.norm() == 0) continue;
    const double r = ratio(u);
    ext.low = std::min(ext.low, r);
    ext.high = std::max(ext.high, r);
  }
  return ext;
}

namespace {

double rayleigh(const Matrix& P, const Matrix& Q, const Vector& u) {
  const double num = ((u.adjoint() * (P * u))(0)).real();
  const double den = ((u.adjoint() * (Q * u))(0)).real();
  return num / den;
}

// Extreme of the ratio over span{u, d}: the 2x2 generalized Hermitian
// pencil (p, q) solved by the quadratic formula.
Vector plane_extremum(const Matrix& P, const Matrix& Q, const Vector& u,
                      const Vector& d, bool maximize) {
  Eigen::Matrix<Complex, Eigen::Dynamic, 2> W(u.size(), 2);
  W.col(0) = u;
  W.col(1) = d;
  const Eigen::Matrix2cd p = W.adjoint() * P * W;
  const Eigen::Matrix2cd q = W.adjoint() * Q * W;
  // det(p - λq) = 0: aλ² + bλ + c = 0 with real a, c and real b for
  // Hermitian p, q (q positive definite on the plane).
  const double a = (q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0)).real();
  const double b = -(p(0, 0) * q(1, 1) + q(0, 0) * p(1, 1) -
                     p(0, 1) * q(1, 0) - q(0, 1) * p(1, 0))
                        .real();
  const double c = (p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0)).real();
  const double disc = b * b - 4 * a * c;
  if (!(a != 0.0) || disc < 0.0) return u;
  const double root = std::sqrt(disc);
  const double lambda = maximize ? (-b + root) / (2 * a) : (-b - root) / (2 * a);
  // eigenvector of (p - λq) in the plane
  const Eigen::Matrix2cd R = p - lambda * q;
  Eigen::Vector2cd coeff;
  if (std::abs(R(0, 0)) + std::abs(R(0, 1)) >
      std::abs(R(1, 0)) + std::abs(R(1, 1))) {
    coeff << -R(0, 1), R(0, 0);
  } else {
    coeff << -R(1, 1), R(1, 0);
  }
  if (coeff.norm() == 0) return u;
  Vector out = W * coeff;
  const double n2 = out.norm();
  if (n2 == 0 || !out.allFinite()) return u;
  return out / n2;
}

}  // namespace

McExtremes mc_quadratic_ratio_extremes(const Matrix& P, const Matrix& Q,
                                       int samples, int refine_rounds,
                                       std::uint64_t seed) {
  const Eigen::Index n = P.rows();
  detail::SplitMix64 rng(seed);
  McExtremes ext;
  ext.low = std::numeric_limits<double>::infinity();
  ext.high = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vector lo_u = random_vector(rng, n);
    Vector hi_u = lo_u;
    for (int r = 0; r < refine_rounds; ++r) {
      const Vector d = random_vector(rng, n);
      lo_u = plane_extremum(P, Q, lo_u, d, /*maximize=*/false);
      hi_u = plane_extremum(P, Q, hi_u, d, /*maximize=*/true);
    }
    ext.low = std::min(ext.low, rayleigh(P, Q, lo_u));
    ext.high = std::max(ext.high, rayleigh(P, Q, hi_u));
  }
  return ext;
}

}  // namespace evofam::test
