#include "evofam/matfun.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <limits>

namespace evofam {

namespace {

double one_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().colwise().sum().maxCoeff();
}

// Diagonal Padé coefficients b_0..b_m for e^x ≈ p_m(x)/p_m(-x).
constexpr std::array<double, 4> kPade3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kPade5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kPade7 = {17297280., 8648640., 1995840.,
                                          277200.,   25200.,   1512.,
                                          56.,       1.};
constexpr std::array<double, 10> kPade9 = {
    17643225600., 8821612800., 2075673600., 302702400., 30270240.,
    2162160.,     110880.,     3960.,       90.,        1.};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000., 32382376266240000., 7771770303897600.,
    1187353796428800.,  129060195264000.,   10559470521600.,
    670442572800.,      33522128640.,       1323241920.,
    40840800.,          960960.,            16380.,
    182.,               1.};

// 1-norm thresholds below which Padé degree m has backward error under the
// double-precision unit roundoff (Higham's values).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Matrix pade_solve(const Matrix& U, const Matrix& V) {
  // r = (V-U)^{-1} (V+U)
  return (V - U).partialPivLu().solve(V + U);
}

template <std::size_t N>
Matrix pade_low(const Matrix& A, const std::array<double, N>& b) {
  const Eigen::Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  Matrix even = b[0] * I;
  Matrix odd = b[1] * I;
  Matrix power = I;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * A2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  const Matrix U = A * odd;
  return pade_solve<N>(U, even);
}

Matrix pade13(const Matrix& A) {
  const Eigen::Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const auto& b = kPade13;
  const Matrix A2 = A * A;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A2 * A4;
  const Matrix U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
           b[3] * A2 + b[1] * I);
  const Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
                   b[4] * A4 + b[2] * A2 + b[0] * I;
  return pade_solve<14>(U, V);
}

}  // namespace

Matrix expm(const Matrix& A, double tolerance) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("expm: matrix must be square");
  }
  if (!(tolerance >= std::numeric_limits<double>::epsilon() * 0.5)) {
    throw std::invalid_argument("expm: tolerance below machine precision");
  }
  if (!A.allFinite()) {
    throw std::invalid_argument("expm: matrix has non-finite entries");
  }
  const Eigen::Index n = A.rows();
  const double d = one_norm(A);
  if (d == 0.0) return Matrix::Identity(n, n);

  if (d <= kTheta3) return pade_low(A, kPade3);
  if (d <= kTheta5) return pade_low(A, kPade5);
  if (d <= kTheta7) return pade_low(A, kPade7);
  if (d <= kTheta9) return pade_low(A, kPade9);

  int s = 0;
  if (d > kTheta13) {
    s = static_cast<int>(std::ceil(std::log2(d / kTheta13)));
  }
  Matrix X = pade13(A * std::pow(2.0, -s));
  for (int k = 0; k < s; ++k) X = X * X;
  return X;
}

Matrix sqrtm_principal(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("sqrtm: matrix must be square");
  }
  const Eigen::Index n = A.rows();
  Eigen::ComplexSchur<Matrix> schur(A);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("sqrtm: Schur factorization failed");
  }
  const Matrix& T = schur.matrixT();
  const Matrix& Q = schur.matrixU();

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(T(i, i).real() > 0.0)) {
      throw std::domain_error(
          "sqrtm: spectrum touches the closed left half-plane");
    }
  }

  Matrix S = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) S(i, i) = std::sqrt(T(i, i));
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      Complex acc = T(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= S(i, k) * S(k, j);
      S(i, j) = acc / (S(i, i) + S(j, j));
    }
  }
  return Q * S * Q.adjoint();
}

}  // namespace evofam
