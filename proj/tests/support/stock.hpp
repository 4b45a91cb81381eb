#pragma once

#include "evofam/problems.hpp"

namespace evofam::test {

/// The 5x5 nonsymmetric, nonautonomous form most tests reach for.
inline RandomBuild stock_test_form() {
  return random_problem(5, 0x5EED5EEDULL, Smoothness::Lipschitz);
}

/// Small diagonal autonomous problem with known decay rates: massGram = I,
/// vGram = diag(lambdas), A(t) = diag(lambdas). The H-semigroup is
/// exp(-t*lambda_i) per mode.
inline RandomBuild diag_problem(const RealVector& lambdas, double horizon = 1.0) {
  const Eigen::Index n = lambdas.size();
  Matrix mass = Matrix::Identity(n, n);
  Matrix v = lambdas.cast<Complex>().asDiagonal();
  auto triple = GelfandTriple::make(mass, v);
  Matrix A = v;
  NonautonomousForm form(
      triple, horizon, [A](double) { return A; }, 1.0 + 1e-12, 1.0 - 1e-12,
      Modulus::zero(), 0.5);
  return RandomBuild{triple, std::move(form)};
}

}  // namespace evofam::test
