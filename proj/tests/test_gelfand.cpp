#include "evofam/gelfand.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace evofam;

namespace {

std::shared_ptr<const GelfandTriple> diag_triple(
    std::initializer_list<double> mass, std::initializer_list<double> v) {
  const Eigen::Index n = static_cast<Eigen::Index>(mass.size());
  Matrix M = Matrix::Zero(n, n), K = Matrix::Zero(n, n);
  Eigen::Index i = 0;
  for (double m : mass) M(i, i) = m, ++i;
  i = 0;
  for (double k : v) K(i, i) = k, ++i;
  return GelfandTriple::make(M, K);
}

std::shared_ptr<const GelfandTriple> random_triple(Eigen::Index n,
                                                   std::uint64_t seed) {
  detail::SplitMix64 rng(seed);
  Matrix Y = test::random_matrix(rng, n);
  Y /= spectral_norm(Y);
  Matrix mass = Matrix::Identity(n, n) + Y * Y.adjoint();
  Matrix Z = test::random_matrix(rng, n);
  Z /= spectral_norm(Z);
  Matrix v = mass + 0.5 * Matrix::Identity(n, n) + Z * Z.adjoint();
  return GelfandTriple::make(mass, v);
}

Vector from_list(std::initializer_list<Complex> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (Complex c : vals) v[i++] = c;
  return v;
}

}  // namespace

TEST_CASE("norms in H, V_gamma, V'") {
  auto euclid = diag_triple({1, 1}, {1, 4});

  SUBCASE("Euclidean H norm") {
    CHECK(euclid->norm(from_list({3, 4}), Space::H) == doctest::Approx(5).epsilon(1e-14));
  }
  SUBCASE("single-mode interpolation norm") {
    CHECK(euclid->norm_vgamma(from_list({0, 1}), 0.5) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }
  SUBCASE("V' norm of a functional") {
    CHECK(euclid->norm(from_list({1, 1}), Space::Vprime) ==
          doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));
  }
  SUBCASE("interpolation endpoints match H and V on random vectors") {
    auto triple = random_triple(6, 11);
    detail::SplitMix64 rng(12);
    for (int k = 0; k < 50; ++k) {
      const Vector u = test::random_vector(rng, 6);
      CHECK(std::abs(triple->norm_vgamma(u, 0.0) - triple->norm(u, Space::H)) <=
            1e-12 * triple->norm(u, Space::H));
      CHECK(std::abs(triple->norm_vgamma(u, 1.0) - triple->norm(u, Space::V)) <=
            1e-12 * triple->norm(u, Space::V));
    }
  }
  SUBCASE("gamma outside [0,1] rejected") {
    CHECK_THROWS_AS(euclid->norm_vgamma(from_list({1, 0}), 1.5),
                    std::invalid_argument);
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(euclid->norm(from_list({1, 0, 0}), Space::H),
                    std::invalid_argument);
  }
}

TEST_CASE("operator norms") {
  SUBCASE("identity has norm one in every space") {
    auto triple = random_triple(5, 21);
    const Matrix I = Matrix::Identity(5, 5);
    for (Space s : {Space::H, Space::V, Space::Vprime}) {
      CHECK(triple->op_norm(I, s) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("diagonal singular values in H") {
    auto triple = diag_triple({1, 1}, {1, 2});
    Matrix B = Matrix::Zero(2, 2);
    B(0, 0) = 2;
    B(1, 1) = -3;
    CHECK(triple->op_norm(B, Space::H) == doctest::Approx(3.0).epsilon(1e-13));
  }
  SUBCASE("L(V') norm matches the Monte-Carlo supremum over functionals") {
    auto triple = random_triple(6, 33);
    detail::SplitMix64 rng(34);
    const Matrix B = test::random_matrix(rng, 6);
    const double claimed = triple->op_norm(B, Space::Vprime);
    // The V'-extension acts on functional coefficients as f -> M·B·M⁻¹f;
    // the squared ratio ‖ext·f‖²_{V'}/‖f‖²_{V'} is the Hermitian pencil
    // (ext^H·K⁻¹·ext, K⁻¹).
    const Matrix I = Matrix::Identity(6, 6);
    const Matrix ext = triple->mass_gram() * B * triple->solve_mass(I);
    const Matrix Kinv = Eigen::LLT<Matrix>(triple->v_gram()).solve(I);
    const auto mc = test::mc_quadratic_ratio_extremes(
        Matrix(ext.adjoint() * Kinv * ext), Kinv, 10000, 8, 35);
    const double mc_sup = std::sqrt(mc.high);
    CHECK(mc_sup <= claimed * (1 + 1e-9));
    CHECK(mc_sup >= claimed * 0.98);
  }
}

TEST_CASE("H-adjoint") {
  SUBCASE("Euclidean case is the conjugate transpose") {
    auto triple = diag_triple({1, 1, 1}, {1, 2, 3});
    detail::SplitMix64 rng(41);
    const Matrix B = test::random_matrix(rng, 3);
    CHECK((triple->h_adjoint(B) - B.adjoint()).norm() <= 1e-13 * B.norm());
  }
  SUBCASE("weighted 2x2 example") {
    auto triple = diag_triple({1, 2}, {1, 1});
    Matrix B = Matrix::Zero(2, 2);
    B(0, 1) = 1;
    const Matrix adj = triple->h_adjoint(B);
    CHECK(std::abs(adj(1, 0) - Complex(0.5)) <= 1e-14);
    CHECK(std::abs(adj(0, 0)) <= 1e-14);
    CHECK(std::abs(adj(0, 1)) <= 1e-14);
    CHECK(std::abs(adj(1, 1)) <= 1e-14);
  }
  SUBCASE("involution and adjoint identity on random data") {
    auto triple = random_triple(6, 51);
    detail::SplitMix64 rng(52);
    const Matrix B = test::random_matrix(rng, 6);
    CHECK((triple->h_adjoint(triple->h_adjoint(B)) - B).norm() <= 1e-13 * B.norm());
    // (Bu|v)_H = (u|h_adjoint(B)v)_H
    const Matrix adj = triple->h_adjoint(B);
    for (int k = 0; k < 10; ++k) {
      const Vector u = test::random_vector(rng, 6);
      const Vector v = test::random_vector(rng, 6);
      const Complex lhs = (v.adjoint() * triple->mass_gram() * (B * u))(0);
      const Complex rhs = ((adj * v).adjoint() * triple->mass_gram() * u)(0);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(lhs));
    }
  }
}

TEST_CASE("triple invariants") {
  auto triple = random_triple(7, 61);
  detail::SplitMix64 rng(62);

  SUBCASE("generalized Cauchy-Schwarz") {
    for (int k = 0; k < 30; ++k) {
      const Vector u = test::random_vector(rng, 7);
      const Vector v = test::random_vector(rng, 7);
      const double inner =
          std::abs((v.adjoint() * triple->mass_gram() * u)(0));
      CHECK(inner <= triple->norm(u, Space::H) * triple->norm(v, Space::H) *
                         (1 + 1e-12));
    }
  }
  SUBCASE("embedding constant") {
    for (int k = 0; k < 30; ++k) {
      const Vector u = test::random_vector(rng, 7);
      CHECK(triple->norm(u, Space::H) <=
            triple->embedding_constant() * triple->norm(u, Space::V) * (1 + 1e-12));
    }
  }
  SUBCASE("interpolation monotonicity when all lambda >= 1") {
    REQUIRE(triple->eigenvalues().minCoeff() >= 1.0);
    const Vector u = test::random_vector(rng, 7);
    double prev = 0.0;
    for (double g = 0.0; g <= 1.0; g += 0.1) {
      const double cur = triple->norm_vgamma(u, g);
      CHECK(cur >= prev * (1 - 1e-12));
      prev = cur;
    }
  }
  SUBCASE("duality sharpness") {
    for (int k = 0; k < 20; ++k) {
      const Vector u = test::random_vector(rng, 7);
      const double lhs = triple->norm(triple->embed_h_in_vprime(u), Space::Vprime) *
                         triple->norm(u, Space::V);
      const double rhs = triple->norm(u, Space::H);
      CHECK(lhs >= rhs * rhs * (1 - 1e-12));
    }
    // equality on a generalized eigenvector
    const Vector phi0 = triple->eigenvectors().col(3);
    const double lhs = triple->norm(triple->embed_h_in_vprime(phi0), Space::Vprime) *
                       triple->norm(phi0, Space::V);
    const double rhs = triple->norm(phi0, Space::H);
    CHECK(lhs == doctest::Approx(rhs * rhs).epsilon(1e-10));
  }
  SUBCASE("op_norm in H is invariant under h_adjoint") {
    const Matrix B = test::random_matrix(rng, 7);
    CHECK(triple->op_norm(B, Space::H) ==
          doctest::Approx(triple->op_norm(triple->h_adjoint(B), Space::H))
              .epsilon(1e-10));
  }
}

TEST_CASE("triple construction validates its inputs") {
  SUBCASE("non-Hermitian mass rejected") {
    Matrix M = Matrix::Identity(2, 2);
    M(0, 1) = 0.5;
    CHECK_THROWS_AS(GelfandTriple::make(M, Matrix::Identity(2, 2)),
                    std::invalid_argument);
  }
  SUBCASE("indefinite mass rejected") {
    Matrix M = Matrix::Identity(2, 2);
    M(1, 1) = -1.0;
    CHECK_THROWS_AS(GelfandTriple::make(M, Matrix::Identity(2, 2)),
                    std::invalid_argument);
  }
  SUBCASE("indefinite vGram rejected") {
    Matrix K = Matrix::Identity(2, 2);
    K(1, 1) = 0.0;
    CHECK_THROWS_AS(GelfandTriple::make(Matrix::Identity(2, 2), K),
                    std::invalid_argument);
  }
  SUBCASE("tiny Hermiticity defects are symmetrized away") {
    Matrix M = Matrix::Identity(3, 3);
    M(0, 1) = Complex(0.0, 1e-15);
    auto triple = GelfandTriple::make(M, Matrix::Identity(3, 3));
    CHECK((triple->mass_gram() - triple->mass_gram().adjoint()).norm() == 0.0);
  }
}
