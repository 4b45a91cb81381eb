#include "evofam/problems.hpp"

#include "evofam/quadrature.hpp"
#include "evofam/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>

namespace evofam {

namespace {

// P1 mass matrix on a uniform mesh with `nodes` dofs, spacing h, including
// both end nodes.
Matrix p1_mass(int nodes, double h) {
  Matrix M = Matrix::Zero(nodes, nodes);
  for (int e = 0; e + 1 < nodes; ++e) {
    M(e, e) += h / 3.0;
    M(e + 1, e + 1) += h / 3.0;
    M(e, e + 1) += h / 6.0;
    M(e + 1, e) += h / 6.0;
  }
  return M;
}

Matrix p1_stiffness(int nodes, double h) {
  Matrix S = Matrix::Zero(nodes, nodes);
  for (int e = 0; e + 1 < nodes; ++e) {
    S(e, e) += 1.0 / h;
    S(e + 1, e + 1) += 1.0 / h;
    S(e, e + 1) -= 1.0 / h;
    S(e + 1, e) -= 1.0 / h;
  }
  return S;
}

// Weighted P1 mass ∫ w(x)·φ_i·φ_j over a uniform mesh from x0, elementwise
// 3-point Gauss (exact for polynomial weights up to degree 4).
Matrix p1_weighted_mass(int nodes, double h, double x0,
                        const std::function<double(double)>& w) {
  Matrix W = Matrix::Zero(nodes, nodes);
  const auto& rule = gauss_legendre(3);
  for (int e = 0; e + 1 < nodes; ++e) {
    const double a = x0 + e * h;
    const double mid = a + 0.5 * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = mid + 0.5 * h * rule.nodes[q];
      const double wq = 0.5 * h * rule.weights[q] * w(x);
      const double phi_l = (a + h - x) / h;
      const double phi_r = (x - a) / h;
      W(e, e) += wq * phi_l * phi_l;
      W(e + 1, e + 1) += wq * phi_r * phi_r;
      W(e, e + 1) += wq * phi_l * phi_r;
      W(e + 1, e) += wq * phi_l * phi_r;
    }
  }
  return W;
}

double weighted_gamma_norm(const GelfandTriple& triple, const Matrix& B,
                           double gamma) {
  const Matrix S = triple.eigenvectors().adjoint() * B * triple.eigenvectors();
  const RealVector& lambda = triple.eigenvalues();
  RealVector wgt(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    wgt[i] = std::pow(lambda[i], -0.5 * gamma);
  }
  return spectral_norm(wgt.cast<Complex>().asDiagonal() * S *
                       wgt.cast<Complex>().asDiagonal());
}

double min_generalized_eig(const Matrix& A, const Matrix& B) {
  Matrix herm = 0.5 * (A + A.adjoint().eval());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(herm, B,
                                                       Eigen::EigenvaluesOnly);
  return ges.eigenvalues().minCoeff();
}

double max_generalized_eig(const Matrix& A, const Matrix& B) {
  Matrix herm = 0.5 * (A + A.adjoint().eval());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(herm, B,
                                                       Eigen::EigenvaluesOnly);
  return ges.eigenvalues().maxCoeff();
}

// Smallest M with |a(u,v)| <= M·‖u‖_V·‖v‖_V for the constant form A.
double v_bound(const GelfandTriple& triple, const Matrix& A) {
  const Matrix S = triple.eigenvectors().adjoint() * A * triple.eigenvectors();
  const RealVector inv_root = triple.eigenvalues().cwiseSqrt().cwiseInverse();
  return spectral_norm(inv_root.cast<Complex>().asDiagonal() * S *
                       inv_root.cast<Complex>().asDiagonal());
}

Matrix random_complex(detail::SplitMix64& rng, int n) {
  Matrix X(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      X(i, j) = Complex(rng.next_normal(), rng.next_normal()) / std::sqrt(2.0);
    }
  }
  return X;
}

}  // namespace

RobinBuild build_robin(const RobinProblem& p) {
  if (p.nElems < 2) throw std::invalid_argument("robin: nElems must be >= 2");
  if (!(p.holder > 0.25 && p.holder <= 1.0)) {
    throw std::invalid_argument("robin: holder exponent must lie in (1/4, 1]");
  }
  if (!(p.horizon > 0.0)) throw std::invalid_argument("robin: horizon must be > 0");
  if (!std::isfinite(p.betaBase) || !std::isfinite(p.betaAmp)) {
    throw std::invalid_argument("robin: beta coefficients must be finite");
  }

  const int nodes = p.nElems + 1;
  const double h = 1.0 / p.nElems;
  const Matrix mass = p1_mass(nodes, h);
  const Matrix stiff = p1_stiffness(nodes, h);
  Matrix boundary = Matrix::Zero(nodes, nodes);
  boundary(0, 0) = 1.0;
  boundary(nodes - 1, nodes - 1) = 1.0;

  auto triple = GelfandTriple::make(mass, stiff + mass);

  const double alpha_h = p.holder;
  const double b0 = p.betaBase;
  const double b1 = p.betaAmp;
  const double T = p.horizon;
  auto beta = [b0, b1, alpha_h](double t) { return b0 + b1 * std::pow(t, alpha_h); };
  NonautonomousForm::Evaluator eval = [stiff, boundary, beta](double t) {
    return Matrix(stiff + beta(t) * boundary);
  };

  // γ = r₀ + 1/2 with r₀ ∈ (0, 1/2) and γ < min(1, 2α).
  const double gamma = 0.5 + 0.8 * (std::min(1.0, 2.0 * alpha_h) - 0.5);

  // β(t) is monotone, so the affine family A(β) over the β-range certifies
  // the uniform constants at its endpoints (λ_min concave, σ_max convex
  // in β).
  const double beta_a = beta(0.0);
  const double beta_b = beta(T);
  const double beta_lo = std::min(beta_a, beta_b);
  const double beta_hi = std::max(beta_a, beta_b);
  const Matrix A_lo = stiff + beta_lo * boundary;
  const Matrix A_hi = stiff + beta_hi * boundary;
  const double alpha_decl = std::min(min_generalized_eig(A_lo, triple->v_gram()),
                                     min_generalized_eig(A_hi, triple->v_gram()));
  const double m_decl =
      std::max(v_bound(*triple, A_lo), v_bound(*triple, A_hi));

  const double rho = weighted_gamma_norm(*triple, boundary, gamma);
  const double coeff = std::abs(b1) * rho;
  Modulus modulus = coeff > 0 ? Modulus::power(coeff, alpha_h) : Modulus::zero();

  double suggested_shift = 0.0;
  if (!(alpha_decl > 0.0)) {
    const double need =
        std::max(max_generalized_eig(-A_lo, triple->mass_gram()),
                 max_generalized_eig(-A_hi, triple->mass_gram()));
    suggested_shift = need * (1.0 + 1e-6) + 1e-12;
  }

  NonautonomousForm form(triple, T, std::move(eval), m_decl, alpha_decl,
                         std::move(modulus), gamma);
  return RobinBuild{triple, std::move(form), gamma, coeff, suggested_shift};
}

SchrodingerBuild build_schrodinger(const SchrodingerProblem& p) {
  if (p.nElems < 2) throw std::invalid_argument("schrodinger: nElems must be >= 2");
  if (!(p.halfWidth > 0.0)) {
    throw std::invalid_argument("schrodinger: halfWidth must be > 0");
  }
  if (!(p.horizon > 0.0)) {
    throw std::invalid_argument("schrodinger: horizon must be > 0");
  }
  if (!(p.sobolevIndex >= 0.0 && p.sobolevIndex <= 1.0)) {
    throw std::invalid_argument("schrodinger: sobolevIndex must lie in [0,1]");
  }
  const double alpha1 = p.muOffset - std::abs(p.muAmp);
  const double alpha2 = p.muOffset + std::abs(p.muAmp);
  if (!(alpha1 > 0.0)) {
    throw std::invalid_argument("schrodinger: need muOffset - |muAmp| > 0");
  }

  const int nodes = p.nElems - 1;  // Dirichlet: interior nodes only
  const double L = p.halfWidth;
  const double h = 2.0 * L / p.nElems;
  // Assemble on all elements, then restrict to interior nodes.
  const int full = p.nElems + 1;
  const Matrix mass_full = p1_mass(full, h);
  const Matrix stiff_full = p1_stiffness(full, h);
  const Matrix w_full =
      p1_weighted_mass(full, h, -L, [](double x) { return 1.0 + x * x; });
  const Matrix mass = mass_full.block(1, 1, nodes, nodes);
  const Matrix stiff = stiff_full.block(1, 1, nodes, nodes);
  const Matrix weighted = w_full.block(1, 1, nodes, nodes);

  auto triple = GelfandTriple::make(mass, stiff + weighted);

  const double off = p.muOffset, amp = p.muAmp, freq = p.muFreq;
  const double T = p.horizon;
  auto mu = [off, amp, freq](double t) { return off + amp * std::sin(freq * t); };
  // Validate the declared envelope on a certification grid.
  for (int i = 0; i <= 64; ++i) {
    const double m = mu(T * i / 64.0);
    if (!(m >= alpha1 - 1e-12 && m <= alpha2 + 1e-12)) {
      throw std::invalid_argument("schrodinger: mu violates its declared bounds");
    }
  }
  NonautonomousForm::Evaluator eval = [stiff, weighted, mu](double t) {
    return Matrix(stiff + mu(t) * weighted);
  };

  const double kappa = std::abs(amp * freq);
  double gamma = p.sobolevIndex;
  gamma = std::min(std::max(gamma, 1e-3), 1.0 - 1e-3);

  const Matrix A_lo = stiff + alpha1 * weighted;
  const Matrix A_hi = stiff + alpha2 * weighted;
  const double alpha_decl = std::min(min_generalized_eig(A_lo, triple->v_gram()),
                                     min_generalized_eig(A_hi, triple->v_gram()));
  const double m_decl =
      std::max(v_bound(*triple, A_lo), v_bound(*triple, A_hi));

  const double rho = weighted_gamma_norm(*triple, weighted, gamma);
  const double kappa_prime = kappa * rho;
  Modulus modulus =
      kappa_prime > 0 ? Modulus::power(kappa_prime, 1.0) : Modulus::zero();

  NonautonomousForm form(triple, T, std::move(eval), m_decl, alpha_decl,
                         std::move(modulus), gamma);
  return SchrodingerBuild{triple,      std::move(form), alpha1, alpha2, kappa,
                          kappa_prime, kappa * (1.0 + L * L)};
}

RandomBuild random_problem(int n, std::uint64_t seed, Smoothness smoothness,
                           double holder_exponent, double horizon) {
  if (n < 2) throw std::invalid_argument("random_problem: n must be >= 2");
  if (smoothness == Smoothness::Holder &&
      !(holder_exponent > 0.0 && holder_exponent <= 1.0)) {
    throw std::invalid_argument("random_problem: holder exponent must lie in (0,1]");
  }
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("random_problem: horizon must be > 0");
  }

  detail::SplitMix64 rng(seed);
  const Matrix I = Matrix::Identity(n, n);

  Matrix Y = random_complex(rng, n);
  Y /= spectral_norm(Y);
  const Matrix mass = I + Y * Y.adjoint();

  // vGram dominates 3·massGram so that downshifts of order one (the
  // rescaling pathway) keep generated forms safely coercive.
  Matrix Z = random_complex(rng, n);
  Z /= spectral_norm(Z);
  const Matrix v_gram = 3.0 * mass + 0.5 * I + Z * Z.adjoint();

  auto triple = GelfandTriple::make(mass, v_gram);

  Matrix N = random_complex(rng, n);
  N /= v_bound(*triple, N);
  const Matrix A0 = v_gram + 0.35 * N;

  Matrix B = random_complex(rng, n);
  B /= v_bound(*triple, B);
  B *= 0.2;

  const double T = horizon;
  std::function<double(double)> phi;
  double phi_lo, phi_hi, lip = 0.0;
  if (smoothness == Smoothness::Lipschitz) {
    phi = [](double t) { return std::sin(2.2 * t); };
    phi_lo = -1.0;
    phi_hi = 1.0;
    lip = 2.2;
  } else {
    const double a = holder_exponent;
    phi = [a](double t) { return std::pow(t, a); };
    phi_lo = 0.0;
    phi_hi = std::pow(T, a);
  }
  NonautonomousForm::Evaluator eval = [A0, B, phi](double t) {
    return Matrix(A0 + phi(t) * B);
  };

  const Matrix A_lo = A0 + phi_lo * B;
  const Matrix A_hi = A0 + phi_hi * B;
  const double alpha_decl = std::min(min_generalized_eig(A_lo, triple->v_gram()),
                                     min_generalized_eig(A_hi, triple->v_gram()));
  const double m_decl =
      std::max(v_bound(*triple, A_lo), v_bound(*triple, A_hi));

  const double gamma = 0.5;
  const double rho = weighted_gamma_norm(*triple, B, gamma);
  Modulus modulus = smoothness == Smoothness::Lipschitz
                        ? Modulus::power(lip * rho, 1.0)
                        : Modulus::power(rho, holder_exponent);

  NonautonomousForm form(triple, T, std::move(eval), m_decl, alpha_decl,
                         std::move(modulus), gamma);
  return RandomBuild{triple, std::move(form)};
}

}  // namespace evofam
