#include "evofam/gelfand.hpp"

#include <algorithm>
#include <cmath>

namespace evofam {

namespace {

constexpr double kHermitianDefectTol = 1e-13;
constexpr double kSpectralCacheTol = 1e-10;

double frobenius(const Matrix& X) { return X.norm(); }

Matrix symmetrized_or_throw(Matrix G, const char* name) {
  if (G.rows() != G.cols()) {
    throw std::invalid_argument(std::string(name) + " must be square");
  }
  if (G.rows() == 0) {
    throw std::invalid_argument(std::string(name) + " must be nonempty");
  }
  const double scale = frobenius(G);
  const double defect = frobenius(G - G.adjoint().eval());
  if (scale > 0 && defect > kHermitianDefectTol * scale) {
    throw std::invalid_argument(std::string(name) +
                                " is not Hermitian (relative defect " +
                                std::to_string(defect / scale) + ")");
  }
  return 0.5 * (G + G.adjoint().eval());
}

}  // namespace

double spectral_norm(const Matrix& X) {
  if (X.size() == 0) return 0.0;
  Matrix gram = X.adjoint() * X;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.adjoint().eval()),
                                           Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  return lmax > 0 ? std::sqrt(lmax) : 0.0;
}

std::shared_ptr<const GelfandTriple> GelfandTriple::make(Matrix mass_gram,
                                                         Matrix v_gram) {
  auto triple = std::shared_ptr<GelfandTriple>(new GelfandTriple());
  triple->mass_ = symmetrized_or_throw(std::move(mass_gram), "massGram");
  triple->v_ = symmetrized_or_throw(std::move(v_gram), "vGram");
  if (triple->mass_.rows() != triple->v_.rows()) {
    throw std::invalid_argument("massGram and vGram dimensions differ");
  }

  triple->mass_llt_.compute(triple->mass_);
  if (triple->mass_llt_.info() != Eigen::Success) {
    throw std::invalid_argument("massGram is not positive definite");
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(
      triple->v_, triple->mass_, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw NumericalError("generalized eigendecomposition of (vGram, massGram) failed");
  }
  triple->lambda_ = ges.eigenvalues();
  triple->phi_ = ges.eigenvectors();
  if (triple->lambda_.minCoeff() <= 0) {
    throw std::invalid_argument("vGram is not positive definite");
  }
  triple->phi_h_mass_ = triple->phi_.adjoint() * triple->mass_;

  // Spectral-cache quality: Φ must be massGram-orthonormal and must
  // diagonalize vGram to 1e-10.
  const Eigen::Index n = triple->dim();
  const double ortho_defect =
      frobenius(triple->phi_h_mass_ * triple->phi_ - Matrix::Identity(n, n));
  Matrix diag_check = triple->phi_.adjoint() * triple->v_ * triple->phi_;
  diag_check.diagonal() -= triple->lambda_.cast<Complex>();
  const double diag_defect =
      frobenius(diag_check) / std::max(1.0, triple->lambda_.maxCoeff());
  if (ortho_defect > kSpectralCacheTol || diag_defect > kSpectralCacheTol) {
    throw NumericalError("spectral basis quality below tolerance");
  }
  return triple;
}

void GelfandTriple::check_vector(const Vector& u) const {
  if (u.size() != dim()) {
    throw std::invalid_argument("coefficient vector has wrong dimension");
  }
}

void GelfandTriple::check_matrix(const Matrix& B) const {
  if (B.rows() != dim() || B.cols() != dim()) {
    throw std::invalid_argument("operator matrix has wrong dimension");
  }
}

double GelfandTriple::embedding_constant() const {
  return 1.0 / std::sqrt(lambda_.minCoeff());
}

Vector GelfandTriple::to_spectral(const Vector& u) const {
  check_vector(u);
  return phi_h_mass_ * u;
}

Matrix GelfandTriple::to_spectral_operator(const Matrix& B) const {
  check_matrix(B);
  return phi_h_mass_ * B * phi_;
}

double GelfandTriple::norm(const Vector& u, Space space) const {
  check_vector(u);
  switch (space) {
    case Space::H:
      return to_spectral(u).norm();
    case Space::V: {
      const Vector c = to_spectral(u);
      double acc = 0;
      for (Eigen::Index i = 0; i < c.size(); ++i) acc += lambda_[i] * std::norm(c[i]);
      return std::sqrt(acc);
    }
    case Space::Vprime: {
      // u holds functional coefficients f_i = <F, e_i>; ‖F‖² = f^H·K⁻¹·f.
      const Vector c = phi_.adjoint() * u;
      double acc = 0;
      for (Eigen::Index i = 0; i < c.size(); ++i) acc += std::norm(c[i]) / lambda_[i];
      return std::sqrt(acc);
    }
  }
  throw std::invalid_argument("unknown space tag");
}

double GelfandTriple::norm_vgamma(const Vector& u, double gamma) const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0,1]");
  }
  const Vector c = to_spectral(u);
  double acc = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    acc += std::pow(lambda_[i], gamma) * std::norm(c[i]);
  }
  return std::sqrt(acc);
}

double GelfandTriple::op_norm(const Matrix& B, Space space) const {
  check_matrix(B);
  switch (space) {
    case Space::H:
      return spectral_norm(to_spectral_operator(B));
    case Space::V: {
      Matrix S = to_spectral_operator(B);
      const RealVector root = lambda_.cwiseSqrt();
      S = root.cast<Complex>().asDiagonal() * S;
      S = S * root.cwiseInverse().cast<Complex>().asDiagonal();
      return spectral_norm(S);
    }
    case Space::Vprime:
      // Duality route: the V'-extension of B has the norm of its H-adjoint
      // in L(V).
      return op_norm(h_adjoint(B), Space::V);
  }
  throw std::invalid_argument("unknown space tag");
}

Matrix GelfandTriple::h_adjoint(const Matrix& B) const {
  check_matrix(B);
  return mass_llt_.solve(B.adjoint() * mass_);
}

Matrix GelfandTriple::solve_mass(const Matrix& X) const {
  if (X.rows() != dim()) {
    throw std::invalid_argument("solve_mass: row dimension mismatch");
  }
  return mass_llt_.solve(X);
}

}  // namespace evofam
