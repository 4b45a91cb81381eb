#pragma once

#include "evofam/types.hpp"

#include <memory>

namespace evofam {

/// Finite-dimensional stand-in for a Gelfand triple V ⊂ H ⊂ V'. Two
/// Hermitian positive-definite Gram matrices define the inner products:
/// (u|v)_H = v^H M u and (u|v)_V = v^H K u on coefficient vectors. The
/// generalized eigendecomposition K·Φ = M·Φ·diag(λ) is cached at
/// construction; Φ is M-orthonormal, so the columns of Φ are a spectral
/// basis in which all norms of the scale become weighted l² norms:
///
///   ‖u‖²_H  = Σ |c_i|²        c = Φ^H·M·u
///   ‖u‖²_V  = Σ λ_i |c_i|²
///   ‖u‖²_γ  = Σ λ_i^γ |c_i|²  (Hilbert-scale interpolation space, γ∈[0,1])
///
/// V' is represented by functional coefficient vectors f_i = ⟨F, e_i⟩, so
/// the embedding of H into V' is u ↦ M·u and ‖F‖²_{V'} = f^H·K⁻¹·f.
///
/// Immutable after construction; every operation is const and safe to call
/// concurrently.
class GelfandTriple {
 public:
  /// Builds the triple and its spectral cache. Inputs are symmetrized when
  /// the Hermiticity defect is below 1e-13 relative (Frobenius); larger
  /// defects, non-positive-definite Grams, or a low-quality eigen-solve
  /// throw.
  static std::shared_ptr<const GelfandTriple> make(Matrix mass_gram,
                                                   Matrix v_gram);

  Eigen::Index dim() const { return mass_.rows(); }
  const Matrix& mass_gram() const { return mass_; }
  const Matrix& v_gram() const { return v_; }

  /// Generalized eigenvalues λ_1 ≤ … ≤ λ_n of (vGram, massGram).
  const RealVector& eigenvalues() const { return lambda_; }
  /// Generalized eigenvectors, massGram-orthonormal columns.
  const Matrix& eigenvectors() const { return phi_; }

  /// c_H with ‖u‖_H ≤ c_H·‖u‖_V for all u.
  double embedding_constant() const;

  /// Norm of a coefficient vector (H, V) or of a functional coefficient
  /// vector (Vprime).
  double norm(const Vector& u, Space space) const;

  /// Interpolation-space norm ‖u‖_{V_γ}, γ ∈ [0,1]; γ=0 is the H norm,
  /// γ=1 the V norm.
  double norm_vgamma(const Vector& u, double gamma) const;

  /// Operator norm of B: L(H) and L(V) for B acting on coefficient
  /// vectors; L(V') for the V'-extension of B (computed by duality as
  /// ‖h_adjoint(B)‖_{L(V)}).
  double op_norm(const Matrix& B, Space space) const;

  /// Adjoint with respect to the H inner product: M⁻¹·B^H·M, so that
  /// (Bu|v)_H = (u|h_adjoint(B)v)_H.
  Matrix h_adjoint(const Matrix& B) const;

  /// Spectral coordinates c = Φ^H·M·u of a coefficient vector.
  Vector to_spectral(const Vector& u) const;

  /// M⁻¹·X via the cached Cholesky factor.
  Matrix solve_mass(const Matrix& X) const;

  /// Embedding H → V' in coefficients: u ↦ M·u.
  Vector embed_h_in_vprime(const Vector& u) const { return mass_ * u; }

  /// Spectral coordinates of a matrix: Φ⁻¹·B·Φ.
  Matrix to_spectral_operator(const Matrix& B) const;

 private:
  GelfandTriple() = default;

  void check_vector(const Vector& u) const;
  void check_matrix(const Matrix& B) const;

  Matrix mass_;
  Matrix v_;
  RealVector lambda_;
  Matrix phi_;
  Matrix phi_h_mass_;  // Φ^H·M == Φ⁻¹
  Eigen::LLT<Matrix> mass_llt_;
};

/// Largest singular value, computed as sqrt(λ_max(X^H X)).
double spectral_norm(const Matrix& X);

}  // namespace evofam
