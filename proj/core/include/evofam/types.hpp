#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace evofam {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Which member of the scale V ⊂ H ⊂ V' a norm refers to. The fractional
/// spaces between H and V are exposed separately (norm_vgamma) since they
/// carry a parameter.
enum class Space { H, V, Vprime };

inline const char* space_name(Space s) {
  switch (s) {
    case Space::H: return "H";
    case Space::V: return "V";
    case Space::Vprime: return "Vprime";
  }
  return "?";
}

/// Thrown when an iterative or factorization-based kernel cannot reach its
/// requested accuracy (as opposed to a caller error, which throws
/// std::invalid_argument / std::domain_error).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evofam
