#include "evofam/matrix_io.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace evofam {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double min_generalized_eig(const Matrix& A, const Matrix& B) {
  Matrix herm = 0.5 * (A + A.adjoint().eval());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(herm, B,
                                                       Eigen::EigenvaluesOnly);
  return ges.eigenvalues().minCoeff();
}

}  // namespace

void write_dense(std::ostream& out, const Matrix& A) {
  out << A.rows() << ' ' << A.cols() << '\n';
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(A(i, j).real()) << ' ' << format_double(A(i, j).imag());
    }
    out << '\n';
  }
}

void write_dense_file(const std::string& path, const Matrix& A) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  write_dense(out, A);
}

Matrix read_dense(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw std::invalid_argument("dense matrix: bad or missing header");
  }
  Matrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re = 0, im = 0;
      if (!(in >> re >> im)) {
        throw std::invalid_argument("dense matrix: truncated entry list");
      }
      A(i, j) = Complex(re, im);
    }
  }
  return A;
}

Matrix read_dense_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open: " + path);
  return read_dense(in);
}

std::vector<Matrix> read_dense_all(std::istream& in) {
  std::vector<Matrix> out;
  while (true) {
    in >> std::ws;
    if (in.eof() || !in.good()) break;
    out.push_back(read_dense(in));
  }
  return out;
}

std::vector<Matrix> read_dense_all_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open: " + path);
  return read_dense_all(in);
}

TabulatedBuild build_tabulated_form(TabulatedFormSpec spec) {
  if (spec.matrices.size() < 2 || spec.matrices.size() != spec.times.size()) {
    throw std::invalid_argument("tabulated form: need >= 2 matrices matching times");
  }
  if (spec.times.front() != 0.0) {
    throw std::invalid_argument("tabulated form: times must start at 0");
  }
  for (std::size_t i = 0; i + 1 < spec.times.size(); ++i) {
    if (!(spec.times[i] < spec.times[i + 1])) {
      throw std::invalid_argument("tabulated form: times must increase strictly");
    }
  }
  const Eigen::Index n = spec.matrices.front().rows();
  for (const Matrix& A : spec.matrices) {
    if (A.rows() != n || A.cols() != n) {
      throw std::invalid_argument("tabulated form: inconsistent matrix dimensions");
    }
  }
  if (spec.mass_gram.size() == 0) spec.mass_gram = Matrix::Identity(n, n);
  if (spec.v_gram.size() == 0) spec.v_gram = Matrix::Identity(n, n);

  auto triple = GelfandTriple::make(spec.mass_gram, spec.v_gram);
  auto matrices = std::make_shared<std::vector<Matrix>>(std::move(spec.matrices));
  auto times = std::make_shared<std::vector<double>>(std::move(spec.times));
  const double T = times->back();

  NonautonomousForm::Evaluator eval = [matrices, times](double t) {
    const auto& ts = *times;
    if (t >= ts.back()) return matrices->back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return Matrix((1.0 - w) * (*matrices)[lo] + w * (*matrices)[hi]);
  };

  // The interpolant is affine on each segment, so certifying the constants
  // at the tab points is exact for the whole interpolant.
  double alpha_decl = std::numeric_limits<double>::infinity();
  double m_decl = 0.0;
  for (const Matrix& A : *matrices) {
    alpha_decl = std::min(alpha_decl, min_generalized_eig(A, triple->v_gram()));
    const Matrix S = triple->eigenvectors().adjoint() * A * triple->eigenvectors();
    const RealVector inv_root = triple->eigenvalues().cwiseSqrt().cwiseInverse();
    m_decl = std::max(m_decl,
                      spectral_norm(inv_root.cast<Complex>().asDiagonal() * S *
                                    inv_root.cast<Complex>().asDiagonal()));
  }

  Modulus modulus = spec.modulus;
  if (!spec.has_modulus) {
    // Lipschitz envelope of the interpolant in the V_γ-weighted metric.
    const RealVector& lambda = triple->eigenvalues();
    RealVector wgt(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      wgt[i] = std::pow(lambda[i], -0.5 * spec.gamma);
    }
    double lip = 0.0;
    for (std::size_t k = 0; k + 1 < matrices->size(); ++k) {
      const Matrix D = (*matrices)[k + 1] - (*matrices)[k];
      const Matrix S = triple->eigenvectors().adjoint() * D * triple->eigenvectors();
      const double rho = spectral_norm(wgt.cast<Complex>().asDiagonal() * S *
                                       wgt.cast<Complex>().asDiagonal());
      lip = std::max(lip, rho / ((*times)[k + 1] - (*times)[k]));
    }
    modulus = lip > 0 ? Modulus::power(lip, 1.0) : Modulus::zero();
  }

  NonautonomousForm form(triple, T, std::move(eval), m_decl, alpha_decl,
                         std::move(modulus), spec.gamma);
  return TabulatedBuild{triple, std::move(form)};
}

TabulatedBuild load_problem_file(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::invalid_argument("cannot open: " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("problem file: invalid JSON: " + std::string(e.what()));
  }
  if (!j.contains("matrices") || !j.contains("times")) {
    throw std::invalid_argument("problem file: 'matrices' and 'times' are required");
  }
  const auto dir = std::filesystem::path(json_path).parent_path();
  auto resolve = [&dir](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };

  TabulatedFormSpec spec;
  spec.matrices = read_dense_all_file(resolve(j.at("matrices").get<std::string>()));
  spec.times = j.at("times").get<std::vector<double>>();
  if (j.contains("massGram")) {
    spec.mass_gram = read_dense_file(resolve(j.at("massGram").get<std::string>()));
  }
  if (j.contains("vGram")) {
    spec.v_gram = read_dense_file(resolve(j.at("vGram").get<std::string>()));
  }
  spec.gamma = j.value("gamma", 0.5);
  if (j.contains("modulus")) {
    const auto& m = j.at("modulus");
    const std::string type = m.at("type").get<std::string>();
    if (type == "power") {
      spec.modulus = Modulus::power(m.at("c").get<double>(),
                                    m.at("alpha").get<double>());
    } else if (type == "table") {
      spec.modulus = Modulus::table(m.at("t").get<std::vector<double>>(),
                                    m.at("omega").get<std::vector<double>>());
    } else {
      throw std::invalid_argument("problem file: unknown modulus type: " + type);
    }
    spec.has_modulus = true;
  }
  return build_tabulated_form(std::move(spec));
}

}  // namespace evofam
