#pragma once

#include "evofam/forms.hpp"
#include "evofam/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace evofam {

/// Dense matrix text format: a header line "rows cols", then rows·cols
/// entries in row-major order, each entry written as the pair "re im".
/// Multiple matrices may be concatenated in one file (see read_dense_all).
void write_dense(std::ostream& out, const Matrix& A);
void write_dense_file(const std::string& path, const Matrix& A);

Matrix read_dense(std::istream& in);
Matrix read_dense_file(const std::string& path);

/// All matrix blocks in the stream, until EOF.
std::vector<Matrix> read_dense_all(std::istream& in);
std::vector<Matrix> read_dense_all_file(const std::string& path);

/// A form tabulated at increasing times, linearly interpolated in t between
/// the tabulated matrices. times.front() must be 0 and times.back() is the
/// horizon. Declared constants are certified from the tabulated matrices
/// (exact for the interpolant: the extremes of an affine segment sit at its
/// ends); the modulus defaults to the interpolant's Lipschitz envelope when
/// none is supplied.
struct TabulatedFormSpec {
  std::vector<Matrix> matrices;
  std::vector<double> times;
  Matrix mass_gram;  // empty: identity
  Matrix v_gram;     // empty: identity
  double gamma = 0.5;
  bool has_modulus = false;
  Modulus modulus = Modulus::zero();
};

struct TabulatedBuild {
  std::shared_ptr<const GelfandTriple> triple;
  NonautonomousForm form;
};

TabulatedBuild build_tabulated_form(TabulatedFormSpec spec);

/// Problem file: JSON with keys
///   "matrices": path to a dense matrix file holding one block per time,
///   "times":    strictly increasing, starting at 0,
///   "massGram": optional path (identity when absent),
///   "vGram":    optional path (identity when absent),
///   "gamma":    optional, default 0.5,
///   "modulus":  optional, {"type":"power","c":..,"alpha":..} or
///               {"type":"table","t":[..],"omega":[..]}.
/// Relative paths resolve against the JSON file's directory.
TabulatedBuild load_problem_file(const std::string& json_path);

}  // namespace evofam
