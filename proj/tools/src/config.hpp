#pragma once

#include "evofam/forms.hpp"
#include "evofam/gelfand.hpp"
#include "evofam/subdivision.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace evofam::cli {

/// A bad config file or bad command parameters; mapped to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Tolerances {
  double expTolerance = 1e-12;
  double refTol = 1e-8;
  double duality = 1e-9;
  double cocycle = 1e-10;
  double identity = 1e-12;
  double vprimeAgreement = 1e-9;
};

struct RunConfig {
  nlohmann::json raw;      // as loaded, for echo/hashing
  std::string configHash;  // FNV-1a over canonical dump + seed
  std::string outputDir;
  int threads = 1;
  std::uint64_t seed = 1;
  Tolerances tolerances;
};

struct ProblemBundle {
  std::shared_ptr<const GelfandTriple> triple;
  std::unique_ptr<NonautonomousForm> form;
  std::string name;
};

RunConfig load_config(const std::string& path, const std::string& out_dir,
                      int threads, std::uint64_t seed);

/// Builds the configured problem (applying the optional "shift").
ProblemBundle build_problem(const RunConfig& config);

/// The configured subdivision over the form's horizon (default: uniform,
/// 8 cells).
Subdivision build_subdivision(const RunConfig& config, double horizon);

std::string fnv1a_hex(const std::string& data);

}  // namespace evofam::cli
