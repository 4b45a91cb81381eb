#include "config.hpp"

#include "evofam/matrix_io.hpp"
#include "evofam/problems.hpp"

#include <filesystem>
#include <fstream>

namespace evofam::cli {

namespace {

double get_num(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ConfigError(std::string("config: '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

int get_int(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) {
    throw ConfigError(std::string("config: '") + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig load_config(const std::string& path, const std::string& out_dir,
                      int threads, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  RunConfig config;
  try {
    in >> config.raw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!config.raw.is_object()) throw ConfigError("config root must be an object");
  if (!config.raw.contains("problem")) {
    throw ConfigError("config: 'problem' section is required");
  }

  config.outputDir = out_dir;
  config.threads = threads;
  config.seed = seed;
  // Canonical (sorted-key) dump plus the seed: everything the outputs may
  // depend on. Thread count deliberately excluded.
  config.configHash = fnv1a_hex(config.raw.dump() + "#" + std::to_string(seed));

  if (config.raw.contains("tolerances")) {
    const auto& t = config.raw.at("tolerances");
    config.tolerances.expTolerance =
        get_num(t, "expTolerance", config.tolerances.expTolerance);
    config.tolerances.refTol = get_num(t, "refTol", config.tolerances.refTol);
    config.tolerances.duality = get_num(t, "duality", config.tolerances.duality);
    config.tolerances.cocycle = get_num(t, "cocycle", config.tolerances.cocycle);
    config.tolerances.identity =
        get_num(t, "identity", config.tolerances.identity);
    config.tolerances.vprimeAgreement =
        get_num(t, "vprimeAgreement", config.tolerances.vprimeAgreement);
  }
  for (double tol : {config.tolerances.expTolerance, config.tolerances.refTol,
                     config.tolerances.duality, config.tolerances.cocycle,
                     config.tolerances.vprimeAgreement}) {
    if (!(tol > 0.0)) throw ConfigError("config: tolerances must be positive");
  }
  if (!(config.tolerances.identity >= 0.0)) {
    throw ConfigError("config: tolerances must be nonnegative");
  }
  return config;
}

ProblemBundle build_problem(const RunConfig& config) {
  const auto& p = config.raw.at("problem");
  if (!p.is_object() || !p.contains("type")) {
    throw ConfigError("config: problem needs a 'type'");
  }
  const std::string type = p.at("type").get<std::string>();

  ProblemBundle bundle;
  try {
    if (type == "robin") {
      RobinProblem rp;
      rp.nElems = get_int(p, "nElems", rp.nElems);
      rp.betaBase = get_num(p, "betaBase", rp.betaBase);
      rp.betaAmp = get_num(p, "betaAmp", rp.betaAmp);
      rp.holder = get_num(p, "holder", rp.holder);
      rp.horizon = get_num(p, "horizon", rp.horizon);
      auto build = build_robin(rp);
      bundle.triple = build.triple;
      bundle.form = std::make_unique<NonautonomousForm>(std::move(build.form));
      bundle.name = "robin";
    } else if (type == "schrodinger") {
      SchrodingerProblem sp;
      sp.nElems = get_int(p, "nElems", sp.nElems);
      sp.halfWidth = get_num(p, "halfWidth", sp.halfWidth);
      sp.muOffset = get_num(p, "muOffset", sp.muOffset);
      sp.muAmp = get_num(p, "muAmp", sp.muAmp);
      sp.muFreq = get_num(p, "muFreq", sp.muFreq);
      sp.sobolevIndex = get_num(p, "sobolevIndex", sp.sobolevIndex);
      sp.horizon = get_num(p, "horizon", sp.horizon);
      auto build = build_schrodinger(sp);
      bundle.triple = build.triple;
      bundle.form = std::make_unique<NonautonomousForm>(std::move(build.form));
      bundle.name = "schrodinger";
    } else if (type == "random") {
      const int dim = get_int(p, "dim", 6);
      const std::string smooth = p.value("smoothness", "lipschitz");
      Smoothness s;
      if (smooth == "lipschitz") {
        s = Smoothness::Lipschitz;
      } else if (smooth == "holder") {
        s = Smoothness::Holder;
      } else {
        throw ConfigError("config: smoothness must be 'lipschitz' or 'holder'");
      }
      auto build = random_problem(dim, config.seed, s, get_num(p, "holder", 0.75),
                                  get_num(p, "horizon", 1.0));
      bundle.triple = build.triple;
      bundle.form = std::make_unique<NonautonomousForm>(std::move(build.form));
      bundle.name = "random";
    } else if (type == "file") {
      if (!p.contains("path")) throw ConfigError("config: file problem needs 'path'");
      auto build = load_problem_file(p.at("path").get<std::string>());
      bundle.triple = build.triple;
      bundle.form = std::make_unique<NonautonomousForm>(std::move(build.form));
      bundle.name = "file";
    } else {
      throw ConfigError("config: unknown problem type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: malformed problem section: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }

  const double shift = get_num(config.raw, "shift", 0.0);
  if (shift != 0.0) {
    *bundle.form = bundle.form->shifted(shift);
  }
  return bundle;
}

Subdivision build_subdivision(const RunConfig& config, double horizon) {
  if (!config.raw.contains("subdivision")) {
    return Subdivision::uniform(horizon, 8);
  }
  const auto& s = config.raw.at("subdivision");
  try {
    if (s.contains("points")) {
      return Subdivision(s.at("points").get<std::vector<double>>());
    }
    const int cells = get_int(s, "cells", 8);
    if (cells < 1) throw ConfigError("config: subdivision cells must be >= 1");
    const std::string kind = s.value("kind", "uniform");
    if (kind == "uniform") {
      return Subdivision::uniform(horizon, static_cast<std::size_t>(cells));
    }
    if (kind == "random") {
      return Subdivision::random(horizon, static_cast<std::size_t>(cells),
                                 config.seed ^ 0xA5A5A5A5ULL);
    }
    throw ConfigError("config: subdivision kind must be 'uniform' or 'random'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: malformed subdivision: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
}

}  // namespace evofam::cli
