#include "commands.hpp"

#include "csv.hpp"

#include "evofam/matfun.hpp"
#include "evofam/modulus.hpp"
#include "evofam/parallel.hpp"
#include "evofam/propagator.hpp"
#include "evofam/properties.hpp"
#include "evofam/stats.hpp"
#include "evofam/version.hpp"

#include <filesystem>
#include <fstream>

namespace evofam::cli {

namespace {

using nlohmann::ordered_json;

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::path dir(config.outputDir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write to output directory: " + config.outputDir);
  return out;
}

ordered_json report_header(const RunConfig& config) {
  ordered_json j;
  j["version"] = kVersion;
  j["configHash"] = config.configHash;
  j["seed"] = config.seed;
  j["problem"] = config.raw.at("problem");
  return j;
}

void write_json(const RunConfig& config, const std::string& name,
                const ordered_json& j) {
  auto out = open_output(config, name);
  out << j.dump(2) << '\n';
}

std::string csv_preamble(const RunConfig& config) {
  return std::string("# evofam ") + kVersion + " config " + config.configHash +
         "\n";
}

ordered_json json_or_null(double value, bool finite) {
  if (!finite) return nullptr;
  return value;
}

const nlohmann::json& section(const RunConfig& config, const char* name) {
  static const nlohmann::json empty = nlohmann::json::object();
  if (!config.raw.contains(name)) return empty;
  const auto& s = config.raw.at(name);
  if (!s.is_object()) {
    throw ConfigError(std::string("config: '") + name + "' must be an object");
  }
  return s;
}

}  // namespace

int cmd_solve(const RunConfig& config) {
  const auto problem = build_problem(config);
  const auto& form = *problem.form;
  const double T = form.horizon();
  const auto& s = section(config, "solve");

  // initial vector
  const Eigen::Index n = form.triple().dim();
  Vector x0 = Vector::Zero(n);
  if (!s.contains("x0")) {
    x0[0] = 1.0;
  } else {
    const auto& x = s.at("x0");
    const std::string kind = x.value("kind", "basis");
    if (kind == "basis") {
      const auto index = x.value("index", 0);
      if (index < 0 || index >= n) throw ConfigError("solve: x0 index out of range");
      x0[index] = 1.0;
    } else if (kind == "ones") {
      x0.setOnes();
    } else if (kind == "values") {
      const auto re = x.at("re").get<std::vector<double>>();
      std::vector<double> im(re.size(), 0.0);
      if (x.contains("im")) im = x.at("im").get<std::vector<double>>();
      if (re.size() != static_cast<std::size_t>(n) || im.size() != re.size()) {
        throw ConfigError("solve: x0 values have wrong length");
      }
      for (Eigen::Index i = 0; i < n; ++i) x0[i] = Complex(re[i], im[i]);
    } else {
      throw ConfigError("solve: unknown x0 kind '" + kind + "'");
    }
  }

  // time samples
  std::vector<double> samples;
  if (!s.contains("timeSamples")) {
    for (int i = 0; i <= 16; ++i) samples.push_back(T * i / 16.0);
  } else if (s.at("timeSamples").is_array()) {
    samples = s.at("timeSamples").get<std::vector<double>>();
  } else if (s.at("timeSamples").is_object()) {
    const int count = s.at("timeSamples").value("count", 16);
    if (count < 1) throw ConfigError("solve: timeSamples.count must be >= 1");
    for (int i = 0; i <= count; ++i) samples.push_back(T * i / count);
  } else {
    throw ConfigError("solve: timeSamples must be an array or {count}");
  }
  for (double t : samples) {
    if (!(t >= 0.0 && t <= T)) {
      throw ConfigError("solve: time sample outside [0, T]");
    }
  }

  const Subdivision lambda = build_subdivision(config, T);
  const PropagatorCache cache(form, lambda, config.tolerances.expTolerance,
                              kDefaultQuadratureOrder, config.threads);

  std::vector<Vector> states(samples.size());
  parallel_for(samples.size(), config.threads, [&](std::size_t i) {
    states[i] = cache.eval(samples[i], 0.0) * x0;
  });

  auto csv = open_output(config, "trajectory.csv");
  csv << csv_preamble(config);
  csv << "t";
  for (Eigen::Index i = 0; i < n; ++i) csv << ",x_" << i;
  csv << '\n';
  for (std::size_t k = 0; k < samples.size(); ++k) {
    csv << fmt(samples[k]);
    for (Eigen::Index i = 0; i < n; ++i) csv << ',' << fmt(states[k][i]);
    csv << '\n';
  }

  ordered_json j = report_header(config);
  j["subdivisionCells"] = lambda.cells();
  ordered_json rows = ordered_json::array();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    ordered_json row;
    row["t"] = samples[k];
    row["normH"] = form.triple().norm(states[k], Space::H);
    row["normV"] = form.triple().norm(states[k], Space::V);
    rows.push_back(row);
  }
  j["samples"] = rows;
  write_json(config, "solve.json", j);
  return 0;
}

int cmd_converge(const RunConfig& config) {
  const auto problem = build_problem(config);
  const auto& form = *problem.form;
  const double T = form.horizon();
  const auto& c = section(config, "converge");

  const double t = c.value("t", T);
  const double s = c.value("s", 0.0);
  std::vector<long> levels{2, 4, 8, 16, 32, 64, 128, 256};
  if (c.contains("levels")) levels = c.at("levels").get<std::vector<long>>();

  const auto table = convergence_study(form, t, s, levels,
                                       config.tolerances.refTol,
                                       config.tolerances.expTolerance);

  auto csv = open_output(config, "converge.csv");
  csv << csv_preamble(config);
  csv << "cells,mesh,error,order_so_far\n";
  std::vector<double> meshes, errors;
  for (const auto& row : table.rows) {
    meshes.push_back(row.mesh);
    errors.push_back(row.error);
    const double order = loglog_slope(meshes, errors);
    csv << row.cells << ',' << fmt(row.mesh) << ',' << fmt(row.error) << ','
        << fmt(order) << '\n';
  }

  ordered_json j = report_header(config);
  j["t"] = t;
  j["s"] = s;
  // operator-norm error on H at fixed (t,s), not a trajectory-space norm
  j["errorMetric"] = "opNorm(H) at fixed (t,s)";
  j["fittedOrder"] = table.fittedOrder;
  j["referenceCells"] = table.referenceCells;
  j["referenceDiff"] = table.referenceDiff;
  write_json(config, "converge.json", j);
  return 0;
}

int cmd_verify(const RunConfig& config) {
  const auto problem = build_problem(config);
  const auto& form = *problem.form;
  const double T = form.horizon();
  const auto& v = section(config, "verify");
  const Tolerances& tol = config.tolerances;

  const int pair_count = v.value("pairs", 10);
  const int triple_count = v.value("triples", 50);
  const int uniformity_samples = v.value("uniformitySamples", 33);
  const int kato_samples = v.value("katoSamples", 3);
  const bool wrong_partition = v.value("wrongPartition", false);
  if (pair_count < 1 || triple_count < 1 || uniformity_samples < 1 ||
      kato_samples < 1) {
    throw ConfigError("verify: grid sizes must be >= 1");
  }

  const Subdivision lambda = build_subdivision(config, T);
  const auto pairs = random_pairs(T, pair_count, config.seed ^ 0x9E3779B9ULL);
  const auto triples = random_triples(T, triple_count, config.seed ^ 0xC2B2AE35ULL);

  ordered_json j = report_header(config);
  j["subdivision"] = lambda.points();
  ordered_json checks;
  bool pass = true;

  {  // uniform boundedness / coercivity
    std::vector<double> grid;
    for (int i = 0; i < uniformity_samples; ++i) {
      grid.push_back(T * i / std::max(1, uniformity_samples - 1));
    }
    const auto r = form.verify_uniformity(grid);
    ordered_json c;
    c["alphaMin"] = r.alphaMin;
    c["mMax"] = r.mMax;
    c["declaredCoercivity"] = form.declared_coercivity();
    c["declaredBound"] = form.declared_bound();
    c["pass"] = r.pass;
    checks["uniformity"] = c;
    pass = pass && r.pass;
  }
  {  // Dini conditions of the declared modulus
    const auto r = check_dini(form.modulus(), form.gamma(), T);
    ordered_json c;
    c["gamma"] = form.gamma();
    c["supRatio"] = json_or_null(r.supRatio, r.supFinite);
    c["supFinite"] = r.supFinite;
    c["integralValue"] = json_or_null(r.integralValue, r.integralFinite);
    c["integralFinite"] = r.integralFinite;
    c["samplesUsed"] = r.samplesUsed;
    c["pass"] = r.supFinite && r.integralFinite;
    checks["dini"] = c;
    pass = pass && r.supFinite && r.integralFinite;
  }
  {  // evolution-family axioms
    const auto r = check_axioms(form, lambda, triples, tol.expTolerance,
                                config.threads);
    const bool ok = r.maxIdentityDefect <= tol.identity &&
                    r.maxCocycleDefect <= tol.cocycle;
    ordered_json c;
    c["maxIdentityDefect"] = r.maxIdentityDefect;
    c["maxCocycleDefect"] = r.maxCocycleDefect;
    c["identityTolerance"] = tol.identity;
    c["cocycleTolerance"] = tol.cocycle;
    c["pass"] = ok;
    checks["axioms"] = c;
    pass = pass && ok;
  }
  {  // returned-adjoint duality
    const auto variant = wrong_partition ? DualityVariant::WrongPartition
                                         : DualityVariant::Correct;
    const auto r = check_duality(form, lambda, pairs, variant, tol.expTolerance,
                                 config.threads);
    const bool ok = r.maxDefect <= tol.duality;
    ordered_json c;
    c["maxDefect"] = r.maxDefect;
    c["tolerance"] = tol.duality;
    c["wrongPartition"] = wrong_partition;
    c["pass"] = ok;
    checks["duality"] = c;
    pass = pass && ok;
  }
  {  // V' extension bound, two routes
    const auto r = vprime_extension_bound(form, lambda, pairs, tol.expTolerance,
                                          config.threads);
    const bool ok = r.agreementDefect <= tol.vprimeAgreement;
    ordered_json c;
    c["supDirect"] = r.supDirect;
    c["supAdjointRoute"] = r.supAdjointRoute;
    c["agreementDefect"] = r.agreementDefect;
    c["tolerance"] = tol.vprimeAgreement;
    c["pass"] = ok;
    checks["vprimeExtension"] = c;
    pass = pass && ok;
  }
  {  // Kato square-root constants
    ordered_json entries = ordered_json::array();
    bool ok = true;
    for (int i = 0; i < kato_samples; ++i) {
      const double t = T * (i + 1) / (kato_samples + 1);
      ordered_json e;
      e["t"] = t;
      try {
        const auto k = form.kato_constants(t);
        e["cLow"] = k.low;
        e["cHigh"] = k.high;
        ok = ok && k.low > 0.0 && std::isfinite(k.high);
      } catch (const std::domain_error& err) {
        e["error"] = err.what();
        ok = false;
      }
      entries.push_back(e);
    }
    ordered_json c;
    c["samples"] = entries;
    c["pass"] = ok;
    checks["kato"] = c;
    pass = pass && ok;
  }

  j["checks"] = checks;
  j["pass"] = pass;
  write_json(config, "verify.json", j);
  return pass ? 0 : 1;
}

int cmd_modulus(const RunConfig& config) {
  const auto problem = build_problem(config);
  const auto& form = *problem.form;
  const double T = form.horizon();
  const auto& m = section(config, "modulus");

  const double epsilon = m.value("epsilon", T / 10.0);
  const int cells = m.value("cells", 64);
  const int bases = m.value("bases", 6);
  const int deltas = m.value("deltasPerBase", 8);
  const double delta_max = m.value("deltaMaxFrac", 0.2) * T;
  const double delta_min = m.value("deltaMinFrac", 0.002) * T;
  if (!(epsilon > 0.0)) throw ConfigError("modulus: epsilon must be > 0");
  if (cells < 1 || bases < 1 || deltas < 1) {
    throw ConfigError("modulus: cells, bases, deltasPerBase must be >= 1");
  }

  const Subdivision fine = Subdivision::uniform(T, static_cast<std::size_t>(cells));
  const auto grid = modulus_pair_grid(T, epsilon, bases, deltas, delta_max,
                                      delta_min);
  const std::vector<Space> spaces{Space::V, Space::H, Space::Vprime};
  const auto tables = continuity_modulus(form, fine, epsilon, grid, spaces,
                                         config.tolerances.expTolerance,
                                         config.threads);

  ordered_json j = report_header(config);
  j["epsilon"] = epsilon;
  j["fineCells"] = cells;
  ordered_json fitted;
  for (const auto& table : tables) {
    const std::string name = space_name(table.space);
    auto csv = open_output(config, "modulus_" + name + ".csv");
    csv << csv_preamble(config);
    csv << "t,s,tp,sp,delta,increment\n";
    for (const auto& e : table.entries) {
      csv << fmt(e.t) << ',' << fmt(e.s) << ',' << fmt(e.tp) << ',' << fmt(e.sp)
          << ',' << fmt(e.delta) << ',' << fmt(e.increment) << '\n';
    }
    fitted[name] = table.fittedExponent;
  }
  j["fittedExponent"] = fitted;

  // Hilbert-scale consistency of the three increments per pair.
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = tables[0].entries[i].increment;
    const double h = tables[1].entries[i].increment;
    const double vp = tables[2].entries[i].increment;
    const double bound = std::sqrt(v * vp);
    if (bound > 0) worst_ratio = std::max(worst_ratio, h / bound);
  }
  j["interpolationMaxRatio"] = worst_ratio;
  write_json(config, "modulus.json", j);
  return 0;
}

}  // namespace evofam::cli
