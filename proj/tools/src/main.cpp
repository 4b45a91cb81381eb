#include "commands.hpp"
#include "config.hpp"

#include "evofam/types.hpp"
#include "evofam/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"evofam: evolution families from non-autonomous forms"};
  app.set_version_flag("--version", evofam::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  std::uint64_t seed = 1;

  int (*command)(const evofam::cli::RunConfig&) = nullptr;
  for (auto [name, desc, fn] :
       {std::tuple{"solve", "propagate an initial vector and write the trajectory",
                   &evofam::cli::cmd_solve},
        std::tuple{"converge", "error table against the self-convergent reference",
                   &evofam::cli::cmd_converge},
        std::tuple{"verify", "run the duality/axioms/extension/Dini/Kato checks",
                   &evofam::cli::cmd_verify},
        std::tuple{"modulus", "norm-continuity modulus tables in V, H, V'",
                   &evofam::cli::cmd_modulus}}) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--threads", threads, "worker thread cap (default: 1)");
    sub->add_option("--seed", seed, "seed for generated problems and grids");
    sub->callback([&command, fn] { command = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config =
        evofam::cli::load_config(config_path, out_dir, threads, seed);
    return command(config);
  } catch (const evofam::cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const evofam::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
