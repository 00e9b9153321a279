// clrlab: run one experiment described by a config file, or list the catalog.

#include <cstdint>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "clrlab/experiments.hpp"

int main(int argc, char** argv) {
  using namespace clrlab::experiments;
  CLI::App app{"clrlab: relativistic magnetic Hamiltonian laboratory"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path, out_dir;
  int workers = 0;
  std::uint64_t seed = 0;
  bool catalog = false, as_json = false;
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--workers", workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides [output] directory)");
  auto* seed_opt = app.add_option("--seed", seed, "root seed (overrides [mc] seed)")
                       ->check(CLI::Range(std::uint64_t{0},
                                          static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())));
  app.add_flag("--catalog", catalog, "list commands, fields and parameters");
  app.add_flag("--json", as_json, "with --catalog: machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  if (catalog) {
    std::cout << list_catalog(as_json);
    return kOk;
  }
  if (config_path.empty()) {
    std::cerr << "config error: --config is required (or use --catalog)\n";
    return kConfigError;
  }
  RunOptions opts;
  opts.workers = workers;
  if (*out_opt) opts.out = out_dir;
  if (*seed_opt) opts.seed = seed;
  return run(config_path, opts, std::cout, std::cerr);
}
