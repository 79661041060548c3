// bqm: batch driver for physicality checks, measurements, evolutions and
// state-space scans.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bqm/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bqm: quantum mechanics on l_p spaces with semi-inner products"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  double tol = 0.0;

  for (const char* name : {"check", "measure", "evolve", "scan"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON job configuration")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--tol", tol, "verdict tolerance (overrides the config and BQM_TOL)")
        ->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  const auto command = bqm::cli::parse_command(sub->get_name());

  bqm::cli::Overrides overrides;
  if (sub->count("--seed") > 0) overrides.seed = seed;
  if (sub->count("--tol") > 0) overrides.tol = tol;
  if (const char* env = std::getenv("BQM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v >= 0.0)) {
      std::cerr << "error[InvalidConfig]: BQM_TOL is not a nonnegative number\n";
      return 1;
    }
    overrides.env_tol = v;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error[Io]: cannot read config " << config_path << "\n";
    return 1;
  }
  std::stringstream text;
  text << in.rdbuf();

  if (out_path.empty()) return bqm::cli::run(*command, text.str(), overrides, std::cout, std::cerr);

  std::ostringstream report;
  const int code = bqm::cli::run(*command, text.str(), overrides, report, std::cerr);
  if (code == 1) return code;
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error[Io]: cannot write " << out_path << "\n";
    return 1;
  }
  out << report.str();
  return code;
}
