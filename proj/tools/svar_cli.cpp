#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "svar/error.hpp"
#include "svar/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw svar::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::string config;
  std::string out;
  std::string format;
  std::string engine;
  std::optional<std::uint64_t> seed;
  std::optional<int> order;
};

int execute(const std::string& name, const Overrides& o) {
  svar::RunConfig config = svar::parse_config_text(read_file(o.config));
  if (!o.out.empty()) config.out = o.out;
  if (!o.format.empty()) config.format = o.format;
  if (!o.engine.empty()) config.engine = o.engine;
  if (o.seed) config.seed = *o.seed;
  if (o.order) config.order = *o.order;

  const svar::RunResult result = svar::run(svar::parse_subcommand(name), config);
  std::ostream& log = config.out.empty() ? std::cerr : std::cout;
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& line : result.report) log << line << "\n";
  if (config.out.empty()) {
    std::cout << result.artifact;
  } else {
    std::ofstream f(config.out, std::ios::binary);
    if (!f) throw svar::ConfigError("cannot write output file '" + config.out + "'");
    f << result.artifact;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cumulants and density expansions of the sample variance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(svar::kToolVersion));

  Overrides overrides;
  std::string chosen;
  for (const char* name : {"cumulants", "moments", "density", "cdf", "validate", "simulate", "chisq-check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", overrides.config, "configuration document (JSON)")->required();
    sub->add_option("--out", overrides.out, "output path (default: stdout)");
    sub->add_option("--format", overrides.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", overrides.seed, "Monte Carlo seed");
    sub->add_option("--order", overrides.order, "expansion order: 0, 3, 4, 6 (gram-charlier) or 1, 2 (edgeworth)");
    sub->add_option("--engine", overrides.engine, "moment | cumulant | both")
        ->check(CLI::IsMember({"moment", "cumulant", "both"}));
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? svar::kExitOk : svar::kExitUsage;
  }

  try {
    return execute(chosen, overrides);
  } catch (const svar::Error& e) {
    std::cerr << "svar " << chosen << ": " << e.what() << "\n";
    return svar::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "svar " << chosen << ": unexpected error: " << e.what() << "\n";
    return svar::kExitUsage;
  }
}
