#include <catch_amalgamated.hpp>
#include <json.hpp>

#include "svar/error.hpp"
#include "svar/run.hpp"

using namespace svar;
using Catch::Approx;
using nlohmann::json;

namespace {

RunConfig config(const std::string& text) { return parse_config_text(text); }

const char* kNormal = R"({"process": {"kind": "iid", "distribution": "normal", "sigma": 1}, "n": 10})";
const char* kMarkov =
    R"({"process": {"kind": "markov", "states": [0, 1], "transition": [[0.9, 0.1], [0.2, 0.8]]}, "n": 8})";
const char* kConstant = R"({"process": {"kind": "constant", "value": 3}, "n": 8})";
const char* kAr1 =
    R"({"process": {"kind": "gaussian-ar1", "phi": 0.5, "innovation_sd": 0.8}, "n": 12, "draws": 20000})";

}  // namespace

TEST_CASE("configuration parsing", "[cli]") {
  const auto c = config(kMarkov);
  CHECK(c.process.kind == ProcessKind::markov);
  CHECK(c.n == 8);
  CHECK(c.tol.rel == 1e-10);
  CHECK(c.grid.points == 201);
  CHECK_THROWS_AS(config("{"), ConfigError);
  CHECK_THROWS_AS(config(R"({"n": 8})"), ConfigError);
  CHECK_THROWS_AS(config(R"({"process": {"kind": "iid"}, "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(config(R"({"process": {"kind": "iid", "phi": 0.3}})"), ConfigError);
  CHECK_THROWS_AS(config(R"({"process": {"kind": "levy"}})"), ConfigError);
  CHECK_THROWS_AS(config(R"({"process": {"kind": "iid"}, "n": 1})"), ConfigError);
  CHECK_THROWS_AS(config(R"({"process": {"kind": "iid"}, "grid_points": 1})"), ConfigError);
  CHECK_THROWS_AS(config(R"({"process": {"kind": "iid"}, "format": "xml"})"), ConfigError);
  CHECK_THROWS_AS(parse_subcommand("plot"), ConfigError);
}

TEST_CASE("config hash ignores the output path only", "[cli]") {
  auto a = config(kNormal);
  auto b = a;
  b.out = "/tmp/elsewhere.json";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 7;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("cumulants subcommand for i.i.d. normal data", "[cli]") {
  const auto r = run(Subcommand::cumulants, config(kNormal));
  CHECK(r.exit_code == kExitOk);
  const auto j = json::parse(r.artifact);
  CHECK(j["provenance"]["tool"] == "svar");
  CHECK(j["provenance"]["version"] == kToolVersion);
  CHECK(j["moment_route"]["k1"].get<double>() == Approx(1.0));
  CHECK(j["moment_route"]["k2"].get<double>() == Approx(2.0 / 9.0));
  CHECK(j["moment_route"]["k3"].get<double>() == Approx(8.0 / 81.0));
  CHECK(j["moment_route"]["k4"].get<double>() == Approx(48.0 / 729.0));
  CHECK(j.contains("cumulant_route"));
  CHECK(j["moment_route"]["residuals"].contains("r3_alt"));
}

TEST_CASE("constant process", "[cli]") {
  const auto c = config(kConstant);
  const auto cum = json::parse(run(Subcommand::cumulants, c).artifact);
  for (const char* k : {"k1", "k2", "k3", "k4"}) CHECK(cum["moment_route"][k].get<double>() == 0.0);
  const auto density = run(Subcommand::density, c);
  CHECK(density.exit_code == kExitOk);
  REQUIRE(density.warnings.size() == 1);
  CHECK(density.warnings[0].find("point mass") != std::string::npos);
  CHECK(run(Subcommand::cdf, c).exit_code == kExitOk);
  CHECK(run(Subcommand::validate, c).exit_code == kExitOk);
  CHECK(run(Subcommand::moments, c).exit_code == kExitOk);
  const auto chisq = json::parse(run(Subcommand::chisq_check, c).artifact);
  CHECK(chisq["chi_squared"] == false);
}

TEST_CASE("validate subcommand", "[cli]") {
  const auto ok = run(Subcommand::validate, config(kMarkov));
  CHECK(ok.exit_code == kExitOk);
  CHECK(json::parse(ok.artifact)["passed"] == true);
  for (const auto& line : ok.report) {
    if (line.rfind("NOTE", 0) != 0) CHECK(line.rfind("PASS", 0) == 0);
  }
  auto strict = config(kMarkov);
  strict.tol.abs = 0.0;
  strict.tol.rel = 0.0;
  strict.tol.shift = 0.0;
  const auto failed = run(Subcommand::validate, strict);
  CHECK(failed.exit_code == kExitValidationFailed);
  CHECK(json::parse(failed.artifact)["passed"] == false);
}

TEST_CASE("grid subcommands", "[cli]") {
  auto c = config(kNormal);
  c.format = "csv";
  const auto r = run(Subcommand::density, c);
  CHECK(r.artifact.find("x,normal,gc3,gc4,edgeworth1,edgeworth2,reference\n") != std::string::npos);
  CHECK(r.artifact.rfind("# tool=svar", 0) == 0);

  auto markov = config(kMarkov);
  markov.format = "csv";
  const auto m = run(Subcommand::cdf, markov);
  CHECK(m.artifact.find("reference") == std::string::npos);

  auto six = config(R"({"process": {"kind": "iid", "distribution": "normal"}, "n": 6, "order": 4})");
  CHECK_THROWS_AS(run(Subcommand::density, six), InsufficientSampleSize);
}

TEST_CASE("simulate and chisq-check", "[cli]") {
  const auto c = config(kAr1);
  const auto a = run(Subcommand::simulate, c);
  const auto b = run(Subcommand::simulate, c);
  CHECK(a.artifact == b.artifact);
  CHECK(json::parse(a.artifact)["summary"]["draws"] == 20000);
  CHECK_THROWS_AS(run(Subcommand::simulate, config(kMarkov)), ConfigError);

  auto cov = config(kNormal);
  cov.covariance = std::vector<std::vector<double>>{{1, 0}, {0, 2}};
  const auto j = json::parse(run(Subcommand::chisq_check, cov).artifact);
  CHECK(j["chi_squared"] == false);
  CHECK(j["max_deviation"].get<double>() == Approx(0.25));
  CHECK(json::parse(run(Subcommand::chisq_check, config(kNormal)).artifact)["chi_squared"] == true);
}

TEST_CASE("repeated runs are byte-identical", "[cli]") {
  for (const char* text : {kNormal, kMarkov}) {
    const auto c = config(text);
    for (auto cmd : {Subcommand::cumulants, Subcommand::moments, Subcommand::validate, Subcommand::density}) {
      CHECK(run(cmd, c).artifact == run(cmd, c).artifact);
    }
  }
}
