// Acceptance suite: one PASS/FAIL line per criterion. With a criterion number as
// the only argument, runs just that criterion; exit status is 0 iff all run pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "models.hpp"
#include "svar/cumulants.hpp"
#include "svar/expansion.hpp"
#include "svar/oracles.hpp"
#include "svar/run.hpp"

using namespace svar;

namespace {

constexpr double kRelTol = 1e-10;
constexpr double kAbsTol = 1e-12;
constexpr double kResidualR2Tol = 1e-12;
constexpr double kMassTol = 1e-8;
constexpr double kLowCumulantTol = 1e-8;
constexpr double kHighCumulantTol = 1e-6;
constexpr double kL1Bound = 0.02;
constexpr double kLowSe = 4.0;
constexpr double kHighSe = 6.0;
constexpr double kShiftTol = 1e-9;
constexpr double kScaleTol = 1e-10;
constexpr double kChisqTol = 1e-12;
constexpr double kC1Seconds = 10.0;
constexpr double kC3Seconds = 5.0;
constexpr double kC9Seconds = 120.0;
constexpr std::size_t kMcDraws = 1'000'000;
constexpr std::uint64_t kMcSeed = 20240607;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Largest error relative to the allowed band; <= 1 means within tolerance.
struct Worst {
  double ratio = 0.0;
  std::string where;
  void add(double got, double want, double rel, double abs, const std::string& label) {
    const double band = std::max(abs, rel * std::abs(want));
    const double r = std::abs(got - want) / band;
    if (r > ratio || where.empty()) {
      ratio = r;
      where = label;
    }
  }
  [[nodiscard]] bool ok() const { return ratio <= 1.0; }
};

struct NamedModel {
  std::string name;
  ProcessModel model;
  std::size_t n;
  bool iid;
};

std::vector<NamedModel> test_processes() {
  std::vector<NamedModel> out;
  for (std::size_t n : {8u, 10u, 20u, 50u}) out.push_back({"normal n=" + std::to_string(n), iid_normal(1.0), n, true});
  for (std::size_t n = 4; n <= 8; ++n) out.push_back({"rademacher n=" + std::to_string(n), iid_rademacher(), n, true});
  for (std::size_t n : {8u, 10u}) out.push_back({"three-point n=" + std::to_string(n), test::three_point_iid(), n, true});
  out.push_back({"markov n=8", test::markov_chain(8), 8, false});
  out.push_back({"ar1 n=20", gaussian_ar1(0.5, std::sqrt(0.75)), 20, false});
  return out;
}

CumulantSet chisq_cumulants(std::size_t n) {
  const double d = static_cast<double>(n - 1);
  CumulantSet c;
  c.n = n;
  c.order = 4;
  c.k = {1.0, 2.0 / d, 8.0 / (d * d), 48.0 / (d * d * d)};
  return c;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  Worst w;
  for (std::size_t n : {8u, 10u, 20u, 50u}) {
    const auto got = cumulants_moment_route(iid_normal(1.0), n, 4);
    const auto want = chisq_cumulants(n);
    for (std::size_t r = 0; r < 4; ++r) {
      w.add(got.k[r], want.k[r], kRelTol, 0.0, "n=" + std::to_string(n) + " k" + std::to_string(r + 1));
    }
  }
  const double t = seconds_since(start);
  return {w.ok() && t < kC1Seconds,
          "worst error/tol " + fmt(w.ratio) + " at " + w.where + "; runtime " + fmt(t) + " s"};
}

Outcome criterion2() {
  Worst w;
  for (std::size_t n : {8u, 10u, 20u}) {
    const double nd = static_cast<double>(n);
    const auto tables = build_tables(iid_normal(1.0), n, 4);
    w.add(moment3(tables, n), (nd + 1) * (nd + 3) / ((nd - 1) * (nd - 1)), kRelTol, 0.0,
          "E[s^6] n=" + std::to_string(n));
    w.add(moment4(tables, n), (nd + 1) * (nd + 3) * (nd + 5) / std::pow(nd - 1, 3), kRelTol, 0.0,
          "E[s^8] n=" + std::to_string(n));
  }
  return {w.ok(), "worst error/tol " + fmt(w.ratio) + " at " + w.where};
}

void compare_exact(Worst& w, const CumulantSet& got, const CumulantSet& want, const std::string& label) {
  for (int r = 0; r < got.order; ++r) {
    const auto i = static_cast<std::size_t>(r);
    w.add(got.k[i], want.k[i], kRelTol, kAbsTol, label + " k" + std::to_string(r + 1));
  }
}

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  const auto model = test::markov_chain(8);
  Worst w;
  compare_exact(w, cumulants_moment_route(model, 8), exact_cumulants(exact_law(model)), "markov");
  const double t = seconds_since(start);
  return {w.ok() && t < kC3Seconds, "worst error/tol " + fmt(w.ratio) + " at " + w.where + "; " +
                                        std::to_string(model.atoms.size()) + " paths; runtime " + fmt(t) + " s"};
}

Outcome criterion4() {
  Worst w;
  for (std::size_t n = 4; n <= 8; ++n) {
    compare_exact(w, cumulants_moment_route(iid_rademacher(), n), exact_cumulants(exact_law(test::rademacher_joint(n))),
                  "rademacher n=" + std::to_string(n));
  }
  for (std::size_t n : {8u, 10u}) {
    compare_exact(w, cumulants_moment_route(test::three_point_iid(), n),
                  exact_cumulants(exact_law(test::three_point_joint(n))), "three-point n=" + std::to_string(n));
  }
  return {w.ok(), "worst error/tol " + fmt(w.ratio) + " at " + w.where};
}

Outcome criterion5() {
  double worst = 0.0;
  std::string where;
  for (const auto& p : test_processes()) {
    if (!p.iid) continue;
    const double r2 = std::abs(remainder_r2(build_tables(p.model, p.n, 2)));
    if (r2 >= worst) {
      worst = r2;
      where = p.name;
    }
  }
  return {worst <= kResidualR2Tol, "max |R2| " + fmt(worst) + " (" + where + ")"};
}

Outcome criterion6() {
  Worst w;
  for (const auto& p : test_processes()) {
    const int order = max_cumulant_order(p.n);
    const auto tables = build_tables(p.model, p.n, order);
    const auto mr = cumulants_moment_route(tables, p.n, order);
    w.add(kappa2(tables, p.n), mr.k2(), kRelTol, kAbsTol, p.name);
    if (mr.residuals.r3) {
      std::fprintf(stderr, "  r3 %-16s (n-1)n^2: %-12s (n-1)^2 n: %-12s r4 (R4 omitted): %s\n", p.name.c_str(),
                   fmt(*mr.residuals.r3).c_str(), fmt(*mr.residuals.r3_alt).c_str(),
                   mr.residuals.r4 ? fmt(*mr.residuals.r4).c_str() : "n/a");
    }
  }
  return {w.ok(), "A-table k2 worst error/tol " + fmt(w.ratio) + " at " + w.where + "; r3/r4 logged to stderr"};
}

Outcome criterion7() {
  const auto cum = cumulants_moment_route(iid_normal(1.0), 10, 4);
  Worst w;
  for (auto [kind, order] : {std::pair{SeriesKind::gram_charlier, 4}, std::pair{SeriesKind::edgeworth, 2}}) {
    const auto spec = ExpansionSpec::from(cum, kind, order);
    const std::string name = kind == SeriesKind::gram_charlier ? "GC-4" : "Edgeworth-2";
    const double a = spec.mu - 20.0 * spec.sigma;
    const double b = spec.mu + 20.0 * spec.sigma;
    const auto f = [&](double x) { return series_density(spec, x); };
    const double mass = integrate(f, a, b, 1e-14);
    const double mean = integrate([&](double x) { return x * f(x); }, a, b, 1e-14);
    auto central = [&](int p) {
      return integrate([&](double x) { return std::pow(x - mean, p) * f(x); }, a, b, 1e-14);
    };
    const double c2 = central(2);
    w.add(mass, 1.0, 0.0, kMassTol, name + " mass");
    w.add(mean, cum.k1(), 0.0, kLowCumulantTol, name + " k1");
    w.add(c2, cum.k2(), 0.0, kLowCumulantTol, name + " k2");
    w.add(central(3), cum.k3(), 0.0, kHighCumulantTol, name + " k3");
    w.add(central(4) - 3.0 * c2 * c2, cum.k4(), 0.0, kHighCumulantTol, name + " k4");
  }
  return {w.ok(), "worst error/tol " + fmt(w.ratio) + " at " + w.where};
}

Outcome criterion8() {
  const std::size_t n = 10;
  const auto cum = cumulants_moment_route(iid_normal(1.0), n, 4);
  const auto gc4 = ExpansionSpec::from(cum, SeriesKind::gram_charlier, 4);
  const auto normal = ExpansionSpec::from(cum, SeriesKind::gram_charlier, 0);
  auto l1 = [&](const ExpansionSpec& spec) {
    return integrate(
        [&](double x) { return std::abs(series_density(spec, x) - gamma_reference(n, 1.0, x).density); }, 0.0, 4.0,
        1e-12);
  };
  const double d_gc4 = l1(gc4);
  const double d_normal = l1(normal);
  return {d_gc4 < kL1Bound && d_gc4 < d_normal,
          "L1(GC-4, Gamma) = " + fmt(d_gc4) + " (bound " + fmt(kL1Bound) + "), L1(normal, Gamma) = " + fmt(d_normal)};
}

Outcome criterion9() {
  const auto start = std::chrono::steady_clock::now();
  const Ar1Spec spec{0.5, std::sqrt(0.75), 20};
  const auto mc = simulate_ar1(spec, kMcDraws, kMcSeed);
  const auto exact = cumulants_moment_route(gaussian_ar1(spec.phi, spec.innovation_sd), spec.n, 4);
  bool ok = true;
  std::string detail = "z =";
  for (std::size_t r = 0; r < 4; ++r) {
    const double z = (mc.k[r] - exact.k[r]) / mc.se[r];
    ok = ok && std::abs(z) <= (r < 2 ? kLowSe : kHighSe);
    detail += " " + fmt(z);
  }
  const double t = seconds_since(start);
  return {ok && t < kC9Seconds, detail + " (bands 4,4,6,6 SE); runtime " + fmt(t) + " s"};
}

Outcome criterion10() {
  Worst shift;
  Worst scale;
  const double c_shift = 0.75;
  const double c_scale = 1.5;
  std::vector<NamedModel> processes = test_processes();
  processes.push_back({"constant n=8", constant_process(2.0, 8), 8, false});
  for (const auto& p : processes) {
    const int order = max_cumulant_order(p.n);
    const auto base = cumulants_moment_route(p.model, p.n, order);
    const auto moved = cumulants_moment_route(shifted(p.model, c_shift), p.n, order);
    const auto stretched = cumulants_moment_route(scaled(p.model, c_scale), p.n, order);
    for (int r = 1; r <= order; ++r) {
      const auto i = static_cast<std::size_t>(r - 1);
      const std::string label = p.name + " k" + std::to_string(r);
      shift.add(moved.k[i], base.k[i], kShiftTol, kShiftTol, label);
      const double want = std::pow(c_scale, 2 * r) * base.k[i];
      scale.add(stretched.k[i], want, kScaleTol, kAbsTol, label);
    }
  }
  const std::vector<std::vector<double>> identity{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  std::vector<std::vector<double>> rank_one = identity;
  for (auto& row : rank_one)
    for (double& v : row) v += 0.6;
  const std::vector<std::vector<double>> diag{{1, 0}, {0, 2}};
  const bool chisq = chisq_exactness_check(identity, kChisqTol) && chisq_exactness_check(rank_one, kChisqTol) &&
                     !chisq_exactness_check(diag, kChisqTol);
  return {shift.ok() && scale.ok() && chisq, "shift worst " + fmt(shift.ratio) + " (" + shift.where +
                                                 "), scale worst " + fmt(scale.ratio) + " (" + scale.where +
                                                 "), chi-squared check " + (chisq ? "ok" : "wrong")};
}

Outcome criterion11() {
  const std::vector<std::string> configs{
      R"({"process": {"kind": "markov", "states": [0, 1], "transition": [[0.9, 0.1], [0.2, 0.8]]}, "n": 8})",
      R"({"process": {"kind": "iid", "distribution": "discrete", "values": [-1, 0, 2], "probabilities": [0.5, 0.3, 0.2]}, "n": 9})",
      R"({"process": {"kind": "gaussian-ar1", "phi": 0.5, "innovation_sd": 0.8660254037844386}, "n": 20, "draws": 200000, "seed": 7})"};
  bool ok = true;
  int runs = 0;
  for (const auto& text : configs) {
    auto config = parse_config_text(text);
    const auto cmd = config.process.kind == ProcessKind::gaussian_ar1 ? Subcommand::simulate : Subcommand::validate;
    for (const char* format : {"json", "csv"}) {
      config.format = format;
      const auto first = run(cmd, config).artifact;
      const auto second = run(cmd, config).artifact;
      ok = ok && first == second && !first.empty();
      runs += 2;
    }
  }
  return {ok, std::to_string(runs) + " runs of validate/simulate compared byte for byte"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"IID-normal cumulant closed form", criterion1},
    {"E[s^6] and E[s^8] closed forms", criterion2},
    {"exact enumeration, Markov chain", criterion3},
    {"exact enumeration, i.i.d. non-normal", criterion4},
    {"R2 vanishes for i.i.d. data", criterion5},
    {"A-table k2 and logged r3/r4", criterion6},
    {"expansion normalisation and moments", criterion7},
    {"GC-4 density accuracy against Gamma", criterion8},
    {"Monte Carlo AR(1) cross-check", criterion9},
    {"shift/scale invariance and chi-squared check", criterion10},
    {"determinism of validate and simulate", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
  std::size_t first = 1;
  std::size_t last = kCriteria.size();
  if (argc == 2) {
    first = last = static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10));
    if (first < 1 || first > kCriteria.size()) {
      std::fprintf(stderr, "usage: %s [criterion 1..%zu]\n", argv[0], kCriteria.size());
      return 1;
    }
  }
  bool all = true;
  for (std::size_t i = first; i <= last; ++i) {
    Outcome o;
    try {
      o = kCriteria[i - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s criterion %2zu  %-46s %s\n", o.pass ? "PASS" : "FAIL", i, kCriteria[i - 1].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
