#include "svar/run.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "svar/cumulants.hpp"
#include "svar/error.hpp"
#include "svar/expansion.hpp"
#include "svar/oracles.hpp"
#include "svar/serialize.hpp"

namespace svar {
namespace {

using nlohmann::json;

json provenance(const RunConfig& c) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", config_hash(c)}};
}

std::string csv_header(const RunConfig& c) {
  return std::string("# tool=") + kToolName + " version=" + kToolVersion +
         " config_hash=" + config_hash(c) + "\n";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double iid_normal_sigma(const ProcessSpec& s) {
  return s.kind == ProcessKind::iid ? s.sigma : s.innovation_sd;
}

bool is_iid(const ProcessSpec& s) {
  return s.kind == ProcessKind::iid || (s.kind == ProcessKind::gaussian_ar1 && s.phi == 0.0);
}

bool is_gaussian(const ProcessSpec& s) {
  return s.kind == ProcessKind::gaussian_ar1 || s.kind == ProcessKind::gaussian_stationary;
}

// s^2 ignores a location shift; removing the mean first avoids cancellation in raw moments
ProcessModel centered(const ProcessModel& model, std::size_t n) {
  double mean = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const IndexPower factor{i, 1};
    mean += joint_moment(model, std::span<const IndexPower>(&factor, 1), n);
  }
  mean /= static_cast<double>(n);
  return mean == 0.0 ? model : shifted(model, -mean);
}

// cumulants -------------------------------------------------------------------------

RunResult run_cumulants(const RunConfig& c) {
  const ProcessModel model = centered(build_model(c.process, c.n), c.n);
  const int order = max_cumulant_order(c.n);
  const auto tables = build_tables(model, c.n, order);
  const CumulantSet moment = cumulants_moment_route(tables, c.n, order);
  const CumulantSet table = cumulants_cumulant_route(tables, c.n, order);

  std::vector<const CumulantSet*> engines;
  if (c.engine != "cumulant") engines.push_back(&moment);
  if (c.engine != "moment") engines.push_back(&table);

  RunResult r;
  if (c.format == "csv") {
    r.artifact = csv_header(c) + "engine,n,order,k1,k2,k3,k4,r2,r3,r3_alt,r4\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto* e : engines) {
      r.artifact += std::string(to_string(e->engine)) + "," + std::to_string(e->n) + "," +
                    std::to_string(e->order);
      for (int k = 0; k < 4; ++k) {
        r.artifact += "," + (k < e->order ? format_double(e->k[static_cast<std::size_t>(k)]) : std::string());
      }
      r.artifact += "," + opt(e->residuals.r2) + "," + opt(e->residuals.r3) + "," +
                    opt(e->residuals.r3_alt) + "," + opt(e->residuals.r4) + "\n";
    }
  } else {
    json j;
    j["provenance"] = provenance(c);
    j["process"] = to_string(c.process.kind);
    j["n"] = c.n;
    for (const auto* e : engines) {
      j[e->engine == Engine::moment_route ? "moment_route" : "cumulant_route"] = to_json(*e);
    }
    if (order >= 3) {
      j["diagnostics"] = {{"moment3", moment3(tables, c.n)},
                          {"moment3_regrouped_table", moment3_regrouped(tables, c.n)}};
    }
    r.artifact = dump(j);
  }
  for (const auto* e : engines) {
    std::string line = std::string(to_string(e->engine)) + ":";
    for (int k = 0; k < e->order; ++k) {
      line += " k" + std::to_string(k + 1) + "=" + format_double(e->k[static_cast<std::size_t>(k)]);
    }
    r.report.push_back(line);
  }
  return r;
}

// moments ----------------------------------------------------------------------------

RunResult run_moments(const RunConfig& c) {
  const ProcessModel model = build_model(c.process, c.n);
  const int groups = std::min<int>(4, static_cast<int>(c.n / 2));
  const auto tables = build_tables(model, c.n, groups);
  RunResult r;
  if (c.format == "csv") {
    r.artifact = csv_header(c) + "group,pattern,value\n";
    for (const auto& t : tables) {
      for (const auto& [p, v] : t.entries) {
        r.artifact += std::to_string(t.group) + "," + p.to_string() + "," + format_double(v) + "\n";
      }
    }
  } else {
    json j;
    j["provenance"] = provenance(c);
    j["n"] = c.n;
    j["tables"] = json::array();
    for (const auto& t : tables) j["tables"].push_back(to_json(t));
    r.artifact = dump(j);
  }
  r.report.push_back("groups 1.." + std::to_string(groups) + " at n = " + std::to_string(c.n));
  return r;
}

// density / cdf --------------------------------------------------------------------

struct Column {
  std::string name;
  std::optional<ExpansionSpec> spec;  // empty: reference column
};

int required_order(SeriesKind kind, int order) {
  if (kind == SeriesKind::edgeworth) return order == 1 ? 3 : 4;
  return order == 0 ? 2 : (order == 3 ? 3 : 4);
}

std::string column_name(SeriesKind kind, int order) {
  if (kind == SeriesKind::edgeworth) return "edgeworth" + std::to_string(order);
  return order == 0 ? "normal" : "gc" + std::to_string(order);
}

RunResult run_grid(const RunConfig& c, bool cumulative) {
  const ProcessModel model = centered(build_model(c.process, c.n), c.n);
  const CumulantSet cum = cumulants_moment_route(model, c.n);
  RunResult r;
  if (cum.k2() <= c.tol.abs) {
    const std::string warning = "s^2 is a point mass at " + format_double(cum.k1()) +
                                " (kappa_2 = " + format_double(cum.k2()) +
                                "); no density expansion exists";
    r.warnings.push_back(warning);
    if (c.format == "csv") {
      r.artifact = csv_header(c) + "# warning: " + warning + "\n";
    } else {
      r.artifact = dump({{"provenance", provenance(c)}, {"warning", warning}, {"point_mass", cum.k1()}});
    }
    return r;
  }

  std::vector<std::pair<SeriesKind, int>> wanted;
  if (c.order) {
    wanted = {{SeriesKind::gram_charlier, 0}, {c.expansion_kind, *c.order}};
    if (*c.order == 0 && c.expansion_kind == SeriesKind::gram_charlier) wanted.pop_back();
    for (const auto& [kind, order] : wanted) {
      ExpansionSpec probe;
      probe.kind = kind;
      probe.order = order;
      probe.validate();
      if (required_order(kind, order) > cum.order) {
        throw InsufficientSampleSize(column_name(kind, order) + " needs kappa_" +
                                     std::to_string(required_order(kind, order)) +
                                     ", which requires a larger n than " + std::to_string(c.n));
      }
    }
  } else {
    for (const auto& w : std::vector<std::pair<SeriesKind, int>>{{SeriesKind::gram_charlier, 0},
                                                                 {SeriesKind::gram_charlier, 3},
                                                                 {SeriesKind::gram_charlier, 4},
                                                                 {SeriesKind::edgeworth, 1},
                                                                 {SeriesKind::edgeworth, 2}}) {
      if (required_order(w.first, w.second) <= cum.order) wanted.push_back(w);
    }
  }

  std::vector<Column> columns;
  for (const auto& [kind, order] : wanted) {
    columns.push_back({column_name(kind, order), ExpansionSpec::from(cum, kind, order)});
  }
  const bool reference = is_iid_normal(c.process);
  if (reference) columns.push_back({"reference", std::nullopt});

  const double sigma = std::sqrt(cum.k2());
  const double lo = c.grid.min.value_or(std::max(0.0, cum.k1() - 6.0 * sigma));
  const double hi = c.grid.max.value_or(cum.k1() + 6.0 * sigma);
  if (!(hi > lo)) throw ConfigError("grid_max must exceed grid_min");

  std::vector<double> xs(c.grid.points);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
  }
  std::vector<std::vector<double>> values(columns.size(), std::vector<double>(xs.size()));
  for (std::size_t col = 0; col < columns.size(); ++col) {
    const auto& column = columns[col];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      if (column.spec) {
        values[col][i] = cumulative ? series_cdf(*column.spec, x) : series_density(*column.spec, x);
      } else if (x < 0.0) {
        values[col][i] = 0.0;
      } else {
        const auto g = gamma_reference(c.n, iid_normal_sigma(c.process), x);
        values[col][i] = cumulative ? g.cdf : g.density;
      }
    }
  }

  json negativity_json = json::object();
  for (const auto& column : columns) {
    if (!column.spec) continue;
    const auto report = negativity(*column.spec);
    json intervals = json::array();
    for (const auto& [a, b] : report.intervals) intervals.push_back({a, b});
    negativity_json[column.name] = {{"intervals", intervals}, {"negative_mass", report.negative_mass}};
    if (!report.intervals.empty()) {
      r.warnings.push_back(column.name + " density is negative on " +
                           std::to_string(report.intervals.size()) + " interval(s), mass " +
                           format_double(report.negative_mass));
    }
  }

  if (c.format == "csv") {
    std::string out = csv_header(c);
    for (const auto& w : r.warnings) out += "# warning: " + w + "\n";
    out += "x";
    for (const auto& column : columns) out += "," + column.name;
    out += "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out += format_double(xs[i]);
      for (std::size_t col = 0; col < columns.size(); ++col) out += "," + format_double(values[col][i]);
      out += "\n";
    }
    r.artifact = std::move(out);
  } else {
    json j;
    j["provenance"] = provenance(c);
    j["quantity"] = cumulative ? "cdf" : "density";
    j["cumulants"] = to_json(cum);
    json order = json::array({"x"});
    json cols;
    cols["x"] = xs;
    for (std::size_t col = 0; col < columns.size(); ++col) {
      order.push_back(columns[col].name);
      cols[columns[col].name] = values[col];
    }
    j["column_order"] = order;
    j["columns"] = cols;
    j["negativity"] = negativity_json;
    r.artifact = dump(j);
  }
  r.report.push_back(std::to_string(xs.size()) + " grid points, " + std::to_string(columns.size()) +
                     " columns");
  return r;
}

// validate -----------------------------------------------------------------------------

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct Validator {
  const RunConfig& c;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void close(const std::string& name, double got, double want, double bound) {
    const double err = std::abs(got - want);
    checks.push_back({name, err, bound, err <= bound});
  }
  double rel_bound(double reference) const { return std::max(c.tol.abs, c.tol.rel * std::abs(reference)); }
};

RunResult run_validate(const RunConfig& c) {
  const ProcessModel model = centered(build_model(c.process, c.n), c.n);
  const int order = max_cumulant_order(c.n);
  const auto tables = build_tables(model, c.n, order);
  const CumulantSet mr = cumulants_moment_route(tables, c.n, order);
  Validator v{c, {}, {}};

  // oracle equivalence
  std::optional<CumulantSet> oracle;
  std::string oracle_name;
  if (auto finite = finite_law(c.process, c.n)) {
    oracle = exact_cumulants(exact_law(*finite));
    oracle_name = "exact";
  } else if (is_iid_normal(c.process)) {
    const double s2 = std::pow(iid_normal_sigma(c.process), 2);
    const double dof = static_cast<double>(c.n - 1);
    CumulantSet cs;
    cs.order = 4;
    double factor = 1.0;
    for (int r = 1; r <= 4; ++r) {
      if (r > 1) factor *= 2.0 * (r - 1);
      cs.k[static_cast<std::size_t>(r) - 1] = std::pow(s2, r) * factor / std::pow(dof, r - 1);
    }
    oracle = cs;
    oracle_name = "chisq";
  } else if (is_gaussian(c.process)) {
    oracle = gaussian_quadratic_form_cumulants(covariance_matrix(model, c.n));
    oracle_name = "gaussian_quadratic_form";
  } else {
    v.notes.push_back("no exact oracle for this process; oracle checks skipped");
  }
  if (oracle) {
    for (int r = 1; r <= order; ++r) {
      const auto idx = static_cast<std::size_t>(r) - 1;
      v.close("oracle." + oracle_name + ".k" + std::to_string(r), mr.k[idx], oracle->k[idx],
              v.rel_bound(oracle->k[idx]));
    }
  }

  if (order >= 2) {
    v.close("table_route.k2", kappa2(tables, c.n), mr.k2(), v.rel_bound(mr.k2()));
  }
  if (is_iid(c.process) && order >= 2) {
    v.close("r2_vanishes_iid", remainder_r2(tables), 0.0, c.tol.abs);
  }

  {
    const CumulantSet shifted_set = cumulants_moment_route(shifted(model, c.shift), c.n, order);
    for (int r = 1; r <= order; ++r) {
      const auto idx = static_cast<std::size_t>(r) - 1;
      v.close("shift_invariance.k" + std::to_string(r), shifted_set.k[idx], mr.k[idx],
              c.tol.shift * std::max(1.0, std::abs(mr.k[idx])));
    }
  }
  {
    const CumulantSet scaled_set = cumulants_moment_route(scaled(model, c.scale), c.n, order);
    for (int r = 1; r <= order; ++r) {
      const auto idx = static_cast<std::size_t>(r) - 1;
      const double want = std::pow(c.scale, 2 * r) * mr.k[idx];
      v.close("scale_equivariance.k" + std::to_string(r), scaled_set.k[idx], want, v.rel_bound(want));
    }
  }

  RunResult result;
  bool all = true;
  json checks = json::array();
  for (const auto& ch : v.checks) {
    all = all && ch.pass;
    checks.push_back({{"name", ch.name}, {"error", ch.measured}, {"tolerance", ch.bound}, {"pass", ch.pass}});
    result.report.push_back(std::string(ch.pass ? "PASS " : "FAIL ") + ch.name +
                            "  error=" + format_double(ch.measured) + "  tol=" + format_double(ch.bound));
  }
  for (const auto& note : v.notes) result.report.push_back("NOTE " + note);

  json diagnostics;
  diagnostics["residuals"] = to_json(mr)["residuals"];
  if (order >= 3) {
    diagnostics["moment3_regrouped_minus_closed_form"] = moment3_regrouped(tables, c.n) - moment3(tables, c.n);
  }
  if (c.format == "csv") {
    std::string out = csv_header(c) + "check,error,tolerance,pass\n";
    for (const auto& ch : v.checks) {
      out += ch.name + "," + format_double(ch.measured) + "," + format_double(ch.bound) + "," +
             (ch.pass ? "true" : "false") + "\n";
    }
    result.artifact = std::move(out);
  } else {
    json j;
    j["provenance"] = provenance(c);
    j["process"] = to_string(c.process.kind);
    j["n"] = c.n;
    j["moment_route"] = to_json(mr);
    if (oracle) j["oracle"] = {{"name", oracle_name}, {"k", oracle->k}};
    j["checks"] = checks;
    j["notes"] = v.notes;
    j["diagnostics"] = diagnostics;
    j["passed"] = all;
    result.artifact = dump(j);
  }
  result.exit_code = all ? kExitOk : kExitValidationFailed;
  return result;
}

// simulate -------------------------------------------------------------------------------

RunResult run_simulate(const RunConfig& c) {
  Ar1Spec spec;
  spec.n = c.n;
  if (c.process.kind == ProcessKind::gaussian_ar1) {
    spec.phi = c.process.phi;
    spec.innovation_sd = c.process.innovation_sd;
  } else if (c.process.kind == ProcessKind::iid && c.process.distribution == "normal") {
    spec.phi = 0.0;
    spec.innovation_sd = c.process.sigma;
  } else {
    throw ConfigError("simulate supports gaussian-ar1 and iid normal processes");
  }
  const MCSummary summary = simulate_ar1(spec, c.draws, c.seed, c.bins);

  const ProcessModel model = gaussian_ar1(spec.phi, spec.innovation_sd);
  const CumulantSet exact = gaussian_quadratic_form_cumulants(covariance_matrix(model, c.n));
  std::array<double, 4> z{};
  for (std::size_t r = 0; r < 4; ++r) z[r] = (summary.k[r] - exact.k[r]) / summary.se[r];

  RunResult r;
  if (c.format == "csv") {
    r.artifact = csv_header(c) + histogram_csv(summary.histogram);
  } else {
    json j;
    j["provenance"] = provenance(c);
    j["summary"] = to_json(summary);
    j["reference"] = to_json(exact);
    j["z_scores"] = z;
    r.artifact = dump(j);
  }
  for (std::size_t k = 0; k < 4; ++k) {
    r.report.push_back("k" + std::to_string(k + 1) + " = " + format_double(summary.k[k]) + " +/- " +
                       format_double(summary.se[k]) + " (exact " + format_double(exact.k[k]) + ", z = " +
                       format_double(z[k]) + ")");
  }
  return r;
}

// chisq-check --------------------------------------------------------------------------

RunResult run_chisq(const RunConfig& c) {
  const auto cov = c.covariance ? *c.covariance : covariance_matrix(build_model(c.process, c.n), c.n);
  const double deviation = chisq_exactness_deviation(cov);
  const bool exact = deviation <= c.tol.chisq;
  RunResult r;
  if (c.format == "csv") {
    r.artifact = csv_header(c) + "chi_squared,max_deviation,tolerance\n" + (exact ? "true" : "false") +
                 "," + format_double(deviation) + "," + format_double(c.tol.chisq) + "\n";
  } else {
    r.artifact = dump({{"provenance", provenance(c)},
                       {"n", cov.size()},
                       {"chi_squared", exact},
                       {"max_deviation", deviation},
                       {"tolerance", c.tol.chisq}});
  }
  r.report.push_back(std::string("chi-squared: ") + (exact ? "yes" : "no") +
                     " (max |B Sigma B - B| = " + format_double(deviation) + ")");
  return r;
}

}  // namespace

Subcommand parse_subcommand(std::string_view name) {
  if (name == "cumulants") return Subcommand::cumulants;
  if (name == "moments") return Subcommand::moments;
  if (name == "density") return Subcommand::density;
  if (name == "cdf") return Subcommand::cdf;
  if (name == "validate") return Subcommand::validate;
  if (name == "simulate") return Subcommand::simulate;
  if (name == "chisq-check") return Subcommand::chisq_check;
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

const char* to_string(Subcommand command) {
  switch (command) {
    case Subcommand::cumulants:
      return "cumulants";
    case Subcommand::moments:
      return "moments";
    case Subcommand::density:
      return "density";
    case Subcommand::cdf:
      return "cdf";
    case Subcommand::validate:
      return "validate";
    case Subcommand::simulate:
      return "simulate";
    case Subcommand::chisq_check:
      return "chisq-check";
  }
  return "unknown";
}

RunResult run(Subcommand command, const RunConfig& config) {
  switch (command) {
    case Subcommand::cumulants:
      return run_cumulants(config);
    case Subcommand::moments:
      return run_moments(config);
    case Subcommand::density:
      return run_grid(config, false);
    case Subcommand::cdf:
      return run_grid(config, true);
    case Subcommand::validate:
      return run_validate(config);
    case Subcommand::simulate:
      return run_simulate(config);
    case Subcommand::chisq_check:
      return run_chisq(config);
  }
  throw ConfigError("unsupported subcommand");
}

}  // namespace svar
