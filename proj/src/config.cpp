#include "svar/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "svar/error.hpp"

namespace svar {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

ProcessKind parse_kind(const std::string& s) {
  if (s == "iid") return ProcessKind::iid;
  if (s == "gaussian-ar1") return ProcessKind::gaussian_ar1;
  if (s == "gaussian-stationary") return ProcessKind::gaussian_stationary;
  if (s == "markov") return ProcessKind::markov;
  if (s == "constant") return ProcessKind::constant;
  throw ConfigError("unknown process kind '" + s + "'");
}

SeriesKind parse_series(const std::string& s) {
  if (s == "gram-charlier") return SeriesKind::gram_charlier;
  if (s == "edgeworth") return SeriesKind::edgeworth;
  throw ConfigError("unknown expansion kind '" + s + "' (gram-charlier | edgeworth)");
}

ProcessSpec parse_process(const json& p) {
  if (!p.is_object()) throw ConfigError("'process' must be an object");
  if (!p.contains("kind")) throw ConfigError("process block needs a 'kind'");
  ProcessSpec s;
  s.kind = parse_kind(get<std::string>(p, "kind", ""));
  switch (s.kind) {
    case ProcessKind::iid:
      reject_unknown(p, {"kind", "distribution", "sigma", "mean", "values", "probabilities", "raw_moments"},
                     "iid process");
      s.distribution = get<std::string>(p, "distribution", "normal");
      s.sigma = get<double>(p, "sigma", 1.0);
      s.mean = get<double>(p, "mean", 0.0);
      s.values = get<std::vector<double>>(p, "values", {});
      s.probabilities = get<std::vector<double>>(p, "probabilities", {});
      s.raw_moments = get<std::vector<double>>(p, "raw_moments", {});
      if (s.distribution != "normal" && s.distribution != "rademacher" &&
          s.distribution != "discrete" && s.distribution != "moments") {
        throw ConfigError("iid distribution must be normal | rademacher | discrete | moments");
      }
      break;
    case ProcessKind::gaussian_ar1:
      reject_unknown(p, {"kind", "phi", "innovation_sd"}, "gaussian-ar1 process");
      s.phi = get<double>(p, "phi", 0.0);
      s.innovation_sd = get<double>(p, "innovation_sd", 1.0);
      break;
    case ProcessKind::gaussian_stationary:
      reject_unknown(p, {"kind", "autocovariance"}, "gaussian-stationary process");
      s.autocovariance = get<std::vector<double>>(p, "autocovariance", {});
      if (s.autocovariance.empty()) throw ConfigError("gaussian-stationary needs 'autocovariance'");
      break;
    case ProcessKind::markov:
      reject_unknown(p, {"kind", "states", "transition", "initial"}, "markov process");
      s.states = get<std::vector<double>>(p, "states", {});
      s.transition = get<std::vector<std::vector<double>>>(p, "transition", {});
      if (p.contains("initial") && !(p["initial"].is_string() && p["initial"] == "stationary")) {
        s.initial = get<std::vector<double>>(p, "initial", {});
      }
      break;
    case ProcessKind::constant:
      reject_unknown(p, {"kind", "value"}, "constant process");
      s.value = get<double>(p, "value", 0.0);
      break;
  }
  return s;
}

json process_json(const ProcessSpec& s) {
  json p;
  p["kind"] = to_string(s.kind);
  switch (s.kind) {
    case ProcessKind::iid:
      p["distribution"] = s.distribution;
      if (s.distribution == "normal") {
        p["sigma"] = s.sigma;
        p["mean"] = s.mean;
      } else if (s.distribution == "discrete") {
        p["values"] = s.values;
        p["probabilities"] = s.probabilities;
      } else if (s.distribution == "moments") {
        p["raw_moments"] = s.raw_moments;
      }
      break;
    case ProcessKind::gaussian_ar1:
      p["phi"] = s.phi;
      p["innovation_sd"] = s.innovation_sd;
      break;
    case ProcessKind::gaussian_stationary:
      p["autocovariance"] = s.autocovariance;
      break;
    case ProcessKind::markov:
      p["states"] = s.states;
      p["transition"] = s.transition;
      if (s.initial.empty()) {
        p["initial"] = "stationary";
      } else {
        p["initial"] = s.initial;
      }
      break;
    case ProcessKind::constant:
      p["value"] = s.value;
      break;
  }
  return p;
}

std::pair<std::vector<double>, std::vector<double>> discrete_support(const ProcessSpec& s) {
  if (s.distribution == "rademacher") return {{-1.0, 1.0}, {0.5, 0.5}};
  return {s.values, s.probabilities};
}

}  // namespace

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::iid:
      return "iid";
    case ProcessKind::gaussian_ar1:
      return "gaussian-ar1";
    case ProcessKind::gaussian_stationary:
      return "gaussian-stationary";
    case ProcessKind::markov:
      return "markov";
    case ProcessKind::constant:
      return "constant";
  }
  return "unknown";
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(doc,
                 {"process", "n", "expansion_kind", "order", "grid_min", "grid_max", "grid_points",
                  "seed", "draws", "bins", "abs_tol", "rel_tol", "shift_tol", "mc_se", "mc_se_higher",
                  "chisq_tol", "format", "out", "engine", "shift", "scale", "covariance"},
                 "configuration");
  if (!doc.contains("process")) throw ConfigError("configuration needs a 'process' block");

  RunConfig c;
  c.process = parse_process(doc["process"]);
  const auto n = get<long long>(doc, "n", 10);
  if (n < 2) throw ConfigError("n must be >= 2");
  c.n = static_cast<std::size_t>(n);
  c.expansion_kind = parse_series(get<std::string>(doc, "expansion_kind", "gram-charlier"));
  if (doc.contains("order")) c.order = get<int>(doc, "order", 4);
  if (doc.contains("grid_min")) c.grid.min = get<double>(doc, "grid_min", 0.0);
  if (doc.contains("grid_max")) c.grid.max = get<double>(doc, "grid_max", 0.0);
  const auto points = get<long long>(doc, "grid_points", 201);
  if (points < 2) throw ConfigError("grid_points must be >= 2");
  c.grid.points = static_cast<std::size_t>(points);
  c.seed = get<std::uint64_t>(doc, "seed", c.seed);
  c.draws = get<std::size_t>(doc, "draws", c.draws);
  c.bins = get<std::size_t>(doc, "bins", c.bins);
  c.tol.abs = get<double>(doc, "abs_tol", c.tol.abs);
  c.tol.rel = get<double>(doc, "rel_tol", c.tol.rel);
  c.tol.shift = get<double>(doc, "shift_tol", c.tol.shift);
  c.tol.mc_se = get<double>(doc, "mc_se", c.tol.mc_se);
  c.tol.mc_se_higher = get<double>(doc, "mc_se_higher", c.tol.mc_se_higher);
  c.tol.chisq = get<double>(doc, "chisq_tol", c.tol.chisq);
  c.format = get<std::string>(doc, "format", c.format);
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  c.out = get<std::string>(doc, "out", c.out);
  c.engine = get<std::string>(doc, "engine", c.engine);
  if (c.engine != "moment" && c.engine != "cumulant" && c.engine != "both") {
    throw ConfigError("engine must be moment | cumulant | both");
  }
  c.shift = get<double>(doc, "shift", c.shift);
  c.scale = get<double>(doc, "scale", c.scale);
  if (doc.contains("covariance")) c.covariance = get<std::vector<std::vector<double>>>(doc, "covariance", {});
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("cannot parse configuration: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["process"] = process_json(c.process);
  j["n"] = c.n;
  j["expansion_kind"] = to_string(c.expansion_kind);
  j["order"] = c.order ? json(*c.order) : json(nullptr);
  j["grid_min"] = c.grid.min ? json(*c.grid.min) : json(nullptr);
  j["grid_max"] = c.grid.max ? json(*c.grid.max) : json(nullptr);
  j["grid_points"] = c.grid.points;
  j["seed"] = c.seed;
  j["draws"] = c.draws;
  j["bins"] = c.bins;
  j["abs_tol"] = c.tol.abs;
  j["rel_tol"] = c.tol.rel;
  j["shift_tol"] = c.tol.shift;
  j["mc_se"] = c.tol.mc_se;
  j["mc_se_higher"] = c.tol.mc_se_higher;
  j["chisq_tol"] = c.tol.chisq;
  j["format"] = c.format;
  j["engine"] = c.engine;
  j["shift"] = c.shift;
  j["scale"] = c.scale;
  j["covariance"] = c.covariance ? json(*c.covariance) : json(nullptr);
  return j;
}

std::string config_hash(const RunConfig& c) {
  // the output path does not change the artifact, so it is not part of the document
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProcessModel build_model(const ProcessSpec& s, std::size_t n) {
  switch (s.kind) {
    case ProcessKind::iid:
      if (s.distribution == "normal") return iid_normal(s.sigma, s.mean);
      if (s.distribution == "rademacher") return iid_rademacher();
      if (s.distribution == "discrete") return iid_discrete(s.values, s.probabilities);
      return Iid{s.raw_moments};
    case ProcessKind::gaussian_ar1:
      return gaussian_ar1(s.phi, s.innovation_sd);
    case ProcessKind::gaussian_stationary:
      return gaussian_from_autocovariance(s.autocovariance);
    case ProcessKind::markov: {
      const auto initial = s.initial.empty() ? stationary_distribution(s.transition) : s.initial;
      return markov_to_finite_joint(s.states, s.transition, initial, n);
    }
    case ProcessKind::constant:
      return constant_process(s.value, n);
  }
  throw ConfigError("unsupported process kind");
}

std::optional<FiniteJoint> finite_law(const ProcessSpec& s, std::size_t n) {
  if (s.kind == ProcessKind::markov || s.kind == ProcessKind::constant) {
    return std::get<FiniteJoint>(build_model(s, n));
  }
  if (s.kind == ProcessKind::iid && (s.distribution == "rademacher" || s.distribution == "discrete")) {
    const auto [values, probs] = discrete_support(s);
    const double atoms = std::pow(static_cast<double>(values.size()), static_cast<double>(n));
    if (atoms > static_cast<double>(kMaxFiniteAtoms)) return std::nullopt;
    return iid_finite_joint(values, probs, n);
  }
  return std::nullopt;
}

bool is_iid_normal(const ProcessSpec& s) {
  return (s.kind == ProcessKind::iid && s.distribution == "normal") ||
         (s.kind == ProcessKind::gaussian_ar1 && s.phi == 0.0);
}

}  // namespace svar
