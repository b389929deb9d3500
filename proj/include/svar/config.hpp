#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "svar/expansion.hpp"
#include "svar/process.hpp"

namespace svar {

inline constexpr const char* kToolName = "svar";
inline constexpr const char* kToolVersion = "0.1.0";

enum class ProcessKind { iid, gaussian_ar1, gaussian_stationary, markov, constant };

[[nodiscard]] const char* to_string(ProcessKind kind);

/// The nested "process" block of a run configuration.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::iid;

  // iid: distribution is "normal", "rademacher", "discrete" or "moments"
  std::string distribution = "normal";
  double sigma = 1.0;
  double mean = 0.0;
  std::vector<double> values;
  std::vector<double> probabilities;
  std::vector<double> raw_moments;

  // gaussian-ar1
  double phi = 0.0;
  double innovation_sd = 1.0;

  // gaussian-stationary
  std::vector<double> autocovariance;

  // markov; an empty `initial` means the stationary distribution
  std::vector<double> states;
  std::vector<std::vector<double>> transition;
  std::vector<double> initial;

  // constant
  double value = 0.0;
};

struct GridSpec {
  std::optional<double> min;
  std::optional<double> max;
  std::size_t points = 201;
};

/// Defaults follow the engine modules.
struct Tolerances {
  double abs = 1e-12;
  double rel = 1e-10;
  double shift = 1e-9;
  double mc_se = 4.0;         ///< k1, k2 Monte Carlo band, in standard errors
  double mc_se_higher = 6.0;  ///< k3, k4 band
  double chisq = 1e-12;
};

struct RunConfig {
  ProcessSpec process;
  std::size_t n = 10;
  SeriesKind expansion_kind = SeriesKind::gram_charlier;
  std::optional<int> order;
  GridSpec grid;
  std::uint64_t seed = 12345;
  std::size_t draws = 100'000;
  std::size_t bins = 50;
  Tolerances tol;
  std::string format = "json";
  std::string out;
  std::string engine = "both";
  double shift = 0.75;  ///< location shift used by `validate`
  double scale = 1.5;   ///< scale factor used by `validate`
  std::optional<std::vector<std::vector<double>>> covariance;  ///< chisq-check override
};

/// Parses a configuration document. Unknown keys are rejected (ConfigError).
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] RunConfig parse_config_text(const std::string& text);

/// Canonical document for a config (all keys, defaults filled in).
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

/// FNV-1a 64 of the canonical document, as 16 hex digits.
[[nodiscard]] std::string config_hash(const RunConfig& config);

[[nodiscard]] ProcessModel build_model(const ProcessSpec& spec, std::size_t n);

/// Finite-support law for the process when one exists and stays under the atom cap.
[[nodiscard]] std::optional<FiniteJoint> finite_law(const ProcessSpec& spec, std::size_t n);

/// True for an i.i.d. normal process, where s^2 has an exact scaled chi-squared law.
[[nodiscard]] bool is_iid_normal(const ProcessSpec& spec);

}  // namespace svar
