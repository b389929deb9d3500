#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "svar/config.hpp"

namespace svar {

enum class Subcommand { cumulants, moments, density, cdf, validate, simulate, chisq_check };

/// Throws ConfigError for an unknown name.
[[nodiscard]] Subcommand parse_subcommand(std::string_view name);
[[nodiscard]] const char* to_string(Subcommand command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidationFailed = 2;

struct RunResult {
  int exit_code = kExitOk;
  std::string artifact;               ///< file contents (JSON or CSV)
  std::vector<std::string> report;    ///< human-readable lines (validate: one per check)
  std::vector<std::string> warnings;
};

/// Runs one subcommand. Library errors propagate as exceptions; callers map them
/// to kExitUsage.
[[nodiscard]] RunResult run(Subcommand command, const RunConfig& config);

}  // namespace svar
