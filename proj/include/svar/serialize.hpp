#pragma once

#include <json.hpp>
#include <string>

#include "svar/cumulants.hpp"
#include "svar/oracles.hpp"
#include "svar/symmetric_moments.hpp"

namespace svar {

/// {n, engine, order, k1..k4, residuals}; cumulants above `order` are null.
[[nodiscard]] nlohmann::json to_json(const CumulantSet& cumulants);
/// {n, group, entries: {"3.2.1": value, ...}}
[[nodiscard]] nlohmann::json to_json(const SymmetricMomentTable& table);
[[nodiscard]] nlohmann::json to_json(const MCSummary& summary);
[[nodiscard]] nlohmann::json to_json(const ExactLaw& law);

/// Histogram as CSV rows "edge,mass" (left edges; the final row carries the right edge).
[[nodiscard]] std::string histogram_csv(const Histogram& histogram);

/// Shortest round-trip decimal form of a double.
[[nodiscard]] std::string format_double(double value);

}  // namespace svar
