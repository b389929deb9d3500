#include "svar/serialize.hpp"

#include <charconv>
#include <cmath>

namespace svar {
namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

nlohmann::json to_json(const CumulantSet& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["engine"] = to_string(c.engine);
  j["order"] = c.order;
  for (int r = 1; r <= 4; ++r) {
    const std::string key = "k" + std::to_string(r);
    j[key] = r <= c.order ? nlohmann::json(c.k[static_cast<std::size_t>(r) - 1]) : nlohmann::json(nullptr);
  }
  j["residuals"] = {{"r2", optional_number(c.residuals.r2)},
                    {"r3", optional_number(c.residuals.r3)},
                    {"r3_alt", optional_number(c.residuals.r3_alt)},
                    {"r4", optional_number(c.residuals.r4)}};
  return j;
}

nlohmann::json to_json(const SymmetricMomentTable& t) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [pattern, value] : t.entries) entries[pattern.to_string()] = value;
  return {{"n", t.n}, {"group", t.group}, {"entries", entries}};
}

nlohmann::json to_json(const MCSummary& s) {
  nlohmann::json j;
  j["draws"] = s.draws;
  j["n"] = s.n;
  j["seed"] = s.seed;
  j["k_statistics"] = {{"k1", s.k[0]}, {"k2", s.k[1]}, {"k3", s.k[2]}, {"k4", s.k[3]}};
  j["standard_errors"] = {{"k1", s.se[0]}, {"k2", s.se[1]}, {"k3", s.se[2]}, {"k4", s.se[3]}};
  j["histogram"] = {{"edges", s.histogram.edges}, {"masses", s.histogram.masses}};
  return j;
}

nlohmann::json to_json(const ExactLaw& law) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& [v, p] : law.atoms) atoms.push_back({{"value", v}, {"probability", p}});
  return {{"n", law.n}, {"atoms", atoms}};
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "edge,mass\n";
  for (std::size_t b = 0; b < h.masses.size(); ++b) {
    out += format_double(h.edges[b]) + "," + format_double(h.masses[b]) + "\n";
  }
  if (!h.edges.empty()) out += format_double(h.edges.back()) + ",0\n";
  return out;
}

}  // namespace svar
