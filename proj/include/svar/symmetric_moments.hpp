#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svar/process.hpp"

namespace svar {

/// Multiset of positive exponents, stored sorted descending. {3,2,1,1} names
/// the symmetric estimator built from E[X_i^3 X_j^2 X_k X_l] over distinct i,j,k,l.
class ExponentPattern {
 public:
  ExponentPattern() = default;
  explicit ExponentPattern(std::vector<int> exponents);

  /// Parses the dotted form used in JSON output, e.g. "3.2.1.1".
  static ExponentPattern parse(std::string_view text);

  [[nodiscard]] std::span<const int> exponents() const { return exponents_; }
  [[nodiscard]] int order() const;
  [[nodiscard]] std::size_t arity() const { return exponents_.size(); }
  [[nodiscard]] std::string to_string() const;

  /// Number of ordered tuples that map onto one distinct exponent arrangement:
  /// the product of factorials of the multiplicities.
  [[nodiscard]] double symmetry_factor() const;

  auto operator<=>(const ExponentPattern&) const = default;

 private:
  std::vector<int> exponents_;
};

/// All patterns of estimator group k (the integer partitions of 2k), in the
/// canonical order: descending lexicographic on the sorted exponents.
[[nodiscard]] std::vector<ExponentPattern> group_patterns(int group);

struct SymmetricMomentTable {
  std::size_t n = 0;
  int group = 0;
  std::map<ExponentPattern, double> entries;

  /// Throws DomainError if the pattern is not part of this table.
  [[nodiscard]] double at(const ExponentPattern& pattern) const;
  [[nodiscard]] double at(std::string_view pattern) const;
};

enum class Execution { serial, parallel };

enum class MomentPath {
  automatic,   ///< IID product or stationary translation fast path when available
  enumeration  ///< always walk every index combination
};

struct MomentOptions {
  Execution execution = Execution::parallel;
  MomentPath path = MomentPath::automatic;
};

/// Naive enumeration is refused above this n for patterns of arity >= 6.
inline constexpr std::size_t kNaiveEnumerationMaxN = 64;

/// Falling factorial n (n-1) ... (n-k+1).
[[nodiscard]] double falling_factorial(std::size_t n, std::size_t k);

/// Average of E[prod X^e] over all injective index assignments of the pattern.
/// Throws InsufficientSampleSize when n < arity.
[[nodiscard]] double symmetric_moment(const ProcessModel& model, const ExponentPattern& pattern,
                                      std::size_t n, MomentOptions options = {});

/// Same, against an already prepared evaluator (avoids re-validating the model).
[[nodiscard]] double symmetric_moment(const MomentEvaluator& eval, const ExponentPattern& pattern,
                                      MomentOptions options = {});

/// Tables for groups 1..max_group, index g-1 holding group g. Requires n >= 2 * max_group.
[[nodiscard]] std::vector<SymmetricMomentTable> build_tables(const ProcessModel& model,
                                                             std::size_t n, int max_group,
                                                             MomentOptions options = {});

/// Looks up the table for a group; throws DomainError when absent.
[[nodiscard]] const SymmetricMomentTable& table_for(std::span<const SymmetricMomentTable> tables,
                                                    int group);

}  // namespace svar
