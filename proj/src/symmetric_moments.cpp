#include "svar/symmetric_moments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "svar/error.hpp"
#include "svar/kernels/injective_sum.hpp"

namespace svar {
namespace {

void partitions(int remaining, int max_part, std::vector<int>& prefix,
                std::vector<ExponentPattern>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    partitions(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

ExponentPattern::ExponentPattern(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw DomainError("pattern: empty exponent list");
  for (int e : exponents_) {
    if (e < 1) throw DomainError("pattern: exponents must be positive");
  }
  std::sort(exponents_.begin(), exponents_.end(), std::greater<>());
}

ExponentPattern ExponentPattern::parse(std::string_view text) {
  std::vector<int> exps;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t dot = std::min(text.find('.', start), text.size());
    const std::string_view piece = text.substr(start, dot - start);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size()) {
      throw DomainError("pattern: cannot parse '" + std::string(text) + "'");
    }
    exps.push_back(value);
    start = dot + 1;
  }
  return ExponentPattern(std::move(exps));
}

int ExponentPattern::order() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

std::string ExponentPattern::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(exponents_[i]);
  }
  return s;
}

double ExponentPattern::symmetry_factor() const {
  double f = 1.0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= exponents_.size(); ++i) {
    if (i < exponents_.size() && exponents_[i] == exponents_[i - 1]) {
      ++run;
      f *= static_cast<double>(run);
    } else {
      run = 1;
    }
  }
  return f;
}

std::vector<ExponentPattern> group_patterns(int group) {
  if (group < 1 || group > 4) throw DomainError("group must be in 1..4");
  std::vector<ExponentPattern> out;
  std::vector<int> prefix;
  partitions(2 * group, 2 * group, prefix, out);
  return out;
}

double SymmetricMomentTable::at(const ExponentPattern& pattern) const {
  const auto it = entries.find(pattern);
  if (it == entries.end()) {
    throw DomainError("pattern " + pattern.to_string() + " not in group-" + std::to_string(group) +
                      " table");
  }
  return it->second;
}

double SymmetricMomentTable::at(std::string_view pattern) const {
  return at(ExponentPattern::parse(pattern));
}

double falling_factorial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

double symmetric_moment(const MomentEvaluator& eval, const ExponentPattern& pattern,
                        MomentOptions options) {
  const std::size_t n = eval.n();
  const std::size_t k = pattern.arity();
  if (pattern.order() > kMaxMomentOrder) {
    throw DomainError("pattern " + pattern.to_string() + " has order above 8");
  }
  if (n < k) {
    throw InsufficientSampleSize("insufficient sample size: pattern " + pattern.to_string() +
                                 " needs n >= " + std::to_string(k) + ", got n = " +
                                 std::to_string(n));
  }
  const auto exps = pattern.exponents();

  if (options.path == MomentPath::automatic && eval.kind() == MomentEvaluator::Kind::iid) {
    std::vector<std::size_t> positions(k);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    return eval(positions, exps);
  }

  kernels::Walk walk = kernels::Walk::all_combinations;
  if (options.path == MomentPath::automatic && eval.kind() == MomentEvaluator::Kind::gaussian) {
    walk = kernels::Walk::anchored;
  } else if (k >= 6 && n > kNaiveEnumerationMaxN) {
    throw DomainError("naive enumeration refused: arity " + std::to_string(k) + " with n = " +
                      std::to_string(n) + " > 64 and no fast path for this model");
  }

  const double sum = options.execution == Execution::parallel
                         ? kernels::injective_sum_parallel(eval, exps, walk)
                         : kernels::injective_sum_serial(eval, exps, walk);
  return sum * (pattern.symmetry_factor() / falling_factorial(n, k));
}

double symmetric_moment(const ProcessModel& model, const ExponentPattern& pattern, std::size_t n,
                        MomentOptions options) {
  if (n < pattern.arity()) {
    throw InsufficientSampleSize("insufficient sample size: pattern " + pattern.to_string() +
                                 " needs n >= " + std::to_string(pattern.arity()) +
                                 ", got n = " + std::to_string(n));
  }
  const MomentEvaluator eval(model, n);
  return symmetric_moment(eval, pattern, options);
}

std::vector<SymmetricMomentTable> build_tables(const ProcessModel& model, std::size_t n,
                                               int max_group, MomentOptions options) {
  if (max_group < 1 || max_group > 4) throw DomainError("max_group must be in 1..4");
  if (n < static_cast<std::size_t>(2 * max_group)) {
    throw InsufficientSampleSize("insufficient sample size: group " + std::to_string(max_group) +
                                 " tables need n >= " + std::to_string(2 * max_group) +
                                 ", got n = " + std::to_string(n));
  }
  const MomentEvaluator eval(model, n);
  std::vector<SymmetricMomentTable> tables;
  for (int g = 1; g <= max_group; ++g) {
    SymmetricMomentTable t;
    t.n = n;
    t.group = g;
    for (const auto& p : group_patterns(g)) {
      const double v = symmetric_moment(eval, p, options);
      if (!std::isfinite(v)) throw DomainError("non-finite estimator for pattern " + p.to_string());
      t.entries.emplace(p, v);
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

const SymmetricMomentTable& table_for(std::span<const SymmetricMomentTable> tables, int group) {
  for (const auto& t : tables) {
    if (t.group == group) return t;
  }
  throw DomainError("group-" + std::to_string(group) + " symmetric moment table missing");
}

}  // namespace svar
