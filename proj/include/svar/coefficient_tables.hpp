#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "svar/symmetric_moments.hpp"

namespace svar {

/// integer coefficient x symmetric estimator, e.g. {-40, "1.1.1.1.1.1"}
struct PatternTerm {
  long coefficient;
  std::string_view pattern;
};

/// Numerator A_{i,j} of a term A_{i,j} / ((n-1)^i n^j).
struct CoefficientEntry {
  int i;
  int j;
  std::vector<PatternTerm> terms;
};

struct CoefficientTable {
  int level;  ///< estimator group the patterns belong to
  std::vector<CoefficientEntry> entries;

  [[nodiscard]] const CoefficientEntry& entry(int i, int j) const;
};

/// kappa_2 numerators A^2_{1,0}, A^2_{0,1}, A^2_{1,1}.
[[nodiscard]] const CoefficientTable& kappa2_table();
/// kappa_3 numerators A^3_{i,j}.
[[nodiscard]] const CoefficientTable& kappa3_table();
/// kappa_4 numerators A^4_{i,j}.
[[nodiscard]] const CoefficientTable& kappa4_table();
/// Regrouped E[s^6] numerators M^3_{i,j}. Entries (2,0) and (1,1) disagree with
/// exact enumeration, so moment3 does not use this table.
[[nodiscard]] const CoefficientTable& sixth_moment_regrouped_table();

/// Sum of coefficient x estimator over one entry.
[[nodiscard]] double evaluate(const CoefficientEntry& entry, const SymmetricMomentTable& table);

/// Sum over all entries of A_{i,j} / ((n-1)^i n^j).
[[nodiscard]] double evaluate(const CoefficientTable& table, const SymmetricMomentTable& moments,
                              std::size_t n);

/// Rational-in-n coefficient of one symmetric estimator in a closed-form moment.
struct RationalTerm {
  std::string_view pattern;
  double (*coefficient)(double n);
};

/// E[s^4] in terms of group-2 estimators.
[[nodiscard]] std::span<const RationalTerm> second_moment_terms();
/// E[s^6] in terms of group-3 estimators.
[[nodiscard]] std::span<const RationalTerm> sixth_moment_terms();
/// E[s^8] in terms of group-4 estimators.
[[nodiscard]] std::span<const RationalTerm> eighth_moment_terms();

[[nodiscard]] double evaluate(std::span<const RationalTerm> terms, const SymmetricMomentTable& table,
                              std::size_t n);

}  // namespace svar
