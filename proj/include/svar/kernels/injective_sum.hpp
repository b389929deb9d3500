#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svar/process.hpp"

namespace svar::kernels {

/// Distinct orderings of an exponent multiset, each listed once.
[[nodiscard]] std::vector<std::vector<int>> distinct_arrangements(std::span<const int> exponents);

/// How the index space is walked.
enum class Walk {
  all_combinations,  ///< every k-subset of {0..n-1}
  anchored           ///< subsets containing 0, weighted by their n - max translates
};

/// Sum over ordered injective tuples (i_1..i_k) of E[prod X_{i_j}^{e_j}], divided by
/// the symmetry factor of the exponent multiset (i.e. one term per distinct
/// arrangement on each k-subset).
///
/// The work is partitioned by the second-smallest index for anchored walks and by
/// the smallest index otherwise; every partition is summed with a compensated
/// accumulator and the partials are folded in partition order. The serial and
/// OpenMP versions share that partitioning, so they agree bit for bit for any
/// thread count.
[[nodiscard]] double injective_sum_serial(const MomentEvaluator& eval,
                                          std::span<const int> exponents, Walk walk);
[[nodiscard]] double injective_sum_parallel(const MomentEvaluator& eval,
                                            std::span<const int> exponents, Walk walk);

}  // namespace svar::kernels
