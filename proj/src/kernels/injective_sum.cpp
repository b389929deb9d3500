#include "svar/kernels/injective_sum.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "svar/compensated_sum.hpp"

namespace svar::kernels {
namespace {

struct Plan {
  const MomentEvaluator& eval;
  std::vector<std::vector<int>> arrangements;
  std::size_t n;
  std::size_t k;
  Walk walk;

  [[nodiscard]] std::size_t partitions() const {
    if (k == 0 || n < k) return 0;
    if (walk == Walk::anchored) return k == 1 ? 1 : n - k + 1;
    return n - k + 1;
  }

  // Adds every term whose partitioning index equals p to `acc`.
  void sum_partition(std::size_t p, CompensatedSum& acc) const {
    std::array<std::size_t, kMaxMomentOrder> pos{};
    std::size_t fixed = 0;
    if (walk == Walk::anchored) {
      pos[0] = 0;
      fixed = 1;
      if (k >= 2) pos[fixed++] = p + 1;
    } else {
      pos[fixed++] = p;
    }
    const std::size_t free = k - fixed;
    const std::size_t lo = pos[fixed - 1] + 1;
    if (lo + free > n) return;
    for (std::size_t i = 0; i < free; ++i) pos[fixed + i] = lo + i;

    const std::span<const std::size_t> positions(pos.data(), k);
    while (true) {
      const double weight =
          walk == Walk::anchored ? static_cast<double>(n - pos[k - 1]) : 1.0;
      for (const auto& arr : arrangements) acc.add(weight * eval(positions, arr));

      // next combination of the free tail
      std::size_t i = free;
      while (i > 0 && pos[fixed + i - 1] == n - free + i - 1) --i;
      if (i == 0) break;
      ++pos[fixed + i - 1];
      for (std::size_t j = i; j < free; ++j) pos[fixed + j] = pos[fixed + j - 1] + 1;
    }
  }
};

Plan make_plan(const MomentEvaluator& eval, std::span<const int> exponents, Walk walk) {
  return Plan{eval, distinct_arrangements(exponents), eval.n(), exponents.size(), walk};
}

double fold(std::span<const CompensatedSum> partials) {
  CompensatedSum total;
  for (const auto& p : partials) total.merge(p);
  return total.value();
}

}  // namespace

std::vector<std::vector<int>> distinct_arrangements(std::span<const int> exponents) {
  std::vector<int> e(exponents.begin(), exponents.end());
  std::sort(e.begin(), e.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(e);
  } while (std::next_permutation(e.begin(), e.end()));
  return out;
}

double injective_sum_serial(const MomentEvaluator& eval, std::span<const int> exponents, Walk walk) {
  const Plan plan = make_plan(eval, exponents, walk);
  std::vector<CompensatedSum> partials(plan.partitions());
  for (std::size_t p = 0; p < partials.size(); ++p) plan.sum_partition(p, partials[p]);
  return fold(partials);
}

double injective_sum_parallel(const MomentEvaluator& eval, std::span<const int> exponents,
                              Walk walk) {
  const Plan plan = make_plan(eval, exponents, walk);
  std::vector<CompensatedSum> partials(plan.partitions());
  const auto count = static_cast<long long>(partials.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long p = 0; p < count; ++p) {
    plan.sum_partition(static_cast<std::size_t>(p), partials[static_cast<std::size_t>(p)]);
  }
  return fold(partials);
}

}  // namespace svar::kernels
