#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "svar/process.hpp"
#include "svar/symmetric_moments.hpp"

namespace svar::test {

inline const std::vector<std::vector<double>> kChain = {{0.9, 0.1}, {0.2, 0.8}};

inline FiniteJoint markov_chain(std::size_t n) {
  const std::vector<double> states{0.0, 1.0};
  const std::vector<double> initial{2.0 / 3.0, 1.0 / 3.0};
  return markov_to_finite_joint(states, kChain, initial, n);
}

inline FiniteJoint rademacher_joint(std::size_t n) {
  const std::vector<double> values{-1.0, 1.0};
  const std::vector<double> probs{0.5, 0.5};
  return iid_finite_joint(values, probs, n);
}

inline const std::vector<double> kThreePointValues{-1.0, 0.0, 2.0};
inline const std::vector<double> kThreePointProbs{0.5, 0.3, 0.2};

inline FiniteJoint three_point_joint(std::size_t n) {
  return iid_finite_joint(kThreePointValues, kThreePointProbs, n);
}

inline Iid three_point_iid() { return iid_discrete(kThreePointValues, kThreePointProbs); }

/// Symmetric estimator by brute force: every ordered injective tuple, each through
/// the public joint_moment query.
inline double brute_force_symmetric(const ProcessModel& model, const ExponentPattern& pattern,
                                    std::size_t n) {
  const auto exps = pattern.exponents();
  const std::size_t k = exps.size();
  double total = 0.0;
  double count = 0.0;
  // walk ordered k-tuples of distinct indices via an odometer
  std::vector<std::size_t> pos(k, 0);
  while (true) {
    bool distinct = true;
    for (std::size_t a = 0; a < k && distinct; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (pos[a] == pos[b]) {
          distinct = false;
          break;
        }
    if (distinct) {
      std::vector<IndexPower> factors;
      for (std::size_t a = 0; a < k; ++a) factors.push_back({pos[a] + 1, exps[a]});
      total += joint_moment(model, factors, n);
      count += 1.0;
    }
    std::size_t d = 0;
    while (d < k && ++pos[d] == n) pos[d++] = 0;
    if (d == k) break;
  }
  return total / count;
}

inline bool close_rel(double got, double want, double rel, double abs_floor) {
  return std::abs(got - want) <= std::max(abs_floor, rel * std::abs(want));
}

}  // namespace svar::test
