#pragma once

#include <cmath>

namespace svar {

/// Neumaier-compensated accumulator. Results depend only on the order of add()
/// calls, so a fixed traversal order gives bit-reproducible sums.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(double init) : sum_(init) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  /// Folds another partial in: both its running sum and its carried error.
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  [[nodiscard]] constexpr double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace svar
