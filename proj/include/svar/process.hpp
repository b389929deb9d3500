#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace svar {

/// Highest total exponent any joint moment query may carry (E[s^8] needs order 8).
inline constexpr int kMaxMomentOrder = 8;

/// Independent, identically distributed observations described by their raw
/// moments: raw_moments[k - 1] = E[X^k].
struct Iid {
  std::vector<double> raw_moments;
};

/// Stationary Gaussian process with constant mean and autocovariance gamma(lag).
struct GaussianStationary {
  double mean = 0.0;
  std::function<double(std::size_t)> autocovariance;
};

struct Atom {
  std::vector<double> values;
  double probability = 0.0;
};

/// Explicit joint law of (X_1, ..., X_n) with finite support.
struct FiniteJoint {
  std::size_t n = 0;
  std::vector<Atom> atoms;
};

using ProcessModel = std::variant<Iid, GaussianStationary, FiniteJoint>;

/// One factor X_index^exponent of a joint moment query. Indices are 1-based.
struct IndexPower {
  std::size_t index = 1;
  int exponent = 1;
};

/// E[prod X_i^a] over the given factors. The sample size n bounds the indices;
/// for FiniteJoint it must equal the model's own n.
[[nodiscard]] double joint_moment(const ProcessModel& model, std::span<const IndexPower> factors,
                                  std::size_t n);

/// Convenience overload for FiniteJoint (n taken from the model) and for models
/// without an intrinsic length (n = largest index).
[[nodiscard]] double joint_moment(const ProcessModel& model, std::span<const IndexPower> factors);

/// Checks the model invariants; throws DomainError on violation.
void validate(const ProcessModel& model, std::size_t n);

// Factories --------------------------------------------------------------------

[[nodiscard]] Iid iid_normal(double sigma, double mean = 0.0);
[[nodiscard]] Iid iid_discrete(std::span<const double> values, std::span<const double> probabilities);
[[nodiscard]] Iid iid_rademacher();

/// Stationary Gaussian AR(1): gamma(h) = innovation_sd^2 / (1 - phi^2) * phi^|h|.
[[nodiscard]] GaussianStationary gaussian_ar1(double phi, double innovation_sd);

/// Gaussian process from an explicit autocovariance sequence gamma(0), gamma(1), ...
/// Lags past the end of the list are zero.
[[nodiscard]] GaussianStationary gaussian_from_autocovariance(std::vector<double> gamma);

/// Product law of n independent copies of a discrete marginal.
[[nodiscard]] FiniteJoint iid_finite_joint(std::span<const double> values,
                                           std::span<const double> probabilities, std::size_t n);

[[nodiscard]] FiniteJoint constant_process(double value, std::size_t n);

/// Largest number of paths markov_to_finite_joint will materialize.
inline constexpr std::size_t kMaxFiniteAtoms = 10'000'000;

/// Expands every state path of a finite Markov chain into an explicit joint law.
[[nodiscard]] FiniteJoint markov_to_finite_joint(std::span<const double> states,
                                                 const std::vector<std::vector<double>>& transition,
                                                 std::span<const double> initial, std::size_t n);

/// Stationary distribution of a row-stochastic matrix (power iteration).
[[nodiscard]] std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& transition);

// Affine transforms X -> X + c and X -> c X ------------------------------------

/// Shifts every observation by c. IID raw moments are shifted binomially.
[[nodiscard]] ProcessModel shifted(const ProcessModel& model, double c);
[[nodiscard]] ProcessModel scaled(const ProcessModel& model, double c);

/// Covariance matrix of (X_1..X_n) for models that have one in closed form
/// (GaussianStationary, FiniteJoint, Iid).
[[nodiscard]] std::vector<std::vector<double>> covariance_matrix(const ProcessModel& model,
                                                                 std::size_t n);

/// Prepared, read-only joint moment evaluator for a fixed sample size.
///
/// Positions are 0-based here. Safe to share across threads.
class MomentEvaluator {
 public:
  enum class Kind { iid, gaussian, finite };

  MomentEvaluator(const ProcessModel& model, std::size_t n);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::size_t n() const { return n_; }

  /// E[prod_k X_{positions[k]}^{exponents[k]}]; positions must be distinct.
  [[nodiscard]] double operator()(std::span<const std::size_t> positions,
                                  std::span<const int> exponents) const;

  /// Lag table gamma(0..n-1); empty unless kind() == gaussian.
  [[nodiscard]] std::span<const double> lags() const { return lags_; }

 private:
  [[nodiscard]] double gaussian_moment(std::span<const std::size_t> positions,
                                       std::span<const int> exponents) const;
  [[nodiscard]] double finite_moment(std::span<const std::size_t> positions,
                                     std::span<const int> exponents) const;

  Kind kind_;
  std::size_t n_;
  std::vector<double> raw_moments_;
  std::vector<double> lags_;
  double mean_ = 0.0;
  // column-major: coordinate i of atom a at columns_[i * atoms + a]
  std::vector<double> columns_;
  std::vector<double> probabilities_;
};

/// Isserlis sum over perfect matchings of the given (repeated) positions.
/// Zero for an odd count. Up to kMaxMomentOrder positions.
[[nodiscard]] double isserlis(std::span<const std::size_t> positions, std::span<const double> lags);

}  // namespace svar
