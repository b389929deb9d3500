#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "svar/cumulants.hpp"
#include "svar/process.hpp"
#include "svar/symmetric_moments.hpp"

namespace svar {

// Exact law ------------------------------------------------------------------------

/// Law of s_n^2 for a finite-support process: value -> probability, sorted by value.
struct ExactLaw {
  std::size_t n = 0;
  std::vector<std::pair<double, double>> atoms;
};

/// Values within this distance of a cluster's first value are merged.
inline constexpr double kLawMergeTol = 1e-12;

/// Bessel-corrected sample variance of one realisation.
[[nodiscard]] double sample_variance(std::span<const double> xs);

[[nodiscard]] ExactLaw exact_law(const FiniteJoint& model, Execution execution = Execution::parallel);

/// Exact first four cumulants of the enumerated law (computed from central moments).
[[nodiscard]] CumulantSet exact_cumulants(const ExactLaw& law);

// Gaussian quadratic form ------------------------------------------------------------

/// For X ~ N(0, Sigma), (n-1) s^2 = X^T B X, so
/// kappa_r(s^2) = 2^{r-1} (r-1)! tr((B Sigma)^r) / (n-1)^r.
[[nodiscard]] CumulantSet gaussian_quadratic_form_cumulants(
    const std::vector<std::vector<double>>& covariance);

// Chi-squared reference --------------------------------------------------------------

struct GammaReference {
  double density = 0.0;
  double cdf = 0.0;
};

/// s^2 of n i.i.d. N(mu, sigma^2) draws ~ Gamma(shape (n-1)/2, scale 2 sigma^2 / (n-1)).
[[nodiscard]] GammaReference gamma_reference(std::size_t n, double sigma, double x);

// Monte Carlo --------------------------------------------------------------------------

struct Histogram {
  std::vector<double> edges;
  std::vector<double> masses;
};

struct MCSummary {
  std::size_t draws = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::array<double, 4> k{};   ///< k-statistics of the simulated s^2 values
  std::array<double, 4> se{};  ///< batch-means standard errors
  Histogram histogram;
};

struct Ar1Spec {
  double phi = 0.0;
  double innovation_sd = 1.0;
  std::size_t n = 2;
};

inline constexpr std::size_t kMinDraws = 10'000;
/// Independent RNG streams (and batches for the standard errors) per simulation.
inline constexpr std::size_t kMonteCarloBatches = 100;

/// Simulates stationary Gaussian AR(1) paths and summarises s^2.
/// Each batch draws from its own stream seeded from (seed, batch index), so the
/// result is identical for any thread count.
[[nodiscard]] MCSummary simulate_ar1(const Ar1Spec& spec, std::size_t draws, std::uint64_t seed,
                                     std::size_t bins = 50,
                                     Execution execution = Execution::parallel);

/// s^2 of every simulated path, in draw order.
[[nodiscard]] std::vector<double> simulate_ar1_variances(const Ar1Spec& spec, std::size_t draws,
                                                         std::uint64_t seed,
                                                         Execution execution = Execution::parallel);

/// Unbiased k-statistics k1..k4 of a sample (needs at least 4 values).
[[nodiscard]] std::array<double, 4> k_statistics(std::span<const double> xs);

/// Seed for stream `index` derived from a master seed (splitmix64 finaliser).
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace svar
