#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "svar/cumulants.hpp"

namespace svar {

enum class SeriesKind { gram_charlier, edgeworth };

[[nodiscard]] const char* to_string(SeriesKind kind);

/// Highest Hermite degree used anywhere in the series.
inline constexpr int kMaxSeriesDegree = 6;

/// Truncated series around N(kappa_1, kappa_2).
///
/// Gram-Charlier order is the highest Hermite degree kept (0, 3, 4 or 6).
/// Edgeworth order counts powers of n^{-1/2} of the standardized statistic:
/// order 1 keeps the skewness term, order 2 adds kurtosis and squared skewness.
struct ExpansionSpec {
  SeriesKind kind = SeriesKind::gram_charlier;
  int order = 4;
  double mu = 0.0;
  double sigma = 1.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;

  /// Throws DomainError when kappa_2 <= 0 or the kind/order pair is unsupported.
  [[nodiscard]] static ExpansionSpec from(const CumulantSet& cumulants, SeriesKind kind, int order);

  void validate() const;
};

/// Probabilists' Hermite polynomial He_j(x) by He_{j+1} = x He_j - j He_{j-1}. j <= 12.
[[nodiscard]] double hermite_he(int j, double x);

/// Complete Bell polynomial B_j(0, 0, kappa_3, ..., kappa_j); kappas[0] is kappa_3.
/// Missing trailing cumulants are zero. j in 0..6.
[[nodiscard]] double bell_coefficient(int j, std::span<const double> kappas);

/// c_j multiplying He_j((x - mu) / sigma); c_0 = 1 and c_1 = c_2 = 0.
struct SeriesCoefficients {
  std::array<double, kMaxSeriesDegree + 1> c{};
};

[[nodiscard]] SeriesCoefficients series_coefficients(const ExpansionSpec& spec);

/// Density / CDF of the series selected by spec.kind and spec.order.
[[nodiscard]] double series_density(const ExpansionSpec& spec, double x);
[[nodiscard]] double series_cdf(const ExpansionSpec& spec, double x);

/// Kind-checked entry points.
[[nodiscard]] double gc_density(const ExpansionSpec& spec, double x);
[[nodiscard]] double gc_cdf(const ExpansionSpec& spec, double x);
[[nodiscard]] double edgeworth_density(const ExpansionSpec& spec, double x);
[[nodiscard]] double edgeworth_cdf(const ExpansionSpec& spec, double x);

[[nodiscard]] double normal_density(double x, double mu, double sigma);
[[nodiscard]] double normal_cdf(double x, double mu, double sigma);

/// Where the truncated density dips below zero on [mu - 12 sigma, mu + 12 sigma].
struct NegativityReport {
  std::vector<std::pair<double, double>> intervals;
  double negative_mass = 0.0;  ///< integral of the negative part (<= 0)
};

[[nodiscard]] NegativityReport negativity(const ExpansionSpec& spec);

/// Adaptive Gauss-Kronrod quadrature.
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b,
                               double abs_tol = 1e-10);

}  // namespace svar
