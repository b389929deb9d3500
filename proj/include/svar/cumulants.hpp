#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "svar/process.hpp"
#include "svar/symmetric_moments.hpp"

namespace svar {

/// Raw moments E[s^2], E[s^4], E[s^6], E[s^8] of the sample variance.
/// Only the first `order` entries are meaningful.
struct MomentSet {
  std::size_t n = 0;
  int order = 0;
  std::array<double, 4> m{};
};

enum class Engine { moment_route, cumulant_route, exact, monte_carlo };

[[nodiscard]] const char* to_string(Engine engine);

/// Which denominator is applied to A^3_{1,2} in the kappa_3 table route.
enum class A312Denominator {
  nm1_n2,  ///< (n-1) n^2, following the (i,j) naming convention
  nm1sq_n  ///< (n-1)^2 n
};

/// Table-route minus moment-route differences. Empty when not computable.
struct Residuals {
  std::optional<double> r2;
  std::optional<double> r3;      ///< A^3_{1,2} over (n-1) n^2
  std::optional<double> r3_alt;  ///< A^3_{1,2} over (n-1)^2 n
  std::optional<double> r4;      ///< R_4 omitted
};

/// First `order` cumulants of s_n^2.
struct CumulantSet {
  std::size_t n = 0;
  Engine engine = Engine::moment_route;
  int order = 0;
  std::array<double, 4> k{};
  Residuals residuals;

  [[nodiscard]] double k1() const { return k[0]; }
  [[nodiscard]] double k2() const { return k[1]; }
  [[nodiscard]] double k3() const { return k[2]; }
  [[nodiscard]] double k4() const { return k[3]; }
};

/// Highest cumulant order available at sample size n (n >= 8 -> 4, >= 6 -> 3, >= 4 -> 2, >= 2 -> 1).
[[nodiscard]] int max_cumulant_order(std::size_t n);

/// kappa_r from raw moments mu'_1..mu'_order.
[[nodiscard]] CumulantSet cumulants_from_moments(const MomentSet& moments, Engine engine);

// Table route --------------------------------------------------------------------

[[nodiscard]] double kappa1(std::span<const SymmetricMomentTable> tables);

/// Second-order remainder (mu_2^2)_2 - 2 (mu_1^2 mu_2)_2 + (mu_1^4)_2 - kappa_1^2; zero for i.i.d. data.
[[nodiscard]] double remainder_r2(std::span<const SymmetricMomentTable> tables);

[[nodiscard]] double kappa2(std::span<const SymmetricMomentTable> tables, std::size_t n);

/// A^3 sum plus R_3 = -3 mu'_2 mu'_1 + 2 kappa_1^3, with mu'_i the moments of s_n^2
/// taken from `lower`. Diagnostic only.
[[nodiscard]] double kappa3_cumulant_route(std::span<const SymmetricMomentTable> tables,
                                           std::size_t n, const MomentSet& lower,
                                           A312Denominator variant = A312Denominator::nm1_n2);

/// A^4 sum; the undefined R_4 term is left out. Diagnostic only.
[[nodiscard]] double kappa4_cumulant_route(std::span<const SymmetricMomentTable> tables,
                                           std::size_t n);

// Moment route --------------------------------------------------------------------

/// E[s^4] from group-2 estimators. Requires n >= 4.
[[nodiscard]] double moment2(std::span<const SymmetricMomentTable> tables, std::size_t n);
/// E[s^6] from group-3 estimators (closed-form expansion). Requires n >= 6.
[[nodiscard]] double moment3(std::span<const SymmetricMomentTable> tables, std::size_t n);
/// E[s^6] through the regrouped M^3 coefficient table; kept as a diagnostic.
[[nodiscard]] double moment3_regrouped(std::span<const SymmetricMomentTable> tables, std::size_t n);
/// E[s^8] from group-4 estimators. Requires n >= 8.
[[nodiscard]] double moment4(std::span<const SymmetricMomentTable> tables, std::size_t n);

[[nodiscard]] double moment3(const ProcessModel& model, std::size_t n, MomentOptions options = {});
[[nodiscard]] double moment4(const ProcessModel& model, std::size_t n, MomentOptions options = {});

/// Moments of s_n^2 up to `order` (clamped to what n permits when order is 0).
[[nodiscard]] MomentSet moments_of_sample_variance(std::span<const SymmetricMomentTable> tables,
                                                   std::size_t n, int order);

/// Authoritative cumulants. `max_order` = 0 picks the highest order n permits;
/// asking for more than n permits throws InsufficientSampleSize. Residuals are
/// filled for every order where the table route is computable.
[[nodiscard]] CumulantSet cumulants_moment_route(const ProcessModel& model, std::size_t n,
                                                 int max_order = 0, MomentOptions options = {});
[[nodiscard]] CumulantSet cumulants_moment_route(std::span<const SymmetricMomentTable> tables,
                                                 std::size_t n, int max_order = 0);

/// kappa_1, kappa_2 from the A^2 table and kappa_3, kappa_4 from the A^3 / A^4 tables.
[[nodiscard]] CumulantSet cumulants_cumulant_route(std::span<const SymmetricMomentTable> tables,
                                                   std::size_t n, int max_order = 0,
                                                   A312Denominator variant = A312Denominator::nm1_n2);

// Chi-squared exactness -------------------------------------------------------

/// max |(B Sigma B - B)_ij| with B = I - 11^T / n. Throws DomainError for a non-square input.
[[nodiscard]] double chisq_exactness_deviation(const std::vector<std::vector<double>>& covariance);

/// True iff B Sigma B = B within tol, i.e. (n-1) s_n^2 is chi-squared for N(0, Sigma) data.
[[nodiscard]] bool chisq_exactness_check(const std::vector<std::vector<double>>& covariance,
                                         double tol);

}  // namespace svar
