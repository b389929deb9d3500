#include "svar/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svar/coefficient_tables.hpp"
#include "svar/compensated_sum.hpp"
#include "svar/error.hpp"

namespace svar {
namespace {

void require_n(std::size_t n, std::size_t need, const char* what) {
  if (n < need) {
    throw InsufficientSampleSize(std::string("insufficient sample size: ") + what + " needs n >= " +
                                 std::to_string(need) + ", got n = " + std::to_string(n));
  }
}

int resolve_order(std::size_t n, int requested) {
  const int available = max_cumulant_order(n);
  if (requested == 0) {
    if (available == 0) require_n(n, 2, "kappa_1");
    return available;
  }
  if (requested < 1 || requested > 4) throw DomainError("cumulant order must be in 1..4");
  if (requested > available) {
    static constexpr std::array<std::size_t, 4> need{2, 4, 6, 8};
    require_n(n, need[static_cast<std::size_t>(requested) - 1],
              ("kappa_" + std::to_string(requested)).c_str());
  }
  return requested;
}

double sum4(std::initializer_list<double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::moment_route:
      return "moment-route";
    case Engine::cumulant_route:
      return "cumulant-route";
    case Engine::exact:
      return "exact";
    case Engine::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

int max_cumulant_order(std::size_t n) {
  if (n >= 8) return 4;
  if (n >= 6) return 3;
  if (n >= 4) return 2;
  if (n >= 2) return 1;
  return 0;
}

CumulantSet cumulants_from_moments(const MomentSet& moments, Engine engine) {
  CumulantSet out;
  out.n = moments.n;
  out.engine = engine;
  out.order = moments.order;
  const double m1 = moments.m[0];
  const double m2 = moments.m[1];
  const double m3 = moments.m[2];
  const double m4 = moments.m[3];
  if (moments.order >= 1) out.k[0] = m1;
  if (moments.order >= 2) out.k[1] = m2 - m1 * m1;
  if (moments.order >= 3) out.k[2] = sum4({m3, -3 * m2 * m1, 2 * m1 * m1 * m1});
  if (moments.order >= 4) {
    out.k[3] = sum4({m4, -4 * m1 * m3, -3 * m2 * m2, 12 * m1 * m1 * m2, -6 * m1 * m1 * m1 * m1});
  }
  return out;
}

// Table route ------------------------------------------------------------------

double kappa1(std::span<const SymmetricMomentTable> tables) {
  const auto& t = table_for(tables, 1);
  return t.at("2") - t.at("1.1");
}

double remainder_r2(std::span<const SymmetricMomentTable> tables) {
  const auto& t = table_for(tables, 2);
  const double k1 = kappa1(tables);
  return sum4({t.at("2.2"), -2 * t.at("2.1.1"), t.at("1.1.1.1"), -k1 * k1});
}

double kappa2(std::span<const SymmetricMomentTable> tables, std::size_t n) {
  require_n(n, 4, "kappa_2");
  const auto& t = table_for(tables, 2);
  return evaluate(kappa2_table(), t, n) + remainder_r2(tables);
}

double kappa3_cumulant_route(std::span<const SymmetricMomentTable> tables, std::size_t n,
                             const MomentSet& lower, A312Denominator variant) {
  require_n(n, 6, "kappa_3");
  if (lower.order < 2) throw DomainError("kappa_3 table route needs E[s^2] and E[s^4]");
  const auto& t = table_for(tables, 3);
  const double nm1 = static_cast<double>(n) - 1.0;
  const double nd = static_cast<double>(n);
  CompensatedSum s;
  for (const auto& e : kappa3_table().entries) {
    double denom = std::pow(nm1, e.i) * std::pow(nd, e.j);
    if (e.i == 1 && e.j == 2 && variant == A312Denominator::nm1sq_n) denom = nm1 * nm1 * nd;
    s.add(evaluate(e, t) / denom);
  }
  const double k1 = kappa1(tables);
  s.add(-3 * lower.m[1] * lower.m[0]);
  s.add(2 * k1 * k1 * k1);
  return s.value();
}

double kappa4_cumulant_route(std::span<const SymmetricMomentTable> tables, std::size_t n) {
  require_n(n, 8, "kappa_4");
  return evaluate(kappa4_table(), table_for(tables, 4), n);
}

// Moment route ---------------------------------------------------------------------

double moment2(std::span<const SymmetricMomentTable> tables, std::size_t n) {
  require_n(n, 4, "E[s^4]");
  return evaluate(second_moment_terms(), table_for(tables, 2), n);
}

double moment3(std::span<const SymmetricMomentTable> tables, std::size_t n) {
  require_n(n, 6, "E[s^6]");
  return evaluate(sixth_moment_terms(), table_for(tables, 3), n);
}

double moment3_regrouped(std::span<const SymmetricMomentTable> tables, std::size_t n) {
  require_n(n, 6, "E[s^6]");
  return evaluate(sixth_moment_regrouped_table(), table_for(tables, 3), n);
}

double moment4(std::span<const SymmetricMomentTable> tables, std::size_t n) {
  require_n(n, 8, "E[s^8]");
  return evaluate(eighth_moment_terms(), table_for(tables, 4), n);
}

double moment3(const ProcessModel& model, std::size_t n, MomentOptions options) {
  require_n(n, 6, "E[s^6]");
  return moment3(build_tables(model, n, 3, options), n);
}

double moment4(const ProcessModel& model, std::size_t n, MomentOptions options) {
  require_n(n, 8, "E[s^8]");
  return moment4(build_tables(model, n, 4, options), n);
}

MomentSet moments_of_sample_variance(std::span<const SymmetricMomentTable> tables, std::size_t n,
                                     int order) {
  MomentSet m;
  m.n = n;
  m.order = resolve_order(n, order);
  m.m[0] = kappa1(tables);
  if (m.order >= 2) m.m[1] = moment2(tables, n);
  if (m.order >= 3) m.m[2] = moment3(tables, n);
  if (m.order >= 4) m.m[3] = moment4(tables, n);
  return m;
}

CumulantSet cumulants_moment_route(std::span<const SymmetricMomentTable> tables, std::size_t n,
                                   int max_order) {
  const MomentSet moments = moments_of_sample_variance(tables, n, max_order);
  CumulantSet out = cumulants_from_moments(moments, Engine::moment_route);
  if (out.order >= 2) out.residuals.r2 = kappa2(tables, n) - out.k[1];
  if (out.order >= 3) {
    out.residuals.r3 = kappa3_cumulant_route(tables, n, moments, A312Denominator::nm1_n2) - out.k[2];
    out.residuals.r3_alt =
        kappa3_cumulant_route(tables, n, moments, A312Denominator::nm1sq_n) - out.k[2];
  }
  if (out.order >= 4) out.residuals.r4 = kappa4_cumulant_route(tables, n) - out.k[3];
  return out;
}

CumulantSet cumulants_moment_route(const ProcessModel& model, std::size_t n, int max_order,
                                   MomentOptions options) {
  const int order = resolve_order(n, max_order);
  const int groups = std::max(order, 1);
  return cumulants_moment_route(build_tables(model, n, groups, options), n, order);
}

CumulantSet cumulants_cumulant_route(std::span<const SymmetricMomentTable> tables, std::size_t n,
                                     int max_order, A312Denominator variant) {
  CumulantSet out;
  out.n = n;
  out.engine = Engine::cumulant_route;
  out.order = resolve_order(n, max_order);
  out.k[0] = kappa1(tables);
  if (out.order >= 2) out.k[1] = kappa2(tables, n);
  if (out.order >= 3) {
    MomentSet lower;
    lower.n = n;
    lower.order = 2;
    lower.m[0] = out.k[0];
    lower.m[1] = moment2(tables, n);
    out.k[2] = kappa3_cumulant_route(tables, n, lower, variant);
  }
  if (out.order >= 4) out.k[3] = kappa4_cumulant_route(tables, n);
  return out;
}

// Chi-squared exactness ----------------------------------------------------------

double chisq_exactness_deviation(const std::vector<std::vector<double>>& covariance) {
  const std::size_t n = covariance.size();
  if (n == 0) throw DomainError("chisq check: empty covariance matrix");
  for (const auto& row : covariance) {
    if (row.size() != n) throw DomainError("chisq check: covariance matrix is not square");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  auto centering = [&](std::size_t i, std::size_t j) { return (i == j ? 1.0 : 0.0) - inv_n; };

  // B Sigma B = Sigma - r 1^T - 1 c^T + t 1 1^T with row means r, column means c and grand mean t
  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row_mean[i] += covariance[i][j] * inv_n;
      col_mean[j] += covariance[i][j] * inv_n;
    }
  }
  for (std::size_t i = 0; i < n; ++i) grand += row_mean[i] * inv_n;

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double bsb = covariance[i][j] - row_mean[i] - col_mean[j] + grand;
      worst = std::max(worst, std::abs(bsb - centering(i, j)));
    }
  }
  return worst;
}

bool chisq_exactness_check(const std::vector<std::vector<double>>& covariance, double tol) {
  return chisq_exactness_deviation(covariance) <= tol;
}

}  // namespace svar
