#include "svar/expansion.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "svar/error.hpp"

namespace svar {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double factorial(int j) {
  double r = 1.0;
  for (int i = 2; i <= j; ++i) r *= i;
  return r;
}

// sum_j c_j He_j(z)
double hermite_series(const SeriesCoefficients& c, double z) {
  double s = 0.0;
  for (int j = 0; j <= kMaxSeriesDegree; ++j) {
    if (c.c[j] != 0.0) s += c.c[j] * hermite_he(j, z);
  }
  return s;
}

}  // namespace

const char* to_string(SeriesKind kind) {
  return kind == SeriesKind::gram_charlier ? "gram-charlier" : "edgeworth";
}

ExpansionSpec ExpansionSpec::from(const CumulantSet& cumulants, SeriesKind kind, int order) {
  if (cumulants.order < 2) throw DomainError("expansion needs at least kappa_1 and kappa_2");
  ExpansionSpec spec;
  spec.kind = kind;
  spec.order = order;
  spec.mu = cumulants.k1();
  if (!(cumulants.k2() > 0.0)) {
    throw DomainError("expansion needs kappa_2 > 0 (got " + std::to_string(cumulants.k2()) +
                      "); the law of s^2 is a point mass");
  }
  spec.sigma = std::sqrt(cumulants.k2());
  spec.kappa3 = cumulants.order >= 3 ? cumulants.k3() : 0.0;
  spec.kappa4 = cumulants.order >= 4 ? cumulants.k4() : 0.0;
  spec.validate();
  const int needed = order == 0 ? 2 : (order == 1 || order == 3) ? 3 : 4;
  if (cumulants.order < needed) {
    throw InsufficientSampleSize(std::string(to_string(kind)) + " order " + std::to_string(order) + " needs kappa_" +
                                 std::to_string(needed) + " but only " + std::to_string(cumulants.order) +
                                 " cumulants are available");
  }
  return spec;
}

void ExpansionSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("expansion: sigma must be > 0");
  if (kind == SeriesKind::gram_charlier) {
    if (order != 0 && order != 3 && order != 4 && order != 6) {
      throw DomainError("gram-charlier order must be one of 0, 3, 4, 6");
    }
  } else if (order != 1 && order != 2) {
    throw DomainError("edgeworth order must be 1 or 2");
  }
}

double hermite_he(int j, double x) {
  if (j < 0 || j > 12) throw DomainError("hermite_he: degree must be in 0..12");
  if (j == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < j; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double bell_coefficient(int j, std::span<const double> kappas) {
  if (j < 0 || j > kMaxSeriesDegree) throw DomainError("bell_coefficient: j must be in 0..6");
  // x_1 = x_2 = 0, x_k = kappa_k for k >= 3
  std::array<double, kMaxSeriesDegree + 1> x{};
  for (std::size_t i = 0; i < kappas.size() && i + 3 <= static_cast<std::size_t>(kMaxSeriesDegree); ++i) {
    x[i + 3] = kappas[i];
  }
  std::array<double, kMaxSeriesDegree + 1> b{};
  b[0] = 1.0;
  // B_{m+1} = sum_{k=0}^{m} C(m, k) x_{k+1} B_{m-k}
  for (int m = 0; m < j; ++m) {
    double s = 0.0;
    for (int k = 0; k <= m; ++k) s += binomial(m, k) * x[k + 1] * b[m - k];
    b[m + 1] = s;
  }
  return b[j];
}

SeriesCoefficients series_coefficients(const ExpansionSpec& spec) {
  spec.validate();
  SeriesCoefficients out;
  out.c[0] = 1.0;
  const std::array<double, 2> kappas{spec.kappa3, spec.kappa4};
  auto coefficient = [&](int j) {
    return bell_coefficient(j, kappas) / (factorial(j) * std::pow(spec.sigma, j));
  };
  if (spec.kind == SeriesKind::gram_charlier) {
    for (int j = 3; j <= spec.order; ++j) out.c[j] = coefficient(j);
  } else {
    out.c[3] = coefficient(3);
    if (spec.order >= 2) {
      out.c[4] = coefficient(4);
      out.c[6] = coefficient(6);
    }
  }
  return out;
}

double series_density(const ExpansionSpec& spec, double x) {
  const auto c = series_coefficients(spec);
  const double z = (x - spec.mu) / spec.sigma;
  return std_normal_pdf(z) / spec.sigma * hermite_series(c, z);
}

double series_cdf(const ExpansionSpec& spec, double x) {
  const auto c = series_coefficients(spec);
  const double z = (x - spec.mu) / spec.sigma;
  // integral of He_j(t) phi(t) from -inf to z is -He_{j-1}(z) phi(z) for j >= 1
  double tail = 0.0;
  for (int j = 1; j <= kMaxSeriesDegree; ++j) {
    if (c.c[j] != 0.0) tail += c.c[j] * hermite_he(j - 1, z);
  }
  return std_normal_cdf(z) - std_normal_pdf(z) * tail;
}

double gc_density(const ExpansionSpec& spec, double x) {
  if (spec.kind != SeriesKind::gram_charlier) throw DomainError("gc_density: spec is not gram-charlier");
  return series_density(spec, x);
}

double gc_cdf(const ExpansionSpec& spec, double x) {
  if (spec.kind != SeriesKind::gram_charlier) throw DomainError("gc_cdf: spec is not gram-charlier");
  return series_cdf(spec, x);
}

double edgeworth_density(const ExpansionSpec& spec, double x) {
  if (spec.kind != SeriesKind::edgeworth) throw DomainError("edgeworth_density: spec is not edgeworth");
  return series_density(spec, x);
}

double edgeworth_cdf(const ExpansionSpec& spec, double x) {
  if (spec.kind != SeriesKind::edgeworth) throw DomainError("edgeworth_cdf: spec is not edgeworth");
  return series_cdf(spec, x);
}

double normal_density(double x, double mu, double sigma) { return std_normal_pdf((x - mu) / sigma) / sigma; }

double normal_cdf(double x, double mu, double sigma) { return std_normal_cdf((x - mu) / sigma); }

NegativityReport negativity(const ExpansionSpec& spec) {
  const auto c = series_coefficients(spec);
  // The sign of the density is the sign of the Hermite polynomial in z. Scan z finely
  // and bisect each sign change; the polynomial has at most 6 real roots.
  constexpr double kSpan = 12.0;
  constexpr int kSteps = 24000;
  auto poly = [&](double z) { return hermite_series(c, z); };
  auto refine = [&](double lo, double hi) {
    double flo = poly(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = poly(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  NegativityReport report;
  double z_prev = -kSpan;
  bool negative = poly(z_prev) < 0.0;
  double start = z_prev;
  for (int s = 1; s <= kSteps; ++s) {
    const double z = -kSpan + 2.0 * kSpan * s / kSteps;
    const bool neg = poly(z) < 0.0;
    if (neg != negative) {
      const double root = refine(z_prev, z);
      if (neg) {
        start = root;
      } else {
        report.intervals.emplace_back(start, root);
      }
      negative = neg;
    }
    z_prev = z;
  }
  if (negative) report.intervals.emplace_back(start, kSpan);

  for (auto& [lo, hi] : report.intervals) {
    lo = spec.mu + spec.sigma * lo;
    hi = spec.mu + spec.sigma * hi;
    report.negative_mass += integrate([&](double x) { return series_density(spec, x); }, lo, hi);
  }
  return report;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  const double width = std::abs(b - a);
  // gauss_kronrod takes a relative tolerance; pick it so the absolute target is met
  // for integrands of order one.
  const double rel = std::max(abs_tol / std::max(width, 1.0), 1e-15);
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel, &error);
}

}  // namespace svar
