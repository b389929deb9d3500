#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "svar/cumulants.hpp"
#include "svar/error.hpp"
#include "svar/expansion.hpp"
#include "svar/oracles.hpp"

using namespace svar;
using Catch::Approx;

namespace {

ExpansionSpec make(SeriesKind kind, int order, double k3, double k4, double mu = 1.0, double sigma = 0.5) {
  ExpansionSpec s;
  s.kind = kind;
  s.order = order;
  s.mu = mu;
  s.sigma = sigma;
  s.kappa3 = k3;
  s.kappa4 = k4;
  return s;
}

CumulantSet chisq_cumulants(std::size_t n) {
  const double d = static_cast<double>(n - 1);
  CumulantSet c;
  c.n = n;
  c.order = 4;
  c.k = {1.0, 2.0 / d, 8.0 / (d * d), 48.0 / (d * d * d)};
  return c;
}

}  // namespace

TEST_CASE("Hermite polynomials", "[expansion]") {
  CHECK(hermite_he(3, 2.0) == Approx(2.0));
  CHECK(hermite_he(4, 1.0) == Approx(-2.0));
  CHECK(hermite_he(0, 17.3) == 1.0);
  CHECK(hermite_he(2, 0.0) == -1.0);
  CHECK(hermite_he(6, 0.0) == Approx(-15.0));
  CHECK_THROWS_AS(hermite_he(-1, 0.0), DomainError);
}

TEST_CASE("Bell polynomial coefficients", "[expansion]") {
  const std::vector<double> k{0.3, -0.2};
  CHECK(bell_coefficient(0, k) == 1.0);
  CHECK(bell_coefficient(1, k) == 0.0);
  CHECK(bell_coefficient(3, k) == Approx(0.3));
  CHECK(bell_coefficient(4, k) == Approx(-0.2));
  CHECK(bell_coefficient(6, k) == Approx(10.0 * 0.09));
}

TEST_CASE("Gram-Charlier density and CDF identities", "[expansion]") {
  const auto plain = make(SeriesKind::gram_charlier, 0, 0.0, 0.0);
  CHECK(gc_density(plain, 1.0) == Approx(1.0 / (0.5 * std::sqrt(2.0 * std::numbers::pi))));
  CHECK(gc_cdf(plain, 1.0) == Approx(0.5));

  const auto skew = make(SeriesKind::gram_charlier, 3, 0.04, 0.0);
  CHECK(gc_density(skew, 1.0) == Approx(normal_density(1.0, 1.0, 0.5)));
  CHECK(gc_cdf(skew, 1.0) == Approx(0.5 + 0.04 / (6.0 * 0.125) * normal_density(0.0, 0.0, 1.0)));

  const auto full = make(SeriesKind::gram_charlier, 4, 0.04, 0.03);
  CHECK(gc_cdf(full, 1.0 + 12.0 * 0.5) == Approx(1.0).margin(1e-6));
  CHECK(gc_cdf(full, 1.0 - 12.0 * 0.5) == Approx(0.0).margin(1e-6));
}

TEST_CASE("Edgeworth series", "[expansion]") {
  const auto flat = make(SeriesKind::edgeworth, 2, 0.0, 0.0);
  for (double x : {0.0, 0.7, 1.3, 2.4}) CHECK(edgeworth_density(flat, x) == Approx(normal_density(x, 1.0, 0.5)));
  const auto e2 = make(SeriesKind::edgeworth, 2, 0.0, 0.05);
  const auto g4 = make(SeriesKind::gram_charlier, 4, 0.0, 0.05);
  for (double x : {0.0, 0.7, 1.3, 2.4}) CHECK(edgeworth_density(e2, x) == Approx(gc_density(g4, x)));
  const auto c = series_coefficients(make(SeriesKind::edgeworth, 2, 0.04, 0.03));
  CHECK(c.c[3] == Approx(0.04 / (6.0 * 0.125)));
  CHECK(c.c[4] == Approx(0.03 / (24.0 * 0.0625)));
  CHECK(c.c[6] == Approx(0.04 * 0.04 / (72.0 * std::pow(0.5, 6))));
  CHECK_THROWS_AS(edgeworth_density(g4, 1.0), DomainError);
  CHECK_THROWS_AS(gc_density(e2, 1.0), DomainError);
}

TEST_CASE("expansion specs validate their inputs", "[expansion]") {
  CumulantSet point;
  point.order = 4;
  point.k = {2.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(ExpansionSpec::from(point, SeriesKind::gram_charlier, 4), DomainError);
  CHECK_THROWS_AS(ExpansionSpec::from(chisq_cumulants(10), SeriesKind::gram_charlier, 5), DomainError);
  CHECK_THROWS_AS(ExpansionSpec::from(chisq_cumulants(10), SeriesKind::edgeworth, 3), DomainError);
  CumulantSet short_set = chisq_cumulants(10);
  short_set.order = 3;
  CHECK_THROWS(ExpansionSpec::from(short_set, SeriesKind::gram_charlier, 4));
}

TEST_CASE("series densities integrate to one and match their cumulants", "[expansion]") {
  const auto cum = chisq_cumulants(10);
  for (auto [kind, order] : {std::pair{SeriesKind::gram_charlier, 4}, std::pair{SeriesKind::edgeworth, 2}}) {
    const auto spec = ExpansionSpec::from(cum, kind, order);
    const double a = spec.mu - 20.0 * spec.sigma;
    const double b = spec.mu + 20.0 * spec.sigma;
    auto moment = [&](int p) {
      return integrate([&](double x) { return std::pow(x - spec.mu, p) * series_density(spec, x); }, a, b, 1e-13);
    };
    CHECK(moment(0) == Approx(1.0).margin(1e-10));
    CHECK(moment(1) == Approx(0.0).margin(1e-10));
    CHECK(moment(2) == Approx(cum.k2()).margin(1e-10));
    CHECK(moment(3) == Approx(cum.k3()).margin(1e-9));
    CHECK(moment(4) - 3.0 * cum.k2() * cum.k2() == Approx(cum.k4()).margin(1e-9));
    CHECK(series_cdf(spec, b) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("negativity diagnostic", "[expansion]") {
  const auto clean = negativity(make(SeriesKind::gram_charlier, 0, 0.0, 0.0));
  CHECK(clean.intervals.empty());
  CHECK(clean.negative_mass == 0.0);
  const auto wild = negativity(make(SeriesKind::gram_charlier, 3, 0.5, 0.0, 0.0, 1.0));
  CHECK_FALSE(wild.intervals.empty());
  CHECK(wild.negative_mass < 0.0);
}

TEST_CASE("Gram-Charlier density at the mean of the chi-squared law, n = 10", "[expansion]") {
  // at x = mu only He_4(0) = 3 survives: phi(0) / sigma * (1 + 3 kappa_4 / (24 sigma^4)) = phi(0) / sigma * 7 / 6
  const auto spec = ExpansionSpec::from(chisq_cumulants(10), SeriesKind::gram_charlier, 4);
  const double sigma = std::sqrt(2.0 / 9.0);
  CHECK(gc_density(spec, 1.0) == Approx(normal_density(0.0, 0.0, 1.0) / sigma * 7.0 / 6.0).epsilon(1e-14));
  // the exact Gamma(4.5, 2/9) density there is 0.8308; the four-term series overshoots it by about 0.157
  CHECK(gamma_reference(10, 1.0, 1.0).density == Approx(0.8307816408778648).epsilon(1e-12));
}
