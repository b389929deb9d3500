#include <catch_amalgamated.hpp>
#include <cstring>
#include <omp.h>

#include "models.hpp"
#include "svar/error.hpp"
#include "svar/kernels/injective_sum.hpp"
#include "svar/symmetric_moments.hpp"

using namespace svar;
using Catch::Approx;

TEST_CASE("exponent patterns", "[symmetric-moments]") {
  const auto p = ExponentPattern::parse("1.3.2.1");
  CHECK(p.to_string() == "3.2.1.1");
  CHECK(p.order() == 7);
  CHECK(p.arity() == 4);
  CHECK(p.symmetry_factor() == 2.0);
  CHECK_THROWS_AS(ExponentPattern::parse("2..1"), DomainError);

  CHECK(group_patterns(1).size() == 2);
  CHECK(group_patterns(2).size() == 5);
  CHECK(group_patterns(3).size() == 11);
  CHECK(group_patterns(4).size() == 22);
  CHECK(group_patterns(2).front().to_string() == "4");
  CHECK(group_patterns(2).back().to_string() == "1.1.1.1");
}

TEST_CASE("distinct arrangements of an exponent multiset", "[symmetric-moments]") {
  const std::vector<int> e{2, 1, 1};
  CHECK(kernels::distinct_arrangements(e).size() == 3);
  const std::vector<int> f{3, 2, 1};
  CHECK(kernels::distinct_arrangements(f).size() == 6);
}

TEST_CASE("estimator values from hand enumeration", "[symmetric-moments]") {
  CHECK(symmetric_moment(iid_normal(1.0), ExponentPattern::parse("2"), 7) == Approx(1.0));
  CHECK(symmetric_moment(constant_process(1.5, 4), ExponentPattern::parse("1.1"), 4) == Approx(2.25));
  const ProcessModel ar = gaussian_ar1(0.5, std::sqrt(0.75));
  CHECK(symmetric_moment(ar, ExponentPattern::parse("1.1"), 3) == Approx(5.0 / 12.0).epsilon(1e-14));
  CHECK(symmetric_moment(iid_rademacher(), ExponentPattern::parse("2.2"), 4) == Approx(1.0));
  CHECK(symmetric_moment(test::rademacher_joint(4), ExponentPattern::parse("2.2"), 4) == Approx(1.0));
}

TEST_CASE("group 2 table for i.i.d. standard normal data", "[symmetric-moments]") {
  const auto tables = build_tables(iid_normal(1.0), 10, 2);
  const auto& t = table_for(tables, 2);
  CHECK(t.at("4") == Approx(3.0));
  CHECK(t.at("2.2") == Approx(1.0));
  CHECK(t.at("3.1") == 0.0);
  CHECK(t.at("2.1.1") == 0.0);
  CHECK(t.at("1.1.1.1") == 0.0);
}

TEST_CASE("Markov tables are complete and match the stationary marginal", "[symmetric-moments]") {
  const auto tables = build_tables(test::markov_chain(8), 8, 4);
  std::size_t entries = 0;
  for (const auto& t : tables) {
    for (const auto& [p, v] : t.entries) {
      CHECK(std::isfinite(v));
      ++entries;
    }
  }
  CHECK(entries == 40);
  CHECK(table_for(tables, 1).at("2") == Approx(1.0 / 3.0).margin(1e-12));
  CHECK_THROWS_AS(build_tables(test::markov_chain(7), 7, 4), InsufficientSampleSize);
}

TEST_CASE("estimators agree with a brute-force ordered-tuple oracle", "[symmetric-moments]") {
  const std::vector<std::pair<std::string, ProcessModel>> models{
      {"markov", test::markov_chain(6)},
      {"three-point iid", test::three_point_iid()},
      {"ar1", gaussian_ar1(0.6, 1.0)},
      {"ma-type autocovariance", gaussian_from_autocovariance({2.0, 0.7, -0.3})},
  };
  for (const auto& [name, model] : models) {
    for (int g = 1; g <= 3; ++g) {
      for (const auto& p : group_patterns(g)) {
        INFO(name << " pattern " << p.to_string());
        const double want = test::brute_force_symmetric(model, p, 6);
        CHECK(test::close_rel(symmetric_moment(model, p, 6), want, 1e-12, 1e-14));
        MomentOptions naive;
        naive.path = MomentPath::enumeration;
        CHECK(test::close_rel(symmetric_moment(model, p, 6, naive), want, 1e-12, 1e-14));
      }
    }
  }
}

TEST_CASE("stationary fast path matches full enumeration at group 4", "[symmetric-moments]") {
  const ProcessModel ar = gaussian_ar1(0.5, 1.0);
  MomentOptions naive;
  naive.path = MomentPath::enumeration;
  for (const auto& p : group_patterns(4)) {
    INFO(p.to_string());
    CHECK(test::close_rel(symmetric_moment(ar, p, 12), symmetric_moment(ar, p, 12, naive), 1e-12, 1e-14));
  }
}

TEST_CASE("serial and parallel kernels agree bit for bit", "[symmetric-moments]") {
  const ProcessModel models[] = {ProcessModel{test::markov_chain(9)}, ProcessModel{gaussian_ar1(0.7, 1.0)}};
  const int saved = omp_get_max_threads();
  for (const auto& model : models) {
    for (const auto& p : group_patterns(4)) {
      MomentOptions serial;
      serial.execution = Execution::serial;
      serial.path = MomentPath::enumeration;
      const double a = symmetric_moment(model, p, 9, serial);
      for (int threads : {1, 2, 3, 4}) {
        omp_set_num_threads(threads);
        MomentOptions parallel;
        parallel.path = MomentPath::enumeration;
        const double b = symmetric_moment(model, p, 9, parallel);
        CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
      }
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("estimator preconditions", "[symmetric-moments]") {
  CHECK_THROWS_AS(symmetric_moment(iid_normal(1.0), ExponentPattern::parse("1.1.1"), 2), InsufficientSampleSize);
  MomentOptions naive;
  naive.path = MomentPath::enumeration;
  CHECK_THROWS(symmetric_moment(iid_normal(1.0), ExponentPattern::parse("1.1.1.1.1.1"), 65, naive));
  CHECK(falling_factorial(5, 2) == 20.0);
  CHECK(falling_factorial(5, 0) == 1.0);
}
