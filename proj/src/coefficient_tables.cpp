#include "svar/coefficient_tables.hpp"

#include <array>
#include <cmath>
#include <string>

#include "svar/compensated_sum.hpp"
#include "svar/error.hpp"

namespace svar {
namespace {

// Pattern names. The estimator built from mu_1^a mu_2^b ... uses exponent 1 a
// times, exponent 2 b times, and so on.
constexpr std::string_view p1_6 = "1.1.1.1.1.1";
constexpr std::string_view p2_1_4 = "2.1.1.1.1";
constexpr std::string_view p3_1_3 = "3.1.1.1";
constexpr std::string_view p2_2_1_1 = "2.2.1.1";
constexpr std::string_view p3_2_1 = "3.2.1";
constexpr std::string_view p2_2_2 = "2.2.2";
constexpr std::string_view p3_3 = "3.3";
constexpr std::string_view p4_1_1 = "4.1.1";
constexpr std::string_view p4_2 = "4.2";
constexpr std::string_view p5_1 = "5.1";
constexpr std::string_view p6 = "6";

constexpr std::string_view p1_8 = "1.1.1.1.1.1.1.1";
constexpr std::string_view p2_1_6 = "2.1.1.1.1.1.1";
constexpr std::string_view p3_1_5 = "3.1.1.1.1.1";
constexpr std::string_view p2_2_1_4 = "2.2.1.1.1.1";
constexpr std::string_view p4_1_4 = "4.1.1.1.1";
constexpr std::string_view p5_1_3 = "5.1.1.1";
constexpr std::string_view p3_2_1_3 = "3.2.1.1.1";
constexpr std::string_view p4_2_1_1 = "4.2.1.1";
constexpr std::string_view p2_2_2_1_1 = "2.2.2.1.1";
constexpr std::string_view p3_3_1_1 = "3.3.1.1";
constexpr std::string_view p6_1_1 = "6.1.1";
constexpr std::string_view p3_2_2_1 = "3.2.2.1";
constexpr std::string_view p5_2_1 = "5.2.1";
constexpr std::string_view p4_3_1 = "4.3.1";
constexpr std::string_view p7_1 = "7.1";
constexpr std::string_view p4_2_2 = "4.2.2";
constexpr std::string_view p2_2_2_2 = "2.2.2.2";
constexpr std::string_view p6_2 = "6.2";
constexpr std::string_view p3_3_2 = "3.3.2";
constexpr std::string_view p5_3 = "5.3";
constexpr std::string_view p4_4 = "4.4";
constexpr std::string_view p8 = "8";

double inverse_powers(std::size_t n, int i, int j) {
  const double nm1 = static_cast<double>(n) - 1.0;
  const double nn = static_cast<double>(n);
  return 1.0 / (std::pow(nm1, i) * std::pow(nn, j));
}

}  // namespace

const CoefficientEntry& CoefficientTable::entry(int i, int j) const {
  for (const auto& e : entries) {
    if (e.i == i && e.j == j) return e;
  }
  throw DomainError("coefficient table level " + std::to_string(level) + " has no entry (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
}

const CoefficientTable& kappa2_table() {
  static const CoefficientTable table{
      2,
      {
          {1, 0, {{-4, "1.1.1.1"}, {8, "2.1.1"}, {-1, "2.2"}}},
          {0, 1, {{1, "4"}, {-4, "3.1"}}},
          {1, 1, {{6, "1.1.1.1"}, {-12, "2.1.1"}, {3, "2.2"}}},
      }};
  return table;
}

const CoefficientTable& kappa3_table() {
  static const CoefficientTable table{
      3,
      {
          {2, 0,
           {{-40, p1_6}, {120, p2_1_4}, {-56, p3_1_3}, {-78, p2_2_1_1}, {48, p3_2_1}, {2, p2_2_2},
            {-6, p3_3}}},
          {1, 1, {{18, p4_1_1}, {-3, p4_2}}},
          {0, 2, {{1, p6}, {-6, p5_1}}},
          {2, 1,
           {{136, p1_6}, {-408, p2_1_4}, {160, p3_1_3}, {288, p2_2_1_1}, {-144, p3_2_1},
            {-24, p2_2_2}, {12, p3_3}}},
          {1, 2, {{15, p4_2}, {-30, p4_1_1}}},
          {2, 2,
           {{-120, p1_6}, {360, p2_1_4}, {-120, p3_1_3}, {-270, p2_2_1_1}, {120, p3_2_1},
            {30, p2_2_2}, {-10, p3_3}}},
      }};
  return table;
}

const CoefficientTable& kappa4_table() {
  static const CoefficientTable table{
      4,
      {
          {3, 0,
           {{-672, p1_8}, {2688, p2_1_6}, {-1216, p3_1_5}, {-3120, p2_2_1_4}, {400, p4_1_4},
            {2240, p3_2_1_3}, {960, p2_2_2_1_1}, {-384, p3_3_1_1}, {-480, p4_2_1_1},
            {-624, p3_2_2_1}, {144, p4_3_1}, {-6, p2_2_2_2}, {96, p3_3_2}, {-3, p4_4},
            {12, p4_2_2}}},
          {2, 1, {{-128, p5_1_3}, {96, p5_2_1}, {-24, p5_3}}},
          {1, 2, {{32, p6_1_1}, {-4, p6_2}}},
          {0, 3, {{1, p8}, {-8, p7_1}}},
          {3, 1,
           {{3792, p1_8}, {-15168, p2_1_6}, {6144, p3_1_5}, {18144, p2_2_1_4}, {-1920, p4_1_4},
            {-11520, p3_2_1_3}, {-6336, p2_2_2_1_1}, {1680, p3_3_1_1}, {2520, p4_2_1_1},
            {3600, p3_2_2_1}, {-624, p4_3_1}, {234, p2_2_2_2}, {-432, p3_3_2}, {33, p4_4},
            {-252, p4_2_2}}},
          {2, 2, {{400, p5_1_3}, {-336, p5_2_1}, {48, p5_3}}},
          {1, 3, {{28, p6_2}, {-56, p6_1_1}}},
          {3, 2,
           {{-7440, p1_8}, {29760, p2_1_6}, {-10880, p3_1_5}, {-36480, p2_2_1_4}, {3104, p4_1_4},
            {20992, p3_2_1_3}, {13824, p2_2_2_1_1}, {-2752, p3_3_1_1}, {-4368, p4_2_1_1},
            {-7248, p3_2_2_1}, {976, p4_3_1}, {-738, p2_2_2_2}, {800, p3_3_2}, {-57, p4_4},
            {612, p4_2_2}}},
          {2, 3, {{-336, p5_1_3}, {336, p5_2_1}, {-56, p5_3}}},
          {3, 3,
           {{5040, p1_8}, {-20160, p2_1_6}, {6720, p3_1_5}, {25200, p2_2_1_4}, {-1680, p4_1_4},
            {-13440, p3_2_1_3}, {-10080, p2_2_2_1_1}, {1680, p3_3_1_1}, {2520, p4_2_1_1},
            {5040, p3_2_2_1}, {-560, p4_3_1}, {630, p2_2_2_2}, {-560, p3_3_2}, {35, p4_4},
            {-420, p4_2_2}}},
      }};
  return table;
}

const CoefficientTable& sixth_moment_regrouped_table() {
  static const CoefficientTable table{
      3,
      {
          {0, 0, {{-1, p1_6}, {3, p2_1_4}, {-3, p2_2_1_1}, {1, p2_2_2}}},
          {1, 0,
           {{12, p1_6}, {-36, p2_1_4}, {12, p3_1_3}, {27, p2_2_1_1}, {-12, p3_2_1}, {-3, p2_2_2}}},
          {0, 1, {{-3, p4_1_1}, {3, p4_2}}},
          {2, 0,
           {{-60, p1_6}, {180, p2_1_4}, {-68, p3_1_3}, {-129, p2_2_1_1}, {60, p3_2_1},
            {13, p2_2_2}, {-6, p3_3}}},
          {1, 1, {{21, p4_1_1}, {-6, p4_2}}},
          {0, 2, {{1, p6}, {-6, p5_1}}},
          {2, 1,
           {{154, p1_6}, {-462, p2_1_4}, {172, p3_1_3}, {333, p2_2_1_1}, {-156, p3_2_1},
            {-33, p2_2_2}, {12, p3_3}}},
          {1, 2, {{15, p4_2}, {-30, p4_1_1}}},
          {2, 2,
           {{-120, p1_6}, {360, p2_1_4}, {-120, p3_1_3}, {-270, p2_2_1_1}, {120, p3_2_1},
            {30, p2_2_2}, {-10, p3_3}}},
      }};
  return table;
}

double evaluate(const CoefficientEntry& entry, const SymmetricMomentTable& table) {
  CompensatedSum s;
  for (const auto& t : entry.terms) s.add(static_cast<double>(t.coefficient) * table.at(t.pattern));
  return s.value();
}

double evaluate(const CoefficientTable& table, const SymmetricMomentTable& moments, std::size_t n) {
  CompensatedSum s;
  for (const auto& e : table.entries) s.add(evaluate(e, moments) * inverse_powers(n, e.i, e.j));
  return s.value();
}

// Closed forms -----------------------------------------------------------------
//
// E[s^{2r}] expanded over distinct-index sums. Writing
//   s^2 = ((n-1) sum X_i^2 - sum_{i!=j} X_i X_j) / (n (n-1))
// and collecting each power by the exponent multiset of the distinct indices gives
// a rational coefficient per symmetric estimator.

namespace {

constexpr std::array<RationalTerm, 5> kSecond{{
    {"4", [](double n) { return 1.0 / n; }},
    {"3.1", [](double n) { return -4.0 / n; }},
    {"2.2", [](double n) { return ((n - 1) * (n - 1) + 2) / (n * (n - 1)); }},
    {"2.1.1", [](double n) { return -2 * (n - 2) * (n - 3) / (n * (n - 1)); }},
    {"1.1.1.1", [](double n) { return (n - 2) * (n - 3) / (n * (n - 1)); }},
}};

double d22(double n) { return (n - 1) * (n - 1) * n * n; }
double d33(double n) { return (n - 1) * (n - 1) * (n - 1) * n * n * n; }

constexpr std::array<RationalTerm, 11> kSixth{{
    {p1_6, [](double n) { return -(n - 5) * (n - 4) * (n - 3) * (n - 2) / d22(n); }},
    {p2_1_4, [](double n) { return 3 * (n - 5) * (n - 4) * (n - 3) * (n - 2) / d22(n); }},
    {p3_1_3, [](double n) { return 4 * (n - 3) * (n - 2) * (3 * n - 5) / d22(n); }},
    {p2_2_1_1, [](double n) { return -3 * (n - 3) * (n - 2) * (n * n - 6 * n + 15) / d22(n); }},
    {p4_1_1, [](double n) { return -3 * (n - 5) * (n - 2) / ((n - 1) * n * n); }},
    {p3_2_1, [](double n) { return -12 * (n - 2) * (n * n - 4 * n + 5) / d22(n); }},
    {p5_1, [](double n) { return -6 / (n * n); }},
    {p3_3, [](double n) { return -2 * (3 * n * n - 6 * n + 5) / d22(n); }},
    {p4_2, [](double n) { return 3 * (n * n - 2 * n + 5) / ((n - 1) * n * n); }},
    {p6, [](double n) { return 1 / (n * n); }},
    {p2_2_2, [](double n) { return (n - 2) * (n * n * n - 3 * n * n + 9 * n - 15) / d22(n); }},
}};

constexpr std::array<RationalTerm, 22> kEighth{{
    {p1_8,
     [](double n) { return (n - 7) * (n - 6) * (n - 5) * (n - 4) * (n - 3) * (n - 2) / d33(n); }},
    {p2_1_6,
     [](double n) {
       return -4 * (n - 7) * (n - 6) * (n - 5) * (n - 4) * (n - 3) * (n - 2) / d33(n);
     }},
    {p3_1_5,
     [](double n) { return -8 * (n - 5) * (n - 4) * (n - 3) * (n - 2) * (3 * n - 7) / d33(n); }},
    {p2_2_1_4,
     [](double n) {
       return 6 * (n - 5) * (n - 4) * (n - 3) * (n - 2) * (n * n - 10 * n + 35) / d33(n);
     }},
    {p4_1_4,
     [](double n) { return 2 * (n - 4) * (n - 3) * (n - 2) * (3 * n * n - 30 * n + 35) / d33(n); }},
    {p3_2_1_3,
     [](double n) {
       return 16 * (n - 4) * (n - 3) * (n - 2) * (3 * n * n - 20 * n + 35) / d33(n);
     }},
    {p5_1_3,
     [](double n) { return 8 * (n - 3) * (n - 2) * (3 * n - 7) / ((n - 1) * (n - 1) * n * n * n); }},
    {p2_2_2_1_1,
     [](double n) {
       return -4 * (n - 4) * (n - 3) * (n - 2) * (n * n * n - 9 * n * n + 45 * n - 105) / d33(n);
     }},
    {p3_3_1_1,
     [](double n) { return 8 * (n - 3) * (n - 2) * (9 * n * n - 30 * n + 35) / d33(n); }},
    {p4_2_1_1,
     [](double n) {
       return -12 * (n - 3) * (n - 2) * (n * n * n - 9 * n * n + 35 * n - 35) / d33(n);
     }},
    {p6_1_1, [](double n) { return -4 * (n - 7) * (n - 2) / ((n - 1) * n * n * n); }},
    {p3_2_2_1,
     [](double n) {
       return -24 * (n - 3) * (n - 2) * (n * n * n - 7 * n * n + 25 * n - 35) / d33(n);
     }},
    {p4_3_1,
     [](double n) { return -8 * (n - 2) * (3 * n * n * n - 21 * n * n + 45 * n - 35) / d33(n); }},
    {p5_2_1,
     [](double n) {
       return -24 * (n - 2) * (n * n - 4 * n + 7) / ((n - 1) * (n - 1) * n * n * n);
     }},
    {p7_1, [](double n) { return -8 / (n * n * n); }},
    {p2_2_2_2,
     [](double n) {
       return (n - 3) * (n - 2) * (n * n * n * n - 4 * n * n * n + 18 * n * n - 60 * n + 105) /
              d33(n);
     }},
    {p3_3_2,
     [](double n) { return -8 * (n - 2) * (3 * n * n * n - 15 * n * n + 35 * n - 35) / d33(n); }},
    {p4_4,
     [](double n) {
       return (3 * n * n * n * n - 12 * n * n * n + 42 * n * n - 60 * n + 35) / d33(n);
     }},
    {p4_2_2,
     [](double n) {
       return 6 * (n - 2) * (n * n * n * n - 4 * n * n * n + 16 * n * n - 40 * n + 35) / d33(n);
     }},
    {p5_3,
     [](double n) { return -8 * (3 * n * n - 6 * n + 7) / ((n - 1) * (n - 1) * n * n * n); }},
    {p6_2, [](double n) { return 4 * (n * n - 2 * n + 7) / ((n - 1) * n * n * n); }},
    {p8, [](double n) { return 1 / (n * n * n); }},
}};

}  // namespace

std::span<const RationalTerm> second_moment_terms() { return kSecond; }
std::span<const RationalTerm> sixth_moment_terms() { return kSixth; }
std::span<const RationalTerm> eighth_moment_terms() { return kEighth; }

double evaluate(std::span<const RationalTerm> terms, const SymmetricMomentTable& table,
                std::size_t n) {
  const auto nd = static_cast<double>(n);
  CompensatedSum s;
  for (const auto& t : terms) s.add(t.coefficient(nd) * table.at(t.pattern));
  return s.value();
}

}  // namespace svar
