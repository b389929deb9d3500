#include "svar/process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "svar/compensated_sum.hpp"
#include "svar/error.hpp"

namespace svar {
namespace {

constexpr double kProbabilityTol = 1e-12;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void check_probabilities(std::span<const double> probs, const char* what) {
  CompensatedSum total;
  for (double p : probs) {
    if (!(p >= 0.0)) throw DomainError(std::string(what) + ": negative probability");
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > kProbabilityTol) {
    throw DomainError(std::string(what) + ": probabilities sum to " +
                      std::to_string(total.value()) + ", not 1");
  }
}

void validate_iid(const Iid& m) {
  if (m.raw_moments.size() < 2) throw DomainError("iid: need at least mu_1 and mu_2");
  for (double v : m.raw_moments) {
    if (!std::isfinite(v)) throw DomainError("iid: non-finite raw moment");
  }
  const double mu1 = m.raw_moments[0];
  if (m.raw_moments[1] < mu1 * mu1 - 1e-12 * std::max(1.0, mu1 * mu1)) {
    throw DomainError("iid: mu_2 < mu_1^2");
  }
}

std::vector<double> lag_table(const GaussianStationary& m, std::size_t n) {
  if (!std::isfinite(m.mean)) throw DomainError("gaussian-stationary: mean must be finite");
  if (!m.autocovariance) throw DomainError("gaussian-stationary: missing autocovariance");
  std::vector<double> lags(std::max<std::size_t>(n, 1));
  for (std::size_t h = 0; h < lags.size(); ++h) lags[h] = m.autocovariance(h);
  if (!(lags[0] > 0.0)) throw DomainError("gaussian-stationary: gamma(0) must be > 0");
  for (std::size_t h = 1; h < lags.size(); ++h) {
    if (!std::isfinite(lags[h]) || std::abs(lags[h]) > lags[0] * (1.0 + 1e-12)) {
      throw DomainError("gaussian-stationary: |gamma(" + std::to_string(h) + ")| > gamma(0)");
    }
  }
  return lags;
}

void validate_finite(const FiniteJoint& m) {
  if (m.atoms.empty()) throw DomainError("finite-joint: no atoms");
  std::vector<double> probs;
  probs.reserve(m.atoms.size());
  for (const auto& a : m.atoms) {
    if (a.values.size() != m.n) throw DomainError("finite-joint: atom length differs from n");
    probs.push_back(a.probability);
  }
  check_probabilities(probs, "finite-joint");
}

// Recursive perfect-matching sum. `pos` holds up to 8 positions; `used` is a bitmask.
double pair_sum(const std::array<std::size_t, kMaxMomentOrder>& pos, std::size_t count,
                unsigned used, std::span<const double> lags) {
  std::size_t first = 0;
  while (first < count && (used & (1u << first))) ++first;
  if (first == count) return 1.0;
  double total = 0.0;
  const unsigned with_first = used | (1u << first);
  for (std::size_t j = first + 1; j < count; ++j) {
    if (with_first & (1u << j)) continue;
    const std::size_t lag = pos[first] > pos[j] ? pos[first] - pos[j] : pos[j] - pos[first];
    const double g = lags[lag];
    if (g == 0.0) continue;
    total += g * pair_sum(pos, count, with_first | (1u << j), lags);
  }
  return total;
}

}  // namespace

double isserlis(std::span<const std::size_t> positions, std::span<const double> lags) {
  if (positions.size() > static_cast<std::size_t>(kMaxMomentOrder)) {
    throw DomainError("isserlis: more than 8 factors");
  }
  if (positions.size() % 2 != 0) return 0.0;
  std::array<std::size_t, kMaxMomentOrder> pos{};
  std::copy(positions.begin(), positions.end(), pos.begin());
  return pair_sum(pos, positions.size(), 0u, lags);
}

// MomentEvaluator --------------------------------------------------------------

MomentEvaluator::MomentEvaluator(const ProcessModel& model, std::size_t n) : kind_(Kind::iid), n_(n) {
  validate(model, n);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Iid>) {
          kind_ = Kind::iid;
          raw_moments_ = m.raw_moments;
        } else if constexpr (std::is_same_v<T, GaussianStationary>) {
          kind_ = Kind::gaussian;
          lags_ = lag_table(m, n);
          mean_ = m.mean;
        } else {
          kind_ = Kind::finite;
          const std::size_t atoms = m.atoms.size();
          columns_.resize(n * atoms);
          probabilities_.resize(atoms);
          for (std::size_t a = 0; a < atoms; ++a) {
            probabilities_[a] = m.atoms[a].probability;
            for (std::size_t i = 0; i < n; ++i) columns_[i * atoms + a] = m.atoms[a].values[i];
          }
        }
      },
      model);
}

double MomentEvaluator::operator()(std::span<const std::size_t> positions,
                                   std::span<const int> exponents) const {
  switch (kind_) {
    case Kind::iid: {
      double r = 1.0;
      for (int e : exponents) {
        if (e < 1 || static_cast<std::size_t>(e) > raw_moments_.size()) {
          throw DomainError("iid: raw moment of order " + std::to_string(e) + " not supplied");
        }
        r *= raw_moments_[static_cast<std::size_t>(e) - 1];
      }
      return r;
    }
    case Kind::gaussian:
      return gaussian_moment(positions, exponents);
    case Kind::finite:
      return finite_moment(positions, exponents);
  }
  return 0.0;
}

double MomentEvaluator::gaussian_moment(std::span<const std::size_t> positions,
                                        std::span<const int> exponents) const {
  std::array<std::size_t, kMaxMomentOrder> expanded{};
  if (mean_ == 0.0) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      for (int r = 0; r < exponents[k]; ++r) expanded[count++] = positions[k];
    }
    return isserlis(std::span<const std::size_t>(expanded.data(), count), lags_);
  }
  // (mu + Y)^e expanded binomially; keep[k] copies of the centred Y at position k
  std::array<int, kMaxMomentOrder> keep{};
  double total = 0.0;
  while (true) {
    std::size_t count = 0;
    double coefficient = 1.0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      coefficient *= binomial(exponents[k], keep[k]) * int_pow(mean_, exponents[k] - keep[k]);
      for (int r = 0; r < keep[k]; ++r) expanded[count++] = positions[k];
    }
    if (count % 2 == 0) total += coefficient * isserlis(std::span<const std::size_t>(expanded.data(), count), lags_);
    std::size_t d = 0;
    while (d < positions.size() && ++keep[d] > exponents[d]) keep[d++] = 0;
    if (d == positions.size()) break;
  }
  return total;
}

double MomentEvaluator::finite_moment(std::span<const std::size_t> positions,
                                      std::span<const int> exponents) const {
  const std::size_t atoms = probabilities_.size();
  CompensatedSum total;
  for (std::size_t a = 0; a < atoms; ++a) {
    double v = probabilities_[a];
    for (std::size_t k = 0; k < positions.size(); ++k) {
      v *= int_pow(columns_[positions[k] * atoms + a], exponents[k]);
    }
    total.add(v);
  }
  return total.value();
}

// Free functions ---------------------------------------------------------------

void validate(const ProcessModel& model, std::size_t n) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Iid>) {
          validate_iid(m);
        } else if constexpr (std::is_same_v<T, GaussianStationary>) {
          (void)lag_table(m, n);
        } else {
          validate_finite(m);
          if (n != m.n) {
            throw DomainError("finite-joint: model has n = " + std::to_string(m.n) +
                              ", requested n = " + std::to_string(n));
          }
        }
      },
      model);
}

double joint_moment(const ProcessModel& model, std::span<const IndexPower> factors, std::size_t n) {
  int order = 0;
  std::vector<std::size_t> positions;
  std::vector<int> exponents;
  for (const auto& f : factors) {
    if (f.index < 1 || f.index > n) {
      throw DomainError("joint_moment: index " + std::to_string(f.index) + " outside 1.." +
                        std::to_string(n));
    }
    if (f.exponent < 1) throw DomainError("joint_moment: exponents must be positive");
    order += f.exponent;
    if (std::find(positions.begin(), positions.end(), f.index - 1) != positions.end()) {
      throw DomainError("joint_moment: repeated index " + std::to_string(f.index));
    }
    positions.push_back(f.index - 1);
    exponents.push_back(f.exponent);
  }
  if (order > kMaxMomentOrder) {
    throw DomainError("joint_moment: total exponent " + std::to_string(order) +
                      " exceeds supported order 8");
  }
  const MomentEvaluator eval(model, n);
  return eval(positions, exponents);
}

double joint_moment(const ProcessModel& model, std::span<const IndexPower> factors) {
  std::size_t n = 0;
  if (const auto* f = std::get_if<FiniteJoint>(&model)) {
    n = f->n;
  } else {
    for (const auto& fp : factors) n = std::max(n, fp.index);
  }
  return joint_moment(model, factors, n);
}

Iid iid_normal(double sigma, double mean) {
  if (!(sigma >= 0.0)) throw DomainError("iid_normal: sigma must be >= 0");
  // central moments of N(0, sigma^2): (k-1)!! sigma^k for even k
  std::array<double, kMaxMomentOrder + 1> central{};
  central[0] = 1.0;
  for (int k = 2; k <= kMaxMomentOrder; k += 2) central[k] = central[k - 2] * (k - 1) * sigma * sigma;
  Iid out;
  out.raw_moments.resize(kMaxMomentOrder);
  for (int k = 1; k <= kMaxMomentOrder; ++k) {
    double v = 0.0;
    for (int j = 0; j <= k; ++j) v += binomial(k, j) * int_pow(mean, k - j) * central[j];
    out.raw_moments[k - 1] = v;
  }
  return out;
}

Iid iid_discrete(std::span<const double> values, std::span<const double> probabilities) {
  if (values.size() != probabilities.size() || values.empty()) {
    throw DomainError("iid_discrete: values and probabilities must be non-empty and equal length");
  }
  check_probabilities(probabilities, "iid_discrete");
  Iid out;
  out.raw_moments.resize(kMaxMomentOrder);
  for (int k = 1; k <= kMaxMomentOrder; ++k) {
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i) s.add(probabilities[i] * int_pow(values[i], k));
    out.raw_moments[k - 1] = s.value();
  }
  return out;
}

Iid iid_rademacher() {
  const std::array<double, 2> v{-1.0, 1.0};
  const std::array<double, 2> p{0.5, 0.5};
  return iid_discrete(v, p);
}

GaussianStationary gaussian_ar1(double phi, double innovation_sd) {
  if (!(std::abs(phi) < 1.0)) throw DomainError("gaussian_ar1: |phi| must be < 1");
  if (!(innovation_sd > 0.0)) throw DomainError("gaussian_ar1: innovation_sd must be > 0");
  const double var = innovation_sd * innovation_sd / (1.0 - phi * phi);
  GaussianStationary g;
  g.autocovariance = [var, phi](std::size_t h) { return var * std::pow(phi, static_cast<double>(h)); };
  return g;
}

GaussianStationary gaussian_from_autocovariance(std::vector<double> gamma) {
  if (gamma.empty()) throw DomainError("gaussian-stationary: empty autocovariance");
  GaussianStationary g;
  g.autocovariance = [gamma = std::move(gamma)](std::size_t h) {
    return h < gamma.size() ? gamma[h] : 0.0;
  };
  return g;
}

FiniteJoint iid_finite_joint(std::span<const double> values, std::span<const double> probabilities,
                             std::size_t n) {
  const std::size_t k = values.size();
  if (k == 0 || k != probabilities.size()) {
    throw DomainError("iid_finite_joint: values and probabilities must be non-empty and equal length");
  }
  check_probabilities(probabilities, "iid_finite_joint");
  const std::vector<std::vector<double>> transition(k, std::vector<double>(probabilities.begin(),
                                                                          probabilities.end()));
  return markov_to_finite_joint(values, transition, probabilities, n);
}

FiniteJoint constant_process(double value, std::size_t n) {
  if (n == 0) throw DomainError("constant_process: n must be >= 1");
  FiniteJoint f;
  f.n = n;
  f.atoms.push_back(Atom{std::vector<double>(n, value), 1.0});
  return f;
}

FiniteJoint markov_to_finite_joint(std::span<const double> states,
                                   const std::vector<std::vector<double>>& transition,
                                   std::span<const double> initial, std::size_t n) {
  const std::size_t k = states.size();
  if (k == 0 || n == 0) throw DomainError("markov: need at least one state and n >= 1");
  if (transition.size() != k || initial.size() != k) {
    throw DomainError("markov: transition must be k x k and initial of length k");
  }
  for (const auto& row : transition) {
    if (row.size() != k) throw DomainError("markov: transition must be square");
    check_probabilities(row, "markov transition row");
  }
  check_probabilities(initial, "markov initial distribution");

  double paths = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    paths *= static_cast<double>(k);
    if (paths > static_cast<double>(kMaxFiniteAtoms)) {
      throw SupportExplosion("markov: " + std::to_string(k) + "^" + std::to_string(n) +
                             " paths exceed the cap of 1e7");
    }
  }
  const auto count = static_cast<std::size_t>(paths);

  FiniteJoint out;
  out.n = n;
  out.atoms.reserve(count);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t p = 0; p < count; ++p) {
    Atom atom;
    atom.values.resize(n);
    double prob = initial[digits[0]];
    atom.values[0] = states[digits[0]];
    for (std::size_t t = 1; t < n; ++t) {
      prob *= transition[digits[t - 1]][digits[t]];
      atom.values[t] = states[digits[t]];
    }
    atom.probability = prob;
    if (prob > 0.0) out.atoms.push_back(std::move(atom));
    // odometer, last coordinate fastest
    for (std::size_t t = n; t-- > 0;) {
      if (++digits[t] < k) break;
      digits[t] = 0;
    }
  }
  return out;
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  const std::size_t k = transition.size();
  if (k == 0) throw DomainError("stationary_distribution: empty matrix");
  std::vector<double> pi(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k);
  for (int iter = 0; iter < 100000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (transition[i].size() != k) throw DomainError("stationary_distribution: not square");
      for (std::size_t j = 0; j < k; ++j) next[j] += pi[i] * transition[i][j];
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < k; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
    pi.swap(next);
    if (diff < 1e-16) break;
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= total;
  return pi;
}

ProcessModel shifted(const ProcessModel& model, double c) {
  return std::visit(
      [c](const auto& m) -> ProcessModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Iid>) {
          Iid out;
          out.raw_moments.resize(m.raw_moments.size());
          // E[(X+c)^k] = sum_j C(k,j) c^(k-j) E[X^j]
          for (std::size_t k = 1; k <= m.raw_moments.size(); ++k) {
            double v = int_pow(c, static_cast<int>(k));
            for (std::size_t j = 1; j <= k; ++j) {
              v += binomial(static_cast<int>(k), static_cast<int>(j)) *
                   int_pow(c, static_cast<int>(k - j)) * m.raw_moments[j - 1];
            }
            out.raw_moments[k - 1] = v;
          }
          return out;
        } else if constexpr (std::is_same_v<T, GaussianStationary>) {
          GaussianStationary out = m;
          out.mean += c;
          return out;
        } else {
          FiniteJoint out = m;
          for (auto& a : out.atoms)
            for (double& v : a.values) v += c;
          return out;
        }
      },
      model);
}

ProcessModel scaled(const ProcessModel& model, double c) {
  return std::visit(
      [c](const auto& m) -> ProcessModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Iid>) {
          Iid out = m;
          for (std::size_t k = 1; k <= out.raw_moments.size(); ++k) {
            out.raw_moments[k - 1] *= int_pow(c, static_cast<int>(k));
          }
          return out;
        } else if constexpr (std::is_same_v<T, GaussianStationary>) {
          GaussianStationary out;
          out.mean = c * m.mean;
          out.autocovariance = [inner = m.autocovariance, c2 = c * c](std::size_t h) {
            return c2 * inner(h);
          };
          return out;
        } else {
          FiniteJoint out = m;
          for (auto& a : out.atoms)
            for (double& v : a.values) v *= c;
          return out;
        }
      },
      model);
}

std::vector<std::vector<double>> covariance_matrix(const ProcessModel& model, std::size_t n) {
  validate(model, n);
  std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Iid>) {
          const double var = m.raw_moments[1] - m.raw_moments[0] * m.raw_moments[0];
          for (std::size_t i = 0; i < n; ++i) cov[i][i] = var;
        } else if constexpr (std::is_same_v<T, GaussianStationary>) {
          const auto lags = lag_table(m, n);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cov[i][j] = lags[i > j ? i - j : j - i];
        } else {
          std::vector<double> mean(n, 0.0);
          for (const auto& a : m.atoms)
            for (std::size_t i = 0; i < n; ++i) mean[i] += a.probability * a.values[i];
          for (const auto& a : m.atoms)
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j)
                cov[i][j] += a.probability * (a.values[i] - mean[i]) * (a.values[j] - mean[j]);
        }
      },
      model);
  return cov;
}

}  // namespace svar
