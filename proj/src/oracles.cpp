#include "svar/oracles.hpp"

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <cmath>
#include <random>
#include <string>

#include "svar/compensated_sum.hpp"
#include "svar/error.hpp"

namespace svar {
namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i][k];
      for (std::size_t j = 0; j < n; ++j) out[i][j] += aik * b[k][j];
    }
  return out;
}

double trace(const Matrix& m) {
  CompensatedSum s;
  for (std::size_t i = 0; i < m.size(); ++i) s.add(m[i][i]);
  return s.value();
}

struct BatchRange {
  std::size_t begin;
  std::size_t end;
};

std::vector<BatchRange> batches(std::size_t draws) {
  const std::size_t count = std::min(kMonteCarloBatches, draws);
  std::vector<BatchRange> out(count);
  const std::size_t base = draws / count;
  const std::size_t extra = draws % count;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < count; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    out[b] = {pos, pos + len};
    pos += len;
  }
  return out;
}

void simulate_batch(const Ar1Spec& spec, std::uint64_t seed, std::size_t batch, BatchRange range,
                    std::vector<double>& out) {
  std::mt19937_64 rng(stream_seed(seed, batch));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double stationary_sd = spec.innovation_sd / std::sqrt(1.0 - spec.phi * spec.phi);
  std::vector<double> path(spec.n);
  for (std::size_t d = range.begin; d < range.end; ++d) {
    double x = stationary_sd * normal(rng);
    path[0] = x;
    for (std::size_t t = 1; t < spec.n; ++t) {
      x = spec.phi * x + spec.innovation_sd * normal(rng);
      path[t] = x;
    }
    out[d] = sample_variance(path);
  }
}

}  // namespace

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw InsufficientSampleSize("sample variance needs n >= 2");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

ExactLaw exact_law(const FiniteJoint& model, Execution execution) {
  validate(ProcessModel{model}, model.n);
  if (model.atoms.size() > kMaxFiniteAtoms) {
    throw SupportExplosion("exact_law: " + std::to_string(model.atoms.size()) +
                           " atoms exceed the cap of 1e7");
  }
  if (model.n < 2) throw InsufficientSampleSize("exact_law: s^2 needs n >= 2");

  std::vector<std::pair<double, double>> values(model.atoms.size());
  const auto count = static_cast<long long>(values.size());
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long a = 0; a < count; ++a) {
      const auto& atom = model.atoms[static_cast<std::size_t>(a)];
      values[static_cast<std::size_t>(a)] = {sample_variance(atom.values), atom.probability};
    }
  } else {
    for (long long a = 0; a < count; ++a) {
      const auto& atom = model.atoms[static_cast<std::size_t>(a)];
      values[static_cast<std::size_t>(a)] = {sample_variance(atom.values), atom.probability};
    }
  }
  std::sort(values.begin(), values.end());

  ExactLaw law;
  law.n = model.n;
  std::size_t i = 0;
  while (i < values.size()) {
    const double anchor = values[i].first;
    CompensatedSum p;
    while (i < values.size() && values[i].first - anchor <= kLawMergeTol) p.add(values[i++].second);
    law.atoms.emplace_back(anchor, p.value());
  }
  return law;
}

CumulantSet exact_cumulants(const ExactLaw& law) {
  CompensatedSum mean_acc;
  for (const auto& [v, p] : law.atoms) mean_acc.add(p * v);
  const double mean = mean_acc.value();
  CompensatedSum c2, c3, c4;
  for (const auto& [v, p] : law.atoms) {
    const double d = v - mean;
    c2.add(p * d * d);
    c3.add(p * d * d * d);
    c4.add(p * d * d * d * d);
  }
  CumulantSet out;
  out.n = law.n;
  out.engine = Engine::exact;
  out.order = 4;
  out.k = {mean, c2.value(), c3.value(), c4.value() - 3.0 * c2.value() * c2.value()};
  return out;
}

CumulantSet gaussian_quadratic_form_cumulants(const Matrix& covariance) {
  const std::size_t n = covariance.size();
  if (n < 2) throw InsufficientSampleSize("quadratic form cumulants need n >= 2");
  for (const auto& row : covariance) {
    if (row.size() != n) throw DomainError("covariance matrix is not square");
  }
  Matrix bs(n, std::vector<double>(n, 0.0));
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> col_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) col_mean[j] += covariance[i][j] * inv_n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) bs[i][j] = covariance[i][j] - col_mean[j];

  const double dof = static_cast<double>(n - 1);
  CumulantSet out;
  out.n = n;
  out.engine = Engine::exact;
  out.order = 4;
  Matrix power = bs;
  double factor = 1.0;  // 2^{r-1} (r-1)!
  for (int r = 1; r <= 4; ++r) {
    if (r > 1) {
      power = multiply(power, bs);
      factor *= 2.0 * (r - 1);
    }
    out.k[static_cast<std::size_t>(r) - 1] = factor * trace(power) / std::pow(dof, r);
  }
  return out;
}

GammaReference gamma_reference(std::size_t n, double sigma, double x) {
  if (n < 2) throw DomainError("gamma_reference: n must be >= 2");
  if (!(sigma > 0.0)) throw DomainError("gamma_reference: sigma must be > 0");
  if (!(x >= 0.0)) throw DomainError("gamma_reference: x must be >= 0");
  const double dof = static_cast<double>(n - 1);
  const boost::math::gamma_distribution<double> dist(dof / 2.0, 2.0 * sigma * sigma / dof);
  GammaReference out;
  if (x == 0.0 && dof < 2.0) {
    out.density = std::numeric_limits<double>::infinity();
  } else {
    out.density = boost::math::pdf(dist, x);
  }
  out.cdf = boost::math::cdf(dist, x);
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::array<double, 4> k_statistics(std::span<const double> xs) {
  const std::size_t count = xs.size();
  if (count < 4) throw InsufficientSampleSize("k-statistics need at least 4 values");
  CompensatedSum s1;
  for (double x : xs) s1.add(x);
  const double n = static_cast<double>(count);
  const double mean = s1.value() / n;
  CompensatedSum c2, c3, c4;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    c2.add(d2);
    c3.add(d2 * d);
    c4.add(d2 * d2);
  }
  const double S2 = c2.value();
  const double S3 = c3.value();
  const double S4 = c4.value();
  // Fisher's k-statistics in central power sums (the first power sum is zero).
  return {mean, S2 / (n - 1), n * S3 / ((n - 1) * (n - 2)),
          (n * (n + 1) * S4 - 3 * (n - 1) * S2 * S2) / ((n - 1) * (n - 2) * (n - 3))};
}

std::vector<double> simulate_ar1_variances(const Ar1Spec& spec, std::size_t draws,
                                           std::uint64_t seed, Execution execution) {
  if (!(std::abs(spec.phi) < 1.0)) throw DomainError("simulate_ar1: |phi| must be < 1");
  if (!(spec.innovation_sd > 0.0)) throw DomainError("simulate_ar1: innovation_sd must be > 0");
  if (spec.n < 2) throw InsufficientSampleSize("simulate_ar1: n must be >= 2");
  if (draws < kMinDraws) throw DomainError("simulate_ar1: draws must be >= 10000");

  const auto ranges = batches(draws);
  std::vector<double> out(draws);
  const auto count = static_cast<long long>(ranges.size());
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long b = 0; b < count; ++b) {
      simulate_batch(spec, seed, static_cast<std::size_t>(b), ranges[static_cast<std::size_t>(b)], out);
    }
  } else {
    for (long long b = 0; b < count; ++b) {
      simulate_batch(spec, seed, static_cast<std::size_t>(b), ranges[static_cast<std::size_t>(b)], out);
    }
  }
  return out;
}

MCSummary simulate_ar1(const Ar1Spec& spec, std::size_t draws, std::uint64_t seed, std::size_t bins,
                       Execution execution) {
  if (bins < 1) throw DomainError("simulate_ar1: bins must be >= 1");
  const auto values = simulate_ar1_variances(spec, draws, seed, execution);

  MCSummary out;
  out.draws = draws;
  out.n = spec.n;
  out.seed = seed;
  out.k = k_statistics(values);

  const auto ranges = batches(draws);
  std::vector<std::array<double, 4>> per_batch;
  per_batch.reserve(ranges.size());
  for (const auto& r : ranges) {
    per_batch.push_back(k_statistics(std::span<const double>(values).subspan(r.begin, r.end - r.begin)));
  }
  const double batches_d = static_cast<double>(per_batch.size());
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0;
    for (const auto& b : per_batch) mean += b[c];
    mean /= batches_d;
    double ss = 0.0;
    for (const auto& b : per_batch) ss += (b[c] - mean) * (b[c] - mean);
    out.se[c] = std::sqrt(ss / (batches_d - 1.0) / batches_d);
  }

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  out.histogram.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    out.histogram.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    counts[std::min(idx, bins - 1)]++;
  }
  out.histogram.masses.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.histogram.masses[b] = static_cast<double>(counts[b]) / static_cast<double>(draws);
  }
  return out;
}

}  // namespace svar
