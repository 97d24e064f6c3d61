#include "gtbounds/infomath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gtbounds/errors.hpp"

namespace gtbounds {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr long long kExactLogBinomialLimit = 64;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

Distribution::Distribution(int offset, std::vector<double> probs)
    : offset_(offset), probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("distribution needs at least one support point");
  double total = 0.0;
  for (double x : probs_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("distribution entries must be finite and >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw DomainError("distribution sums to " + std::to_string(total) + ", not 1");
  }
}

Distribution Distribution::normalized(int offset, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("weights must have positive total");
  for (double& w : weights) w /= total;
  return Distribution(offset, std::move(weights));
}

Distribution Distribution::point_mass(int value) { return Distribution(value, {1.0}); }

Distribution Distribution::bernoulli(double prob_one) {
  if (!(prob_one >= 0.0 && prob_one <= 1.0)) throw ParameterError("Bernoulli parameter must lie in [0, 1]");
  return Distribution(0, {1.0 - prob_one, prob_one});
}

double Distribution::operator()(int value) const {
  if (value < offset_ || value > max_support()) return 0.0;
  return probs_[static_cast<std::size_t>(value - offset_)];
}

double Distribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) m += probs_[i] * (offset_ + static_cast<double>(i));
  return m;
}

double log_binomial_coefficient(long long n, long long r) {
  if (r < 0 || r > n) return -std::numeric_limits<double>::infinity();
  const long long s = std::min(r, n - r);
  if (s <= kExactLogBinomialLimit) {
    double acc = 0.0;
    for (long long i = 0; i < s; ++i) {
      acc += std::log(static_cast<double>(n - i) / static_cast<double>(i + 1));
    }
    return acc;
  }
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

double binary_entropy(double x) { return -xlogx(x) - xlogx(1.0 - x); }

Distribution binomial_pmf(const BinomialSpec& spec) {
  const int n = spec.trials;
  const double q = spec.success_prob;
  if (n < 0) throw DomainError("binomial trials must be >= 0");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("binomial success probability must lie in [0, 1]");

  std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
  if (q == 0.0) {
    probs.front() = 1.0;
    return Distribution(0, std::move(probs));
  }
  if (q == 1.0) {
    probs.back() = 1.0;
    return Distribution(0, std::move(probs));
  }
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  std::vector<double> logs(probs.size());
  for (int i = 0; i <= n; ++i) {
    logs[static_cast<std::size_t>(i)] = log_binomial_coefficient(n, i) + i * log_q + (n - i) * log_1mq;
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::exp(logs[i] - peak);
  return Distribution::normalized(0, std::move(probs));
}

Distribution hypergeometric_pmf(const HypergeometricSpec& spec) {
  const int draws = spec.draws;
  const int specials = spec.specials;
  const int population = spec.population;
  if (draws < 0 || specials < 0 || population < 0 || specials > population || draws > population) {
    throw DomainError("infeasible hypergeometric spec (draws=" + std::to_string(draws) + ", specials=" +
                      std::to_string(specials) + ", population=" + std::to_string(population) + ")");
  }
  const int lo = std::max(0, draws - (population - specials));
  const int hi = std::min(draws, specials);
  const double log_total = log_binomial_coefficient(population, draws);

  std::vector<double> probs(static_cast<std::size_t>(draws) + 1, 0.0);
  for (int i = lo; i <= hi; ++i) {
    probs[static_cast<std::size_t>(i)] =
        std::exp(log_binomial_coefficient(specials, i) +
                 log_binomial_coefficient(population - specials, draws - i) - log_total);
  }
  return Distribution::normalized(0, std::move(probs));
}

double tv_distance(const Distribution& p, const Distribution& q) {
  const int lo = std::min(p.min_support(), q.min_support());
  const int hi = std::max(p.max_support(), q.max_support());
  double acc = 0.0;
  for (int v = lo; v <= hi; ++v) acc += std::abs(p(v) - q(v));
  return std::min(1.0, 0.5 * acc);
}

double entropy(const Distribution& p) {
  double h = 0.0;
  for (double x : p.probs()) h -= xlogx(x);
  return std::max(0.0, h);
}

double kl_divergence(const Distribution& p, const Distribution& q) {
  double acc = 0.0;
  for (int v = p.min_support(); v <= p.max_support(); ++v) {
    const double pv = p(v);
    if (pv <= 0.0) continue;
    const double qv = q(v);
    if (qv <= 0.0) return std::numeric_limits<double>::infinity();
    acc += pv * std::log(pv / qv);
  }
  return std::max(0.0, acc);
}

double mutual_information(const Distribution& input, std::span<const double> prob_one) {
  if (input.min_support() < 0 || input.max_support() >= static_cast<int>(prob_one.size())) {
    throw DomainError("input support exceeds the channel's input alphabet");
  }
  double marginal_one = 0.0;
  double conditional_entropy = 0.0;
  for (int x = input.min_support(); x <= input.max_support(); ++x) {
    const double px = input(x);
    if (px <= 0.0) continue;
    const double w = prob_one[static_cast<std::size_t>(x)];
    marginal_one += px * w;
    conditional_entropy += px * binary_entropy(w);
  }
  return std::max(0.0, binary_entropy(std::min(1.0, marginal_one)) - conditional_entropy);
}

double conditional_mi(const Channel& channel, int ell, const Distribution& dif, const Distribution& eq) {
  const int k = channel.k();
  if (ell < 1 || ell > k) throw DomainError("ell must lie in 1..k");
  if (dif.min_support() < 0 || dif.max_support() > ell || eq.min_support() < 0 ||
      eq.max_support() > k - ell) {
    throw DomainError("supports overflow the channel range (v_dif + v_eq > k)");
  }
  const auto table = channel.table();
  double acc = 0.0;
  for (int v_eq = eq.min_support(); v_eq <= eq.max_support(); ++v_eq) {
    const double weight = eq(v_eq);
    if (weight <= 0.0) continue;
    acc += weight * mutual_information(dif, table.subspan(static_cast<std::size_t>(v_eq)));
  }
  return acc;
}

double conditional_mi_bernoulli_design(const Channel& channel, int ell, double nu) {
  const int k = channel.k();
  if (!(nu >= 0.0 && nu <= k)) throw ParameterError("nu must lie in [0, k]");
  const double prob = std::min(1.0, nu / k);
  return conditional_mi(channel, ell, binomial_pmf({ell, prob}), binomial_pmf({k - ell, prob}));
}

}  // namespace gtbounds
