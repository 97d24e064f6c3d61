#include "gtbounds/approx_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gtbounds/errors.hpp"
#include "gtbounds/infomath.hpp"
#include "gtbounds/rng.hpp"

namespace gtbounds {

namespace {

constexpr double kSlack = 1e-12;

void check_sizes(long long p, int k, int ell) {
  if (k < 1 || ell < 1 || ell > k || k >= p) throw DomainError("require 1 <= ell <= k < p");
}

}  // namespace

double soon_bound_eq(int k, int ell, long long p) {
  check_sizes(p, k, ell);
  return std::max(0.0, static_cast<double>(k - ell - 1) / static_cast<double>(p - 1));
}

double soon_bound_dif(int ell, int k, long long p) {
  check_sizes(p, k, ell);
  const long long denom = p - k + ell - 1;
  if (denom < 1) throw DomainError("require p - k + ell >= 2");
  return std::max(0.0, static_cast<double>(ell - 1) / static_cast<double>(denom));
}

double roos_constant() {
  return std::pow(2.0 * std::numbers::pi, 0.25) * std::exp(1.0 / 24.0) / std::numbers::sqrt2;
}

RoosParams roos_params(int ell, double delta_gap) {
  if (ell < 1) throw DomainError("ell must be >= 1");
  return {delta_gap, ell, delta_gap * delta_gap * ell * (ell + 2), roos_constant()};
}

double roos_bound(int ell, double delta_gap) {
  const auto params = roos_params(ell, delta_gap);
  const double eta = params.eta_roos;
  const double value = params.c_const * std::sqrt(eta) * (1.0 + std::sqrt(2.0 * eta)) * std::exp(2.0 * eta);
  return std::min(1.0, value);
}

double binomial_gap(long long p, int k, int ell, int m, int v_eq) {
  const double pd = static_cast<double>(p);
  return m / pd - (m - v_eq) / static_cast<double>(p - k + ell);
}

double combined_dif_bound(long long p, int k, int ell, int m, int v_eq) {
  return std::min(1.0, soon_bound_dif(ell, k, p) + roos_bound(ell, std::abs(binomial_gap(p, k, ell, m, v_eq))));
}

std::vector<TvBoundReport> verify_tv_chain(long long p, int k, int ell, int m, int v_eq) {
  check_sizes(p, k, ell);
  if (m < 0 || m > p) throw DomainError("require 0 <= m <= p");
  if (v_eq < 0 || v_eq > std::min(k - ell, m)) throw DomainError("require 0 <= v_eq <= min(k - ell, m)");
  const long long hidden_population = p - k + ell;
  if (m - v_eq > hidden_population) throw DomainError("m - v_eq exceeds the hidden population p - k + ell");

  auto report = [&](std::string step, double exact, double bound) {
    TvBoundReport r;
    r.step = std::move(step);
    r.exact_tv = exact;
    r.bound = bound;
    r.p = p;
    r.k = k;
    r.ell = ell;
    r.m = m;
    r.v_eq = v_eq;
    r.satisfied = exact <= bound + kSlack;
    return r;
  };

  std::vector<TvBoundReport> out;
  const int revealed = k - ell;
  const auto pi = static_cast<int>(p);
  {
    const auto hg = hypergeometric_pmf({revealed, m, pi});
    const auto bin = binomial_pmf({revealed, m / static_cast<double>(p)});
    out.push_back(report("revealed", tv_distance(hg, bin), soon_bound_eq(k, ell, p)));
  }
  const double hidden_prob = (m - v_eq) / static_cast<double>(hidden_population);
  const auto hidden_bin = binomial_pmf({ell, hidden_prob});
  {
    const auto hg = hypergeometric_pmf({ell, m - v_eq, static_cast<int>(hidden_population)});
    out.push_back(report("hidden", tv_distance(hg, hidden_bin), soon_bound_dif(ell, k, p)));
  }
  {
    const auto target = binomial_pmf({ell, m / static_cast<double>(p)});
    const double gap = std::abs(binomial_gap(p, k, ell, m, v_eq));
    out.push_back(report("binomial-gap", tv_distance(hidden_bin, target), roos_bound(ell, gap)));
  }
  return out;
}

TvGridSummary verify_tv_grid(const std::vector<long long>& ps, int k_lo, int k_hi) {
  TvGridSummary summary;
  for (long long p : ps) {
    for (int k = k_lo; k <= k_hi; ++k) {
      for (int ell = 1; ell <= k; ++ell) {
        for (long long m_ll : {0LL, p / 4, p / 2}) {
          const int m = static_cast<int>(m_ll);
          for (int v_eq = 0; v_eq <= std::min(k - ell, m); ++v_eq) {
            for (auto& r : verify_tv_chain(p, k, ell, m, v_eq)) {
              if (!r.satisfied) ++summary.violations;
              if (r.bound > 0.0) summary.worst_ratio = std::max(summary.worst_ratio, r.exact_tv / r.bound);
              summary.reports.push_back(std::move(r));
            }
          }
        }
      }
    }
  }
  return summary;
}

double mi_perturb_bound_eq(double delta1) {
  if (!(delta1 >= 0.0 && delta1 <= 1.0)) throw ParameterError("delta1 must lie in [0, 1]");
  return delta1 * std::numbers::ln2;
}

double mi_perturb_bound_dif(double delta2) {
  if (!(delta2 >= 0.0 && delta2 <= 1.0)) throw ParameterError("delta2 must lie in [0, 1]");
  if (delta2 == 0.0) return 0.0;
  return delta2 * std::log(4.0 / delta2);
}

double binary_entropy_continuity_bound(double l1_distance) {
  if (!(l1_distance >= 0.0 && l1_distance <= 0.5)) {
    throw ParameterError("entropy continuity bound needs L1 distance in [0, 1/2]");
  }
  if (l1_distance == 0.0) return 0.0;
  return l1_distance * std::log(2.0 / l1_distance);
}

namespace {

std::vector<double> random_weights(std::size_t size, CounterRng& rng, bool sparse) {
  std::vector<double> w(size);
  for (auto& x : w) {
    x = -std::log1p(-rng.uniform());
    if (sparse && rng.uniform() < 0.5) x = 0.0;
  }
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[rng.below(size)] = 1.0;
  return w;
}

std::vector<double> random_channel(std::size_t size, CounterRng& rng) {
  std::vector<double> w(size);
  const double style = rng.uniform();
  const double constant = rng.uniform();
  for (auto& x : w) {
    x = rng.uniform();
    if (style < 0.25) x = std::round(x);       // deterministic rows
    else if (style < 0.35) x = constant;       // output independent of input
  }
  return w;
}

// Q = (1 - eps) P + eps R with eps spread over several decades, or an independent draw.
std::vector<double> perturbed(const Distribution& base, CounterRng& rng) {
  const std::size_t size = base.size();
  auto other = Distribution::normalized(0, random_weights(size, rng, rng.uniform() < 0.3));
  if (rng.uniform() < 0.3) return {other.probs().begin(), other.probs().end()};
  const double eps = std::pow(10.0, -5.0 * rng.uniform());
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = (1.0 - eps) * base.probs()[i] + eps * other.probs()[i];
  return out;
}

}  // namespace

ContinuityReport verify_mi_continuity(long long trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  ContinuityReport report;
  report.trials = trials;
  report.seed = seed;

  for (long long t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const std::size_t alphabet = 2 + rng.below(10);
    const auto channel = random_channel(alphabet, rng);
    const auto p = Distribution::normalized(0, random_weights(alphabet, rng, rng.uniform() < 0.3));
    const auto q = Distribution::normalized(0, perturbed(p, rng));

    const double delta = tv_distance(p, q);
    const double i_p = mutual_information(p, channel);
    const double i_q = mutual_information(q, channel);
    const double mi_gap = std::abs(i_p - i_q);
    const double mi_bound = mi_perturb_bound_dif(delta);
    ++report.checks;
    if (delta > 0.0) report.worst_mi_ratio = std::max(report.worst_mi_ratio, mi_gap / mi_bound);
    auto record = [&](const char* check, double lhs, double rhs, std::vector<double> channel_row) {
      report.violations.push_back({check, t, {p.probs().begin(), p.probs().end()},
                                   {q.probs().begin(), q.probs().end()}, std::move(channel_row), lhs, rhs});
    };
    if (mi_gap > mi_bound + kSlack) record("mi", mi_gap, mi_bound, channel);

    // Data processing: the output marginals are no further apart than the inputs.
    double out_p = 0.0, out_q = 0.0;
    for (std::size_t x = 0; x < alphabet; ++x) {
      out_p += p.probs()[x] * channel[x];
      out_q += q.probs()[x] * channel[x];
    }
    ++report.checks;
    const double out_tv = std::abs(out_p - out_q);
    if (out_tv > delta + kSlack) record("data-processing", out_tv, delta, channel);

    // Conditional MI under a swapped conditioning marginal: each slice has its own input law
    // and channel row; only P_A changes.
    const std::size_t slices = 1 + rng.below(4);
    const auto cond_p = Distribution::normalized(0, random_weights(slices, rng, false));
    const auto cond_q = Distribution::normalized(0, perturbed(cond_p, rng));
    double cmi_p = 0.0, cmi_q = 0.0;
    for (std::size_t a = 0; a < slices; ++a) {
      const auto slice_input = Distribution::normalized(0, random_weights(alphabet, rng, rng.uniform() < 0.3));
      const auto slice_channel = random_channel(alphabet, rng);
      const double slice_mi = mutual_information(slice_input, slice_channel);
      cmi_p += cond_p.probs()[a] * slice_mi;
      cmi_q += cond_q.probs()[a] * slice_mi;
    }
    const double cond_delta = tv_distance(cond_p, cond_q);
    const double cond_bound = mi_perturb_bound_eq(cond_delta);
    const double cond_gap = std::abs(cmi_p - cmi_q);
    ++report.checks;
    if (cond_delta > 0.0) {
      report.worst_conditional_ratio = std::max(report.worst_conditional_ratio, cond_gap / cond_bound);
    }
    if (cond_gap > cond_bound + kSlack) {
      report.violations.push_back({"conditional-mi", t, {cond_p.probs().begin(), cond_p.probs().end()},
                                   {cond_q.probs().begin(), cond_q.probs().end()}, {}, cond_gap, cond_bound});
    }
  }
  return report;
}

}  // namespace gtbounds
