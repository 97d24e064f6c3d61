#include "gtbounds/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "gtbounds/errors.hpp"
#include "gtbounds/rng.hpp"

namespace gtbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNuGridPoints = 256;
constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;
constexpr std::uintmax_t kBrentMaxIter = 200;

// Grid scan followed by Brent refinement inside the bracket around the best grid point.
template <class F>
NuOptimum minimize_on_interval(F&& objective, double lo, double hi, int grid_points = kNuGridPoints) {
  std::vector<double> xs(static_cast<std::size_t>(grid_points));
  std::size_t best = 0;
  double best_value = kInf;
  for (int i = 0; i < grid_points; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (grid_points - 1);
    const double value = objective(xs[static_cast<std::size_t>(i)]);
    if (value < best_value) {
      best_value = value;
      best = static_cast<std::size_t>(i);
    }
  }
  if (!std::isfinite(best_value)) return {xs[best], best_value};

  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  std::uintmax_t iterations = kBrentMaxIter;
  const auto [x, fx] = boost::math::tools::brent_find_minima(objective, a, b, kBrentBits, iterations);
  if (fx < best_value) return {x, fx};
  return {xs[best], best_value};
}

void check_problem_size(long long p, int k, bool allow_equal) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (allow_equal ? k > p : k >= p) {
    throw DomainError(std::string("require ") + (allow_equal ? "k <= p" : "k < p"));
  }
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw ParameterError("eta must lie in [0, 1)");
}

double ratio_or_inf(double numerator, double denominator) {
  if (numerator <= 0.0) return 0.0;
  return denominator > 0.0 ? numerator / denominator : kInf;
}

// Shared min-over-nu / max-over-ell machinery for the weak and i.i.d. thresholds.
struct EllTable {
  std::vector<double> numerators;  // index ell-1
  std::vector<double> deltas;
};

ThresholdResult evaluate_at(const Channel& channel, const EllTable& table, double nu, double eta, double c0) {
  ThresholdResult result;
  result.eta = eta;
  result.c0 = c0;
  result.best_nu = nu;
  double worst = -kInf;
  for (int ell = 1; ell <= channel.k(); ++ell) {
    const auto idx = static_cast<std::size_t>(ell - 1);
    EllTerm term;
    term.ell = ell;
    term.nu = nu;
    term.mi = conditional_mi_bernoulli_design(channel, ell, nu);
    term.delta_ell = table.deltas[idx];
    term.numerator = table.numerators[idx];
    term.ratio = ratio_or_inf(term.numerator, term.mi + term.delta_ell);
    if (term.ratio > worst) {
      worst = term.ratio;
      result.best_ell = ell;
    }
    result.per_ell.push_back(term);
  }
  result.n_threshold = worst * (1.0 - eta);
  return result;
}

double max_ratio(const Channel& channel, const EllTable& table, double nu) {
  double worst = -kInf;
  for (int ell = 1; ell <= channel.k(); ++ell) {
    const auto idx = static_cast<std::size_t>(ell - 1);
    const double mi = conditional_mi_bernoulli_design(channel, ell, nu);
    worst = std::max(worst, ratio_or_inf(table.numerators[idx], mi + table.deltas[idx]));
  }
  return worst;
}

ThresholdResult min_max_threshold(const Channel& channel, const EllTable& table, double eta, double c0) {
  const double k = channel.k();
  const auto opt = minimize_on_interval([&](double nu) { return max_ratio(channel, table, nu); }, 0.0, k);
  return evaluate_at(channel, table, opt.nu, eta, c0);
}

EllTable weak_table(long long p, int k, double c0) {
  EllTable table;
  for (int ell = 1; ell <= k; ++ell) {
    table.numerators.push_back(log_binomial_coefficient(p - k + ell, ell));
    table.deltas.push_back(delta_ell(p, k, ell, c0));
  }
  return table;
}

}  // namespace

NuOptimum i_star(const Channel& channel) {
  const int k = channel.k();
  const auto opt = minimize_on_interval(
      [&](double nu) { return -conditional_mi_bernoulli_design(channel, k, nu); }, 0.0, k);
  return {opt.nu, conditional_mi_bernoulli_design(channel, k, opt.nu)};
}

CapacityResult capacity_output_dist(const Channel& channel, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw ParameterError("capacity tolerance must be > 0");
  const auto table = channel.table();
  const std::size_t inputs = table.size();
  std::vector<double> weights(inputs, 1.0 / static_cast<double>(inputs));
  std::vector<double> divergence(inputs);

  auto row_kl = [&](double w1, double q1) {
    double acc = 0.0;
    const double w0 = 1.0 - w1;
    const double q0 = 1.0 - q1;
    if (w1 > 0.0) acc += q1 > 0.0 ? w1 * std::log(w1 / q1) : kInf;
    if (w0 > 0.0) acc += q0 > 0.0 ? w0 * std::log(w0 / q0) : kInf;
    return std::max(0.0, acc);
  };

  // With a binary output the optimum puts mass only on the extreme rows a < b, and Q*
  // equalizes the two divergences: log(q/(1-q)) = (H2(a) - H2(b)) / (b - a).
  auto polished = [&](int iterations) {
    const auto [lo, hi] = std::minmax_element(table.begin(), table.end());
    const double a = *lo;
    const double b = *hi;
    CapacityResult out;
    out.iterations = iterations;
    std::vector<double> input(inputs, 0.0);
    double q1 = a;
    if (b > a) {
      q1 = 1.0 / (1.0 + std::exp(-(binary_entropy(a) - binary_entropy(b)) / (b - a)));
      const double pi = std::clamp((q1 - a) / (b - a), 0.0, 1.0);
      input[static_cast<std::size_t>(lo - table.begin())] += 1.0 - pi;
      input[static_cast<std::size_t>(hi - table.begin())] += pi;
    } else {
      input[0] = 1.0;
    }
    double mean = 0.0;
    double top = 0.0;
    for (std::size_t v = 0; v < inputs; ++v) {
      const double d = row_kl(table[v], q1);
      mean += input[v] * d;
      top = std::max(top, d);
    }
    out.capacity = mean;
    out.q_star = Distribution::bernoulli(q1);
    out.input_dist = Distribution::normalized(0, input);
    out.gap = std::max(0.0, top - mean);
    return out;
  };

  CapacityResult result;
  for (int iteration = 0;; ++iteration) {
    double q1 = 0.0;
    for (std::size_t v = 0; v < inputs; ++v) q1 += weights[v] * table[v];
    q1 = std::clamp(q1, 0.0, 1.0);
    double mean = 0.0;
    double top = -kInf;
    for (std::size_t v = 0; v < inputs; ++v) {
      divergence[v] = row_kl(table[v], q1);
      if (weights[v] > 0.0) mean += weights[v] * divergence[v];
      top = std::max(top, divergence[v]);
    }
    result.capacity = mean;
    result.q_star = Distribution::bernoulli(q1);
    result.input_dist = Distribution::normalized(0, weights);
    result.iterations = iteration;
    result.gap = top - mean;
    if (result.gap <= tol) {
      auto refined = polished(iteration);
      return refined.gap < result.gap ? refined : result;
    }
    if (iteration >= max_iterations) {
      auto refined = polished(iteration);
      if (refined.gap <= tol) return refined;
      std::ostringstream msg;
      msg << "Blahut-Arimoto did not reach gap " << tol << " within " << max_iterations
          << " iterations (gap " << result.gap << ")";
      throw ConvergenceError(msg.str(), result);
    }
    double total = 0.0;
    for (std::size_t v = 0; v < inputs; ++v) {
      weights[v] *= std::exp(divergence[v] - top);
      total += weights[v];
    }
    for (double& w : weights) w /= total;
  }
}

double strong_converse_threshold_from(long long p, int k, double i_star_value, double eta) {
  check_problem_size(p, k, true);
  check_eta(eta);
  const double numerator = log_binomial_coefficient(p, k);
  return ratio_or_inf(numerator, i_star_value) * (1.0 - eta);
}

double strong_converse_threshold(long long p, int k, const Channel& channel, double eta) {
  if (channel.k() != k) throw DomainError("channel was built for a different k");
  return strong_converse_threshold_from(p, k, i_star(channel).value, eta);
}

PerTestInfoDensity per_test_info_density(const Channel& channel, const Distribution& q) {
  PerTestInfoDensity out;
  const double q_out[2] = {q(0), q(1)};
  for (int v = 0; v <= channel.k(); ++v) {
    double first = 0.0;
    double second = 0.0;
    bool finite = true;
    for (int y = 0; y < 2; ++y) {
      const double w = channel.prob(y, v);
      if (w <= 0.0) continue;
      if (q_out[y] <= 0.0) {
        finite = false;
        break;
      }
      const double log_ratio = std::log(w / q_out[y]);
      first += w * log_ratio;
      second += w * log_ratio * log_ratio;
    }
    out.mean.push_back(finite ? first : kInf);
    out.variance.push_back(finite ? std::max(0.0, second - first * first) : kInf);
  }
  return out;
}

double max_per_test_variance(const Channel& channel, const Distribution& q) {
  const auto stats = per_test_info_density(channel, q);
  double top = 0.0;
  for (double v : stats.variance) {
    if (std::isfinite(v)) top = std::max(top, v);
  }
  return top;
}

InfoDensityMoments info_density_moments(const MeasurementMatrix& matrix, std::span<const int> set,
                                        const Channel& channel, const Distribution& q) {
  const auto stats = per_test_info_density(channel, q);
  InfoDensityMoments moments;
  for (int v : matrix.defective_counts(set)) {
    if (v > channel.k()) throw DomainError("set larger than the channel's k");
    const auto idx = static_cast<std::size_t>(v);
    if (!std::isfinite(stats.mean[idx])) {
      throw AbsoluteContinuityError("reference output law vanishes on an output reachable from v = " +
                                    std::to_string(v));
    }
    moments.mean += stats.mean[idx];
    moments.variance += stats.variance[idx];
  }
  return moments;
}

double default_delta1(long long p, int k) {
  const double log_sets = log_binomial_coefficient(p, k);
  return std::clamp(std::exp(-0.5 * log_sets), 1e-6, 0.5);
}

std::vector<double> default_slack_grid() {
  return {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
}

namespace {

struct SetStatistics {
  std::vector<double> means;
  std::vector<double> variances;
  bool exhaustive = true;
  double i_star = 0.0;
  double capacity = 0.0;
  double log_num_sets = 0.0;
};

SetStatistics collect_set_statistics(const MeasurementMatrix& matrix, const Channel& channel, int k,
                                     const SetSampler& sampler) {
  const int p = matrix.items();
  check_problem_size(p, k, true);
  if (channel.k() != k) throw DomainError("channel was built for a different k");

  SetStatistics stats;
  stats.i_star = i_star(channel).value;
  Distribution q_star = Distribution::bernoulli(0.5);
  try {
    const auto cap = capacity_output_dist(channel);
    q_star = cap.q_star;
    stats.capacity = cap.capacity;
  } catch (const ConvergenceError& e) {
    // Any output law yields a valid bound; keep the best iterate.
    q_star = e.best().q_star;
    stats.capacity = e.best().capacity;
  }
  const auto per_test = per_test_info_density(channel, q_star);
  stats.log_num_sets = log_binomial_coefficient(p, k);

  auto record = [&](std::span<const int> counts) {
    double mean = 0.0;
    double variance = 0.0;
    for (int v : counts) {
      const auto idx = static_cast<std::size_t>(v);
      if (!std::isfinite(per_test.mean[idx])) {
        throw AbsoluteContinuityError("capacity-achieving output law vanishes on a reachable output");
      }
      mean += per_test.mean[idx];
      variance += per_test.variance[idx];
    }
    stats.means.push_back(mean);
    stats.variances.push_back(variance);
  };

  bool exhaustive = sampler.mode == SetSampler::Mode::kExhaustive;
  if (sampler.mode == SetSampler::Mode::kAuto) {
    exhaustive = stats.log_num_sets <= std::log(static_cast<double>(sampler.exhaustive_cutoff)) + 1e-9;
  }
  stats.exhaustive = exhaustive;
  if (exhaustive) {
    for_each_subset_counts(matrix, k, [&](std::span<const int>, std::span<const int> counts) { record(counts); });
  } else {
    if (sampler.trials < 1) throw ParameterError("Monte Carlo set sampling needs trials >= 1");
    for (long long t = 0; t < sampler.trials; ++t) {
      CounterRng rng(sampler.seed, static_cast<std::uint64_t>(t));
      const auto set = random_subset(p, k, rng);
      const auto counts = matrix.defective_counts(set);
      record(counts);
    }
  }
  return stats;
}

ChebyshevBound evaluate_bound(const SetStatistics& stats, int tests, double delta1, double slack) {
  ChebyshevBound out;
  out.delta1 = delta1;
  out.slack = slack;
  out.i_star = stats.i_star;
  out.capacity = stats.capacity;
  out.log_num_sets = stats.log_num_sets;
  out.sets_evaluated = static_cast<long long>(stats.means.size());
  out.exhaustive = stats.exhaustive;
  out.max_mean = stats.means.empty() ? 0.0 : *std::max_element(stats.means.begin(), stats.means.end());

  const double threshold = stats.log_num_sets + std::log(delta1);
  const double margin = tests * slack * stats.i_star;
  for (std::size_t s = 0; s < stats.means.size(); ++s) {
    if (stats.means[s] + margin > threshold) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "log C(p,k) + log delta1 = " << threshold << " < mu_n(s) + n*Delta*I_s* = "
          << stats.means[s] + margin << " for evaluated set #" << s;
      out.reason = msg.str();
      out.bound = 0.0;
      out.vacuous = true;
      return out;
    }
  }

  const double scale = margin * margin;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double var : stats.variances) {
    const double term = var <= 0.0 ? 0.0 : (scale > 0.0 ? var / scale : kInf);
    sum += term;
    sum_sq += term * term;
  }
  const double count = static_cast<double>(stats.variances.size());
  out.chebyshev_term = sum / count;
  if (!stats.exhaustive && count > 1 && std::isfinite(out.chebyshev_term)) {
    const double var = std::max(0.0, (sum_sq - sum * sum / count) / (count - 1));
    out.std_error = std::sqrt(var / count);
  }
  const double raw = 1.0 - out.chebyshev_term - delta1;
  out.bound = std::isfinite(raw) ? std::clamp(raw, 0.0, 1.0) : 0.0;
  out.vacuous = out.bound <= 0.0;
  if (out.vacuous) out.reason = "variance term exceeds 1 - delta1";
  return out;
}

}  // namespace

ChebyshevBound chebyshev_error_lower_bound(const MeasurementMatrix& matrix, const Channel& channel, int k,
                                           double delta1, double slack, const SetSampler& sampler) {
  if (!(delta1 > 0.0 && delta1 < 1.0)) throw ParameterError("delta1 must lie in (0, 1)");
  if (!(slack > 0.0)) throw ParameterError("Delta must be > 0");
  const auto stats = collect_set_statistics(matrix, channel, k, sampler);
  return evaluate_bound(stats, matrix.tests(), delta1, slack);
}

ChebyshevBound best_chebyshev_bound(const MeasurementMatrix& matrix, const Channel& channel, int k,
                                    double delta1, std::span<const double> slack_grid,
                                    const SetSampler& sampler) {
  if (!(delta1 > 0.0 && delta1 < 1.0)) throw ParameterError("delta1 must lie in (0, 1)");
  if (slack_grid.empty()) throw ParameterError("Delta grid is empty");
  const auto stats = collect_set_statistics(matrix, channel, k, sampler);
  ChebyshevBound best;
  bool first = true;
  for (double slack : slack_grid) {
    if (!(slack > 0.0)) throw ParameterError("Delta must be > 0");
    auto candidate = evaluate_bound(stats, matrix.tests(), delta1, slack);
    if (first || candidate.bound > best.bound) {
      best = std::move(candidate);
      first = false;
    }
  }
  return best;
}

double delta_ell(long long p, int k, int ell, double c0) {
  check_problem_size(p, k, false);
  if (ell < 1 || ell > k) throw DomainError("ell must lie in 1..k");
  if (!(c0 >= 0.0)) throw ParameterError("c0 must be >= 0");
  const double product = static_cast<double>(ell) * (k - ell);
  if (product == 0.0) return 0.0;
  const double pd = static_cast<double>(p);
  return c0 * product / pd * std::max(1.0, std::log(pd / product));
}

ThresholdResult weak_converse_threshold(long long p, int k, const Channel& channel, double eta, double c0) {
  check_problem_size(p, k, false);
  check_eta(eta);
  if (!(c0 > 0.0)) throw ParameterError("c0 must be > 0");
  if (channel.k() != k) throw DomainError("channel was built for a different k");
  return min_max_threshold(channel, weak_table(p, k, c0), eta, c0);
}

ThresholdResult iid_converse_threshold(long long p, int k, const Channel& channel, double eta) {
  check_problem_size(p, k, false);
  check_eta(eta);
  if (channel.k() != k) throw DomainError("channel was built for a different k");
  EllTable table;
  for (int ell = 1; ell <= k; ++ell) {
    table.numerators.push_back(ell * std::log(static_cast<double>(p) / ell));
    table.deltas.push_back(0.0);
  }
  return min_max_threshold(channel, table, eta, 0.0);
}

void MixtureProfile::validate(int k) const {
  if (atoms.empty()) throw ParameterError("mixture profile needs at least one atom");
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.weight >= 0.0)) throw ParameterError("mixture weights must be >= 0");
    if (!(atom.nu >= 0.0 && atom.nu <= k)) throw ParameterError("mixture atom nu must lie in [0, k]");
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("mixture weights must sum to 1");
}

double MixtureProfile::mean_nu() const {
  double m = 0.0;
  for (const auto& atom : atoms) m += atom.weight * atom.nu;
  return m;
}

ThresholdResult mixture_threshold(long long p, int k, const Channel& channel, double eta, double c0,
                                  const MixtureProfile& profile) {
  check_problem_size(p, k, false);
  check_eta(eta);
  if (!(c0 > 0.0)) throw ParameterError("c0 must be > 0");
  if (channel.k() != k) throw DomainError("channel was built for a different k");
  profile.validate(k);

  const auto table = weak_table(p, k, c0);
  ThresholdResult result;
  result.eta = eta;
  result.c0 = c0;
  result.best_nu = profile.mean_nu();
  double worst = -kInf;
  for (int ell = 1; ell <= k; ++ell) {
    const auto idx = static_cast<std::size_t>(ell - 1);
    EllTerm term;
    term.ell = ell;
    term.nu = result.best_nu;
    for (const auto& atom : profile.atoms) {
      term.mi += atom.weight * conditional_mi_bernoulli_design(channel, ell, atom.nu);
    }
    term.delta_ell = table.deltas[idx];
    term.numerator = table.numerators[idx];
    term.ratio = ratio_or_inf(term.numerator, term.mi + term.delta_ell);
    if (term.ratio > worst) {
      worst = term.ratio;
      result.best_ell = ell;
    }
    result.per_ell.push_back(term);
  }
  result.n_threshold = worst * (1.0 - eta);
  return result;
}

namespace {

// Objective over a profile given per-atom MI vectors (index ell-1).
double profile_objective(const EllTable& table, std::span<const double> weights,
                         std::span<const std::vector<double>* const> mis) {
  double worst = -kInf;
  for (std::size_t idx = 0; idx < table.numerators.size(); ++idx) {
    double mi = 0.0;
    for (std::size_t u = 0; u < weights.size(); ++u) mi += weights[u] * (*mis[u])[idx];
    worst = std::max(worst, ratio_or_inf(table.numerators[idx], mi + table.deltas[idx]));
  }
  return worst;
}

MixtureProfile normalize_profile(MixtureProfile profile) {
  double total = 0.0;
  for (const auto& atom : profile.atoms) total += atom.weight;
  for (auto& atom : profile.atoms) atom.weight /= total;
  return profile;
}

}  // namespace

MixtureSearchResult optimize_mixture(long long p, int k, const Channel& channel, double eta, double c0,
                                     int max_atoms) {
  if (max_atoms < 1) throw ParameterError("max_atoms must be >= 1");
  const auto weak = weak_converse_threshold(p, k, channel, eta, c0);
  const auto table = weak_table(p, k, c0);

  MixtureSearchResult best;
  best.profile.atoms = {{1.0, weak.best_nu}};
  best.threshold = mixture_threshold(p, k, channel, eta, c0, best.profile);
  if (max_atoms == 1) return best;

  constexpr int kGrid = 129;
  std::vector<double> grid_nu;
  std::vector<std::vector<double>> grid_mi;
  for (int g = 0; g < kGrid; ++g) grid_nu.push_back(static_cast<double>(k) * g / (kGrid - 1));
  grid_nu.push_back(weak.best_nu);
  for (double nu : grid_nu) {
    std::vector<double> row;
    for (int ell = 1; ell <= k; ++ell) row.push_back(conditional_mi_bernoulli_design(channel, ell, nu));
    grid_mi.push_back(std::move(row));
  }

  // Two atoms on the grid.
  double best_value = best.threshold.n_threshold / (1.0 - eta);
  std::vector<std::size_t> best_idx;
  std::vector<double> best_w;
  for (std::size_t a = 0; a < grid_nu.size(); ++a) {
    for (std::size_t b = a + 1; b < grid_nu.size(); ++b) {
      const std::vector<double>* mis[2] = {&grid_mi[a], &grid_mi[b]};
      for (int wi = 1; wi < 20; ++wi) {
        const double w[2] = {wi / 20.0, 1.0 - wi / 20.0};
        const double value = profile_objective(table, w, mis);
        if (value < best_value) {
          best_value = value;
          best_idx = {a, b};
          best_w = {w[0], w[1]};
        }
      }
    }
  }
  // Greedy third atom.
  if (max_atoms >= 3 && best_idx.size() == 2) {
    auto base_idx = best_idx;
    for (std::size_t c = 0; c < grid_nu.size(); ++c) {
      const std::vector<double>* mis[3] = {&grid_mi[base_idx[0]], &grid_mi[base_idx[1]], &grid_mi[c]};
      for (int i = 1; i < 20; ++i) {
        for (int j = 1; i + j < 20; ++j) {
          const double w[3] = {i / 20.0, j / 20.0, (20 - i - j) / 20.0};
          const double value = profile_objective(table, w, mis);
          if (value < best_value) {
            best_value = value;
            best_idx = {base_idx[0], base_idx[1], c};
            best_w = {w[0], w[1], w[2]};
          }
        }
      }
    }
  }

  MixtureProfile current = best.profile;
  if (!best_idx.empty()) {
    current.atoms.clear();
    for (std::size_t u = 0; u < best_idx.size(); ++u) current.atoms.push_back({best_w[u], grid_nu[best_idx[u]]});
    current = normalize_profile(current);
  }

  // Pattern search over atom locations and weight transfers.
  auto evaluate = [&](const MixtureProfile& profile) {
    return mixture_threshold(p, k, channel, eta, c0, profile).n_threshold;
  };
  double current_value = evaluate(current);
  for (double step = k / 64.0; step > 1e-9 * k; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      const std::size_t atoms = current.atoms.size();
      for (std::size_t u = 0; u < atoms; ++u) {
        for (double dir : {-1.0, 1.0}) {
          MixtureProfile trial = current;
          trial.atoms[u].nu = std::clamp(trial.atoms[u].nu + dir * step, 0.0, static_cast<double>(k));
          const double value = evaluate(trial);
          if (value < current_value) {
            current = std::move(trial);
            current_value = value;
            improved = true;
          }
        }
        for (std::size_t v = 0; v < atoms; ++v) {
          if (u == v) continue;
          const double shift = std::min(current.atoms[v].weight, step / k);
          if (shift <= 0.0) continue;
          MixtureProfile trial = current;
          trial.atoms[u].weight += shift;
          trial.atoms[v].weight -= shift;
          trial = normalize_profile(trial);
          const double value = evaluate(trial);
          if (value < current_value) {
            current = std::move(trial);
            current_value = value;
            improved = true;
          }
        }
      }
    }
  }

  if (current_value < best.threshold.n_threshold) {
    std::erase_if(current.atoms, [](const MixtureAtom& atom) { return atom.weight == 0.0; });
    best.profile = current;
    best.threshold = mixture_threshold(p, k, channel, eta, c0, current);
  }
  return best;
}

}  // namespace gtbounds
