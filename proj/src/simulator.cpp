#include "gtbounds/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "gtbounds/errors.hpp"

namespace gtbounds {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParameterError("ensemble: cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double x) {
  char buffer[32];
  const auto end = std::to_chars(buffer, buffer + sizeof buffer, x).ptr;
  return std::string(buffer, end);
}

// log P(y | v) for v = 0..k, y = 0, 1.
std::vector<std::array<double, 2>> log_likelihood_table(const Channel& channel) {
  std::vector<std::array<double, 2>> table;
  for (int v = 0; v <= channel.k(); ++v) {
    const double q1 = channel.prob_one(v);
    table.push_back({q1 < 1.0 ? std::log1p(-q1) : kNegInf, q1 > 0.0 ? std::log(q1) : kNegInf});
  }
  return table;
}

void check_enumerable(const MeasurementMatrix& matrix, int k, std::span<const std::uint8_t> y, long long max_sets) {
  if (k < 1 || k > matrix.items()) throw DomainError("decoder requires 1 <= k <= p");
  if (static_cast<int>(y.size()) != matrix.tests()) throw DomainError("observation length differs from test count");
  const double log_sets = log_binomial_coefficient(matrix.items(), k);
  if (log_sets > std::log(static_cast<double>(max_sets)) + 1e-9) {
    throw FeasibilityError("exhaustive decoding over C(" + std::to_string(matrix.items()) + ", " +
                           std::to_string(k) + ") sets exceeds the cap of " + std::to_string(max_sets) +
                           "; use smaller p or k");
  }
}

// Runs body(begin, end) on contiguous chunks of [0, count) and returns the summed results.
long long parallel_count(long long count, int workers, const std::function<long long(long long, long long)>& body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<long long>(count, 256))));
  if (workers == 1) return body(0, count);
  std::vector<long long> partial(static_cast<std::size_t>(workers), 0);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    const long long begin = count * w / workers;
    const long long end = count * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] { partial[static_cast<std::size_t>(w)] = body(begin, end); });
  }
  for (auto& t : threads) t.join();
  return std::accumulate(partial.begin(), partial.end(), 0LL);
}

bool trial_failed(const MeasurementMatrix& matrix, const Channel& channel, int k, const Decoder& decoder,
                  CounterRng& rng) {
  const auto set = random_subset(matrix.items(), k, rng);
  const auto y = sample_observations(matrix, set, channel, rng);
  const auto estimate = decoder(matrix, y);
  return !estimate || *estimate != set;
}

}  // namespace

ProfileDesign ProfileDesign::from_mixture(const MixtureProfile& profile, int tests) {
  if (tests < 0) throw ParameterError("tests must be >= 0");
  if (profile.atoms.empty()) throw ParameterError("mixture profile needs at least one atom");
  const std::size_t atoms = profile.atoms.size();
  std::vector<int> counts(atoms);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t u = 0; u < atoms; ++u) {
    const double exact = profile.atoms[u].weight * tests;
    counts[u] = static_cast<int>(std::floor(exact));
    assigned += counts[u];
    remainders.emplace_back(exact - counts[u], u);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < tests; ++r, ++assigned) ++counts[remainders[r % atoms].second];

  ProfileDesign design;
  for (std::size_t u = 0; u < atoms; ++u) {
    design.row_nu.insert(design.row_nu.end(), static_cast<std::size_t>(counts[u]), profile.atoms[u].nu);
  }
  design.mixture = profile;
  return design;
}

EnsembleSpec EnsembleSpec::parse(std::string_view text, int tests, std::uint64_t seed) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParameterError("ensemble: expected 'iid:<nu>', 'ccw:<w>' or 'profile:<w>@<nu>,...'");
  }
  const auto kind = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  EnsembleSpec spec;
  spec.seed = seed;
  if (kind == "iid") {
    spec.design = IidDesign{parse_double(body, "nu")};
  } else if (kind == "ccw") {
    const double w = parse_double(body, "column weight");
    if (w != std::floor(w) || w < 0) throw ParameterError("ensemble: column weight must be a nonnegative integer");
    spec.design = ConstantColumnWeightDesign{static_cast<int>(w)};
  } else if (kind == "profile") {
    MixtureProfile profile;
    std::size_t start = 0;
    double total = 0.0;
    while (start <= body.size()) {
      const auto comma = body.find(',', start);
      const auto item = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      const auto at = item.find('@');
      if (at == std::string_view::npos) throw ParameterError("ensemble: profile atoms are '<weight>@<nu>'");
      MixtureAtom atom{parse_double(item.substr(0, at), "weight"), parse_double(item.substr(at + 1), "nu")};
      if (!(atom.weight >= 0.0)) throw ParameterError("ensemble: profile weights must be >= 0");
      total += atom.weight;
      profile.atoms.push_back(atom);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!(total > 0.0)) throw ParameterError("ensemble: profile weights must have positive total");
    for (auto& atom : profile.atoms) atom.weight /= total;
    spec.design = ProfileDesign::from_mixture(profile, tests);
  } else {
    throw ParameterError("ensemble: unknown kind '" + std::string(kind) + "'");
  }
  return spec;
}

std::string EnsembleSpec::to_string() const {
  if (const auto* iid = std::get_if<IidDesign>(&design)) return "iid:" + format_double(iid->nu);
  if (const auto* ccw = std::get_if<ConstantColumnWeightDesign>(&design)) return "ccw:" + std::to_string(ccw->weight);
  const auto& profile = std::get<ProfileDesign>(design);
  if (!profile.mixture) return "profile-rows:" + std::to_string(profile.row_nu.size());
  std::string out = "profile:";
  for (std::size_t u = 0; u < profile.mixture->atoms.size(); ++u) {
    if (u) out += ',';
    out += format_double(profile.mixture->atoms[u].weight) + '@' + format_double(profile.mixture->atoms[u].nu);
  }
  return out;
}

MeasurementMatrix gen_matrix(const EnsembleSpec& spec, int tests, int items, int k, CounterRng& rng) {
  if (k < 1) throw ParameterError("k must be >= 1");
  if (tests < 0 || items < 0) throw ParameterError("matrix dimensions must be >= 0");
  std::vector<std::uint8_t> entries(static_cast<std::size_t>(tests) * static_cast<std::size_t>(items), 0);
  auto fill_row = [&](int row, double nu) {
    if (!(nu >= 0.0 && nu <= k)) throw ParameterError("design nu must lie in [0, k]");
    const double prob = nu / k;
    for (int j = 0; j < items; ++j) {
      entries[static_cast<std::size_t>(row) * items + j] = rng.bernoulli(prob) ? 1 : 0;
    }
  };

  if (const auto* iid = std::get_if<IidDesign>(&spec.design)) {
    for (int i = 0; i < tests; ++i) fill_row(i, iid->nu);
  } else if (const auto* ccw = std::get_if<ConstantColumnWeightDesign>(&spec.design)) {
    if (ccw->weight < 0 || ccw->weight > tests) {
      throw ParameterError("column weight " + std::to_string(ccw->weight) + " infeasible with " +
                           std::to_string(tests) + " tests");
    }
    for (int j = 0; j < items; ++j) {
      for (int i : random_subset(tests, ccw->weight, rng)) entries[static_cast<std::size_t>(i) * items + j] = 1;
    }
  } else {
    const auto& profile = std::get<ProfileDesign>(spec.design);
    std::vector<double> rows = profile.row_nu;
    if (static_cast<int>(rows.size()) != tests) {
      if (!profile.mixture) {
        throw ParameterError("profile covers " + std::to_string(rows.size()) + " rows but the matrix has " +
                             std::to_string(tests));
      }
      rows = ProfileDesign::from_mixture(*profile.mixture, tests).row_nu;
    }
    for (int i = 0; i < tests; ++i) fill_row(i, rows[static_cast<std::size_t>(i)]);
  }
  return MeasurementMatrix(tests, items, std::move(entries));
}

MeasurementMatrix gen_matrix(const EnsembleSpec& spec, int tests, int items, int k) {
  CounterRng rng(spec.seed, 0, kMatrixLane);
  return gen_matrix(spec, tests, items, k, rng);
}

std::vector<std::uint8_t> sample_observations(const MeasurementMatrix& matrix, std::span<const int> set,
                                              const Channel& channel, CounterRng& rng) {
  const auto counts = matrix.defective_counts(set);
  std::vector<std::uint8_t> y(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) y[i] = static_cast<std::uint8_t>(sample_output(channel, counts[i], rng));
  return y;
}

std::vector<int> map_decoder(const MeasurementMatrix& matrix, std::span<const std::uint8_t> y, int k,
                             const Channel& channel, long long max_sets) {
  check_enumerable(matrix, k, y, max_sets);
  if (channel.k() < k) throw DomainError("channel table shorter than k");
  const auto table = log_likelihood_table(channel);
  std::vector<int> best;
  double best_score = kNegInf;
  for_each_subset_counts(matrix, k, [&](std::span<const int> set, std::span<const int> counts) {
    double score = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) score += table[static_cast<std::size_t>(counts[i])][y[i]];
    if (best.empty() || score > best_score) {
      best.assign(set.begin(), set.end());
      best_score = score;
    }
  });
  return best;
}

double information_density(const MeasurementMatrix& matrix, std::span<const std::uint8_t> y,
                           std::span<const int> set, const Channel& channel, const Distribution& q) {
  const auto counts = matrix.defective_counts(set);
  double acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double w = channel.prob(y[i], counts[i]);
    acc += std::log(w / q(y[i]));
  }
  return acc;
}

std::optional<std::vector<int>> info_density_decoder(const MeasurementMatrix& matrix,
                                                     std::span<const std::uint8_t> y, int k,
                                                     const Channel& channel, const Distribution& q,
                                                     double gamma, long long max_sets) {
  check_enumerable(matrix, k, y, max_sets);
  if (channel.k() < k) throw DomainError("channel table shorter than k");
  const auto table = log_likelihood_table(channel);
  const double log_q[2] = {std::log(q(0)), std::log(q(1))};
  std::optional<std::vector<int>> found;
  // TODO: stop the enumeration at the first hit instead of scanning the remaining sets.
  for_each_subset_counts(matrix, k, [&](std::span<const int> set, std::span<const int> counts) {
    if (found) return;
    double density = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      density += table[static_cast<std::size_t>(counts[i])][y[i]] - log_q[y[i]];
    }
    if (density > gamma) found.emplace(set.begin(), set.end());
  });
  return found;
}

Decoder make_map_decoder(int k, const Channel& channel, long long max_sets) {
  return [k, channel, max_sets](const MeasurementMatrix& matrix, std::span<const std::uint8_t> y) {
    return std::optional<std::vector<int>>(map_decoder(matrix, y, k, channel, max_sets));
  };
}

Decoder make_info_density_decoder(int k, const Channel& channel, const Distribution& q, double gamma,
                                  long long max_sets) {
  return [k, channel, q, gamma, max_sets](const MeasurementMatrix& matrix, std::span<const std::uint8_t> y) {
    return info_density_decoder(matrix, y, k, channel, q, gamma, max_sets);
  };
}

double SimEstimate::std_error() const {
  if (trials <= 0) return 0.0;
  return std::sqrt(pe_hat * (1.0 - pe_hat) / static_cast<double>(trials));
}

SimEstimate make_estimate(long long errors, long long trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  SimEstimate est;
  est.trials = trials;
  est.errors = errors;
  est.seed = seed;
  const double n = static_cast<double>(trials);
  est.pe_hat = static_cast<double>(errors) / n;
  constexpr double z = 1.959963984540054;
  const double denom = 1.0 + z * z / n;
  const double center = (est.pe_hat + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(est.pe_hat * (1.0 - est.pe_hat) / n + z * z / (4.0 * n * n)) / denom;
  est.ci_low = std::clamp(std::min(center - half, est.pe_hat), 0.0, 1.0);
  est.ci_high = std::clamp(std::max(center + half, est.pe_hat), 0.0, 1.0);
  return est;
}

SimEstimate estimate_pe(const MeasurementMatrix& matrix, const Channel& channel, int k, const Decoder& decoder,
                        long long trials, std::uint64_t seed, int workers) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (k < 1 || k > matrix.items()) throw DomainError("require 1 <= k <= p");
  const long long errors = parallel_count(trials, workers, [&](long long begin, long long end) {
    long long failed = 0;
    for (long long t = begin; t < end; ++t) {
      CounterRng rng(seed, static_cast<std::uint64_t>(t), kTrialLane);
      failed += trial_failed(matrix, channel, k, decoder, rng) ? 1 : 0;
    }
    return failed;
  });
  return make_estimate(errors, trials, seed);
}

SimEstimate estimate_pe_ensemble(const EnsembleSpec& spec, int tests, int items, const Channel& channel, int k,
                                 const Decoder& decoder, long long trials, std::uint64_t seed, int workers) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (k < 1 || k > items) throw DomainError("require 1 <= k <= p");
  const long long errors = parallel_count(trials, workers, [&](long long begin, long long end) {
    long long failed = 0;
    for (long long t = begin; t < end; ++t) {
      CounterRng matrix_rng(seed, static_cast<std::uint64_t>(t), kMatrixLane);
      const auto matrix = gen_matrix(spec, tests, items, k, matrix_rng);
      CounterRng rng(seed, static_cast<std::uint64_t>(t), kTrialLane);
      failed += trial_failed(matrix, channel, k, decoder, rng) ? 1 : 0;
    }
    return failed;
  });
  return make_estimate(errors, trials, seed);
}

std::vector<double> isotonic_nonincreasing(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw DomainError("isotonic fit: values and weights differ in length");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
      const Block last = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double total = prev.weight + last.weight;
      prev.mean = total > 0.0 ? (prev.mean * prev.weight + last.mean * last.weight) / total
                              : 0.5 * (prev.mean + last.mean);
      prev.weight = total;
      prev.count += last.count;
    }
  }
  std::vector<double> fit;
  for (const auto& block : blocks) fit.insert(fit.end(), block.count, block.mean);
  return fit;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index, 0xFFFFFFFFu);
  return rng.next_u64();
}

SweepResult sweep_n(const EnsembleSpec& spec, const Channel& channel, int items, int k, const std::vector<int>& n_grid,
                    long long trials, std::uint64_t seed, SweepMode mode, int workers) {
  if (n_grid.empty()) throw ParameterError("sweep grid is empty");
  const auto decoder = make_map_decoder(k, channel);
  SweepResult result;
  std::vector<double> raw;
  std::vector<double> weights;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const int n = n_grid[g];
    if (n < 0) throw ParameterError("test counts must be >= 0");
    const std::uint64_t point_seed = derive_seed(seed, g);
    SweepPoint point;
    point.n = n;
    if (mode == SweepMode::kEnsemble) {
      point.estimate = estimate_pe_ensemble(spec, n, items, channel, k, decoder, trials, point_seed, workers);
    } else {
      CounterRng matrix_rng(point_seed, 0, kMatrixLane);
      const auto matrix = gen_matrix(spec, n, items, k, matrix_rng);
      point.estimate = estimate_pe(matrix, channel, k, decoder, trials, point_seed, workers);
    }
    raw.push_back(point.estimate.pe_hat);
    weights.push_back(static_cast<double>(point.estimate.trials));
    result.points.push_back(point);
  }
  const auto fit = isotonic_nonincreasing(raw, weights);
  for (std::size_t g = 0; g < fit.size(); ++g) result.points[g].pe_monotone = fit[g];

  for (std::size_t g = 1; g < fit.size(); ++g) {
    if (fit[g - 1] > 0.5 && fit[g] <= 0.5) {
      const double t = (fit[g - 1] - 0.5) / (fit[g - 1] - fit[g]);
      result.crossing_n = n_grid[g - 1] + t * (n_grid[g] - n_grid[g - 1]);
      break;
    }
  }
  return result;
}

}  // namespace gtbounds
