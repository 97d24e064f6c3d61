#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gtbounds/channels.hpp"
#include "gtbounds/infomath.hpp"
#include "gtbounds/matrix.hpp"
#include "gtbounds/rng.hpp"
#include "gtbounds/thresholds.hpp"

namespace gtbounds {

struct IidDesign {
  double nu = 0.0;  // entries are Bernoulli(nu / k)
};

struct ConstantColumnWeightDesign {
  int weight = 0;  // ones per column, placed uniformly at random
};

/// Row i uses Bernoulli(row_nu[i] / k) entries. Rows must cover all n tests.
struct ProfileDesign {
  std::vector<double> row_nu;
  std::optional<MixtureProfile> mixture;  // when set, rows are re-expanded for other test counts

  /// Expands a mixture profile into a fixed sequence u_1..u_n whose empirical
  /// distribution matches the weights (largest-remainder rounding, atoms in order).
  static ProfileDesign from_mixture(const MixtureProfile& profile, int tests);
};

struct EnsembleSpec {
  std::variant<IidDesign, ConstantColumnWeightDesign, ProfileDesign> design;
  std::uint64_t seed = 0;

  /// "iid:<nu>", "ccw:<w>", or "profile:<w1>@<nu1>,<w2>@<nu2>,..." (weights renormalized).
  /// Profile rows are laid out for `tests` rows.
  static EnsembleSpec parse(std::string_view text, int tests, std::uint64_t seed);
  std::string to_string() const;
};

/// Draws the matrix from the given stream; gen_matrix(spec, ...) uses CounterRng(spec.seed, 0, kMatrixLane).
MeasurementMatrix gen_matrix(const EnsembleSpec& spec, int tests, int items, int k, CounterRng& rng);
MeasurementMatrix gen_matrix(const EnsembleSpec& spec, int tests, int items, int k);

inline constexpr std::uint32_t kTrialLane = 0;
inline constexpr std::uint32_t kMatrixLane = 1;

std::vector<std::uint8_t> sample_observations(const MeasurementMatrix& matrix, std::span<const int> set,
                                              const Channel& channel, CounterRng& rng);

/// Exhaustive maximum-likelihood (= MAP under the uniform prior) decoder. Ties go to the
/// lexicographically first sorted index tuple.
std::vector<int> map_decoder(const MeasurementMatrix& matrix, std::span<const std::uint8_t> y, int k,
                             const Channel& channel, long long max_sets = 1000000);

/// First set (lexicographic) whose information density sum_i log(P(y_i|v_i)/q(y_i)) exceeds
/// gamma; std::nullopt (abstain) when none does.
std::optional<std::vector<int>> info_density_decoder(const MeasurementMatrix& matrix,
                                                     std::span<const std::uint8_t> y, int k,
                                                     const Channel& channel, const Distribution& q,
                                                     double gamma, long long max_sets = 1000000);

/// Information density of one candidate set.
double information_density(const MeasurementMatrix& matrix, std::span<const std::uint8_t> y,
                           std::span<const int> set, const Channel& channel, const Distribution& q);

/// A decoder returns a size-k estimate or abstains (counted as an error).
using Decoder = std::function<std::optional<std::vector<int>>(const MeasurementMatrix&,
                                                              std::span<const std::uint8_t>)>;

Decoder make_map_decoder(int k, const Channel& channel, long long max_sets = 1000000);
Decoder make_info_density_decoder(int k, const Channel& channel, const Distribution& q, double gamma,
                                  long long max_sets = 1000000);

struct SimEstimate {
  double pe_hat = 0.0;
  long long trials = 0;
  long long errors = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;

  /// sqrt(pe (1 - pe) / trials).
  double std_error() const;
};

/// Wilson score interval at 95%.
SimEstimate make_estimate(long long errors, long long trials, std::uint64_t seed);

/// pe(X) for a fixed matrix: per trial, S uniform over size-k sets, Y from the channel,
/// error iff the decoder's output differs from S. Trial t uses CounterRng(seed, t).
SimEstimate estimate_pe(const MeasurementMatrix& matrix, const Channel& channel, int k, const Decoder& decoder,
                        long long trials, std::uint64_t seed, int workers = 1);

/// Ensemble-average error: trial t redraws the matrix from CounterRng(seed, t, kMatrixLane)
/// before drawing S and Y from CounterRng(seed, t, kTrialLane).
SimEstimate estimate_pe_ensemble(const EnsembleSpec& spec, int tests, int items, const Channel& channel, int k,
                                 const Decoder& decoder, long long trials, std::uint64_t seed, int workers = 1);

struct SweepPoint {
  int n = 0;
  SimEstimate estimate;
  double pe_monotone = 0.0;  // isotonic (nonincreasing in n) fit
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> crossing_n;  // where the monotone curve crosses pe = 0.5
};

enum class SweepMode { kEnsemble, kFixedMatrix };

/// Error probability over a grid of test counts with the MAP decoder. Grid point g uses
/// seeds derived from (seed, g) so points are independent and individually reproducible.
SweepResult sweep_n(const EnsembleSpec& spec, const Channel& channel, int items, int k,
                    const std::vector<int>& n_grid, long long trials, std::uint64_t seed,
                    SweepMode mode = SweepMode::kEnsemble, int workers = 1);

/// Weighted pool-adjacent-violators fit constrained to be nonincreasing.
std::vector<double> isotonic_nonincreasing(std::span<const double> values, std::span<const double> weights);

/// Seed for grid point `index` of a sweep started from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gtbounds
