#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtbounds/channels.hpp"
#include "gtbounds/infomath.hpp"
#include "gtbounds/matrix.hpp"

namespace gtbounds {

struct NuOptimum {
  double nu = 0.0;
  double value = 0.0;
};

/// I_s* = max over nu in [0, k] of I(X_s; Y) with i.i.d. Bernoulli(nu/k) entries.
NuOptimum i_star(const Channel& channel);

struct CapacityResult {
  double capacity = 0.0;            // nats
  Distribution q_star = Distribution::bernoulli(0.5);  // output law at the optimum
  Distribution input_dist = Distribution::point_mass(0);
  int iterations = 0;
  double gap = 0.0;  // max_v KL(P(.|v) || q_star) - I(input; Y), an upper bound on C - capacity
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, CapacityResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const CapacityResult& best() const noexcept { return best_; }

 private:
  CapacityResult best_;
};

/// Capacity of v -> Y over all input laws on {0..k} by Blahut-Arimoto alternating
/// maximization. Stops once the KL spread certificate drops to `tol`, then snaps to the
/// exact two-row equalizer whenever that certifies a smaller spread.
CapacityResult capacity_output_dist(const Channel& channel, double tol = 1e-9,
                                    int max_iterations = 100000);

/// log C(p, k) / I_s* * (1 - eta). Returns +inf when I_s* = 0 and log C(p, k) > 0.
double strong_converse_threshold(long long p, int k, const Channel& channel, double eta);
double strong_converse_threshold_from(long long p, int k, double i_star_value, double eta);

struct InfoDensityMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Per-value mean and variance of log(P(Y|v) / q(Y)) for Y ~ P(.|v). Entries are
/// +inf where q vanishes on an output the channel can emit from v.
struct PerTestInfoDensity {
  std::vector<double> mean;
  std::vector<double> variance;
};

PerTestInfoDensity per_test_info_density(const Channel& channel, const Distribution& q);

/// max over v of the single-test variance (finite entries only).
double max_per_test_variance(const Channel& channel, const Distribution& q);

/// Mean and variance of sum_i log(P(Y_i | V_s^(i)) / q(Y_i)) given the matrix and set s.
InfoDensityMoments info_density_moments(const MeasurementMatrix& matrix, std::span<const int> set,
                                        const Channel& channel, const Distribution& q);

struct SetSampler {
  enum class Mode { kAuto, kExhaustive, kMonteCarlo };
  Mode mode = Mode::kAuto;
  long long trials = 10000;  // Monte Carlo only
  std::uint64_t seed = 0;
  /// kAuto enumerates when C(p, k) is at most this many sets.
  long long exhaustive_cutoff = 100000;
};

struct ChebyshevBound {
  double bound = 0.0;
  bool vacuous = true;
  std::string reason;  // which applicability condition failed, empty otherwise
  double delta1 = 0.0;
  double slack = 0.0;  // Delta
  double i_star = 0.0;
  double capacity = 0.0;
  double log_num_sets = 0.0;
  long long sets_evaluated = 0;
  bool exhaustive = true;
  double max_mean = 0.0;          // max over evaluated sets of mu_n(s)
  double chebyshev_term = 0.0;    // average of sigma_n^2(s) / (n Delta I_s*)^2
  double std_error = 0.0;         // Monte Carlo standard error of chebyshev_term (0 if exhaustive)
};

/// delta1 = 1/sqrt(C(p, k)) clipped to [1e-6, 0.5].
double default_delta1(long long p, int k);

/// Slack values swept by best_chebyshev_bound.
std::vector<double> default_slack_grid();

/// Lower bound on pe(X) for a fixed matrix: with q = Q*, returns
/// max(0, 1 - avg_s sigma_n^2(s) / (n Delta I_s*)^2 - delta1) provided
/// log C(p,k) + log delta1 >= mu_n(s) + n Delta I_s* for every evaluated s; else 0 (vacuous).
ChebyshevBound chebyshev_error_lower_bound(const MeasurementMatrix& matrix, const Channel& channel, int k,
                                           double delta1, double slack, const SetSampler& sampler = {});

/// Best bound over a grid of Delta values; each grid value yields a valid bound.
ChebyshevBound best_chebyshev_bound(const MeasurementMatrix& matrix, const Channel& channel, int k,
                                    double delta1, std::span<const double> slack_grid,
                                    const SetSampler& sampler = {});

/// c0 * l(k-l)/p * max{1, log(p / (l(k-l)))}; zero when l = k.
double delta_ell(long long p, int k, int ell, double c0);

struct EllTerm {
  int ell = 0;
  double nu = 0.0;
  double mi = 0.0;
  double delta_ell = 0.0;
  double numerator = 0.0;
  double ratio = 0.0;
};

struct ThresholdResult {
  double n_threshold = 0.0;
  int best_ell = 0;
  double best_nu = 0.0;
  double eta = 0.0;
  double c0 = 0.0;
  std::vector<EllTerm> per_ell;
};

/// min over nu of max over l of log C(p-k+l, l) / (I(X_dif; Y | X_eq) + Delta_l), times (1 - eta).
ThresholdResult weak_converse_threshold(long long p, int k, const Channel& channel, double eta, double c0 = 1.0);

/// Same ordering with numerator l log(p/l) and no remainder term: the i.i.d.-design threshold.
ThresholdResult iid_converse_threshold(long long p, int k, const Channel& channel, double eta);

struct MixtureAtom {
  double weight = 1.0;
  double nu = 0.0;
};

struct MixtureProfile {
  std::vector<MixtureAtom> atoms;

  void validate(int k) const;
  double mean_nu() const;
};

/// max over l of log C(p-k+l, l) / (sum_u w_u I_l(nu_u) + Delta_l) * (1 - eta).
ThresholdResult mixture_threshold(long long p, int k, const Channel& channel, double eta, double c0,
                                  const MixtureProfile& profile);

struct MixtureSearchResult {
  MixtureProfile profile;
  ThresholdResult threshold;
};

/// Minimizes mixture_threshold over profiles with at most `max_atoms` atoms (grid plus local
/// refinement). The single-atom optimum of weak_converse_threshold is always a candidate.
MixtureSearchResult optimize_mixture(long long p, int k, const Channel& channel, double eta, double c0,
                                     int max_atoms = 3);

}  // namespace gtbounds
