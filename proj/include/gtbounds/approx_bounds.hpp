#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gtbounds {

/// Exact TV distance of one approximation step, paired with its analytic bound.
struct TvBoundReport {
  std::string step;  // "revealed", "hidden", "binomial-gap"
  double exact_tv = 0.0;
  double bound = 0.0;
  long long p = 0;
  int k = 0;
  int ell = 0;
  int m = 0;
  int v_eq = 0;
  bool satisfied = true;  // exact_tv <= bound + 1e-12
};

struct RoosParams {
  double delta_gap = 0.0;  // difference of the two binomial parameters
  int ell = 0;
  double eta_roos = 0.0;   // delta_gap^2 * ell * (ell + 2)
  double c_const = 0.0;    // (2 pi)^(1/4) e^(1/24) / sqrt(2)
};

/// Hypergeometric(k-l, m, p) vs Binomial(k-l, m/p): (k-l-1)/(p-1), clamped at 0.
double soon_bound_eq(int k, int ell, long long p);

/// Hypergeometric(l, m-v, p-k+l) vs Binomial(l, (m-v)/(p-k+l)): (l-1)/(p-k+l-1), clamped at 0.
double soon_bound_dif(int ell, int k, long long p);

double roos_constant();
RoosParams roos_params(int ell, double delta_gap);

/// TV(Bin(l, a), Bin(l, a + delta_gap)) <= min(1, c sqrt(eta) (1 + sqrt(2 eta)) e^(2 eta)).
double roos_bound(int ell, double delta_gap);

/// m/p - (m - v_eq)/(p - k + l), evaluated exactly.
double binomial_gap(long long p, int k, int ell, int m, int v_eq);

/// delta_2 = min(1, delta_{2,1} + delta_{2,2}).
double combined_dif_bound(long long p, int k, int ell, int m, int v_eq);

/// Three reports: revealed-count step, hidden-count step, binomial-parameter-gap step.
std::vector<TvBoundReport> verify_tv_chain(long long p, int k, int ell, int m, int v_eq);

struct TvGridSummary {
  std::vector<TvBoundReport> reports;
  long long violations = 0;
  double worst_ratio = 0.0;  // max exact_tv / bound over reports with bound > 0
};

/// Runs verify_tv_chain over every feasible (k, l, m, v_eq) for each p in `ps`, with
/// k in [k_lo, k_hi], l in 1..k, m in {0, p/4, p/2}.
TvGridSummary verify_tv_grid(const std::vector<long long>& ps, int k_lo, int k_hi);

/// delta_1 log 2.
double mi_perturb_bound_eq(double delta1);

/// delta_2 log(4 / delta_2); zero at delta_2 = 0.
double mi_perturb_bound_dif(double delta2);

struct ContinuityViolation {
  std::string check;  // "mi", "conditional-mi", "data-processing"
  long long trial = 0;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> channel;  // P(Y=1 | x)
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ContinuityReport {
  long long trials = 0;
  std::uint64_t seed = 0;
  long long checks = 0;
  std::vector<ContinuityViolation> violations;
  double worst_mi_ratio = 0.0;           // max |I_P - I_Q| / (delta log(4/delta))
  double worst_conditional_ratio = 0.0;  // max |I(V;Y|A) - I(V;Y|A')| / (TV log 2)
  bool passed() const { return violations.empty(); }
};

/// Random-instance check of the MI perturbation bounds and the data-processing step.
ContinuityReport verify_mi_continuity(long long trials, std::uint64_t seed);

/// theta log(2/theta) for the L1 distance theta in (0, 1/2] between two binary laws.
double binary_entropy_continuity_bound(double l1_distance);

}  // namespace gtbounds
