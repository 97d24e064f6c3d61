#pragma once

#include <span>
#include <vector>

#include "gtbounds/channels.hpp"

namespace gtbounds {

/// Finite pmf on the contiguous integer support offset, offset+1, ..., offset+size-1.
/// Entries are nonnegative and sum to 1 within 1e-12.
class Distribution {
 public:
  Distribution(int offset, std::vector<double> probs);

  /// Divides the weights by their sum first; weights must be nonnegative with positive sum.
  static Distribution normalized(int offset, std::vector<double> weights);
  static Distribution point_mass(int value);
  static Distribution bernoulli(double prob_one);

  int offset() const { return offset_; }
  int min_support() const { return offset_; }
  int max_support() const { return offset_ + static_cast<int>(probs_.size()) - 1; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }

  /// Probability of `value`; zero off the stored support.
  double operator()(int value) const;

  double mean() const;

 private:
  int offset_;
  std::vector<double> probs_;
};

struct BinomialSpec {
  int trials = 0;
  double success_prob = 0.0;
};

struct HypergeometricSpec {
  int draws = 0;       // k'
  int specials = 0;    // m
  int population = 0;  // p'
};

/// log C(n, r) in nats; exact summation for small min(r, n-r), log-gamma otherwise.
double log_binomial_coefficient(long long n, long long r);

/// H_2(x) = -x log x - (1-x) log(1-x) in nats.
double binary_entropy(double x);

Distribution binomial_pmf(const BinomialSpec& spec);
Distribution hypergeometric_pmf(const HypergeometricSpec& spec);

/// (1/2) sum |P(i) - Q(i)| over the union of supports.
double tv_distance(const Distribution& p, const Distribution& q);

double entropy(const Distribution& p);

/// Sum P log(P/Q) in nats; +infinity when P is not absolutely continuous w.r.t. Q.
double kl_divergence(const Distribution& p, const Distribution& q);

/// I(X; Y) for input law `input` and binary-output channel with P(Y=1 | X=x) = prob_one[x],
/// where x ranges over the input's support (prob_one indexed by absolute value of x).
double mutual_information(const Distribution& input, std::span<const double> prob_one);

/// I(V_dif; Y | V_eq) for independent V_dif ~ dif, V_eq ~ eq and Y drawn from `channel`
/// at V_S = V_dif + V_eq.
double conditional_mi(const Channel& channel, int ell, const Distribution& dif, const Distribution& eq);

/// I(X_dif; Y | X_eq) with i.i.d. Bernoulli(nu/k) test entries, nu in [0, k].
double conditional_mi_bernoulli_design(const Channel& channel, int ell, double nu);

}  // namespace gtbounds
