#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gtbounds/channels.hpp"
#include "gtbounds/errors.hpp"
#include "gtbounds/infomath.hpp"
#include "gtbounds/rng.hpp"
#include "gtbounds/thresholds.hpp"

namespace gtbounds {
namespace {

const double kLn2 = std::log(2.0);

double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1 - x) * std::log(1 - x);
}

// Binary-output capacity is attained on the two extreme rows; maximize the concave
// two-input mutual information by ternary search.
double two_input_capacity(double a, double b) {
  auto mi = [&](double pi) { return h2(pi * b + (1 - pi) * a) - pi * h2(b) - (1 - pi) * h2(a); };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 300; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    (mi(m1) < mi(m2) ? lo : hi) = (mi(m1) < mi(m2) ? m1 : m2);
  }
  return mi(0.5 * (lo + hi));
}

const char* const kModels[] = {"noiseless",      "symmetric:0.05", "symmetric:0.11", "symmetric:0.25",
                               "zchannel:0.11", "dilution:0.3",   "dilution:0.5"};

TEST(Capacity, MatchesTwoInputOracle) {
  for (const char* model : kModels) {
    for (int k = 1; k <= 6; ++k) {
      const auto ch = make_channel(NoiseModelSpec::parse(model), k);
      const auto table = ch.table();
      const double a = *std::min_element(table.begin(), table.end());
      const double b = *std::max_element(table.begin(), table.end());
      const auto cap = capacity_output_dist(ch);
      EXPECT_NEAR(cap.capacity, two_input_capacity(a, b), 1e-8) << model << " k=" << k;
      EXPECT_LE(cap.gap, 1e-8);
    }
  }
}

TEST(Capacity, SaddlepointHolds) {
  for (const char* model : kModels) {
    for (int k = 1; k <= 10; ++k) {
      const auto ch = make_channel(NoiseModelSpec::parse(model), k);
      const auto cap = capacity_output_dist(ch);
      for (int v = 0; v <= k; ++v) {
        const auto row = Distribution::bernoulli(ch.prob_one(v));
        EXPECT_LE(kl_divergence(row, cap.q_star), cap.capacity + 1e-6) << model << " k=" << k << " v=" << v;
      }
    }
  }
}

TEST(IStar, NoiselessAndSymmetricClosedForms) {
  for (int k = 1; k <= 10; ++k) {
    const auto noiseless = i_star(make_channel(NoiseModelSpec::parse("noiseless"), k));
    EXPECT_NEAR(noiseless.value, kLn2, 1e-10);
    EXPECT_NEAR(noiseless.nu, k * (1 - std::pow(2.0, -1.0 / k)), 1e-4);
    const auto sym = i_star(make_channel(NoiseModelSpec::parse("symmetric:0.11"), k));
    EXPECT_NEAR(sym.value, kLn2 - h2(0.11), 1e-10);
  }
}

TEST(IStar, NeverExceedsCapacity) {
  for (const char* model : kModels) {
    for (int k = 1; k <= 8; ++k) {
      const auto ch = make_channel(NoiseModelSpec::parse(model), k);
      EXPECT_LE(i_star(ch).value, capacity_output_dist(ch).capacity + 1e-9);
    }
  }
}

TEST(StrongThreshold, NoiselessIsLog2OfSetCount) {
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 2);
  EXPECT_NEAR(strong_converse_threshold(24, 2, ch, 0.0), std::log2(276.0), 1e-8);
  EXPECT_NEAR(strong_converse_threshold(24, 2, ch, 0.25), 0.75 * std::log2(276.0), 1e-8);
  EXPECT_EQ(strong_converse_threshold(2, 2, ch, 0.0), 0.0);
  EXPECT_THROW(strong_converse_threshold(24, 2, ch, 1.0), ParameterError);
  EXPECT_THROW(strong_converse_threshold(24, 3, ch, 0.0), DomainError);
}

TEST(IidThreshold, MatchesClosedForms) {
  const auto noiseless = make_channel(NoiseModelSpec::parse("noiseless"), 10);
  EXPECT_NEAR(iid_converse_threshold(1000000, 10, noiseless, 0.0).n_threshold, 10 * std::log2(1e5), 1e-4);
  const auto sym = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 10);
  EXPECT_NEAR(iid_converse_threshold(1000000, 10, sym, 0.0).n_threshold,
              10 * std::log(1e5) / (kLn2 - h2(0.11)), 1e-3);
}

TEST(DeltaEll, FormulaAndEdges) {
  EXPECT_EQ(delta_ell(100, 5, 5, 1.0), 0.0);
  EXPECT_NEAR(delta_ell(100, 5, 2, 1.0), 6.0 / 100 * std::log(100.0 / 6), 1e-15);
  EXPECT_NEAR(delta_ell(10, 5, 2, 2.0), 2.0 * 6.0 / 10 * 1.0, 1e-15);
  EXPECT_THROW(delta_ell(5, 5, 2, 1.0), DomainError);
}

TEST(WeakThreshold, DominatesStrongAndScalesWithEta) {
  for (const char* model : {"noiseless", "symmetric:0.11", "dilution:0.3"}) {
    for (int k : {1, 2, 5}) {
      const auto ch = make_channel(NoiseModelSpec::parse(model), k);
      for (long long p : {20LL, 200LL, 100000LL}) {
        const auto weak = weak_converse_threshold(p, k, ch, 0.0);
        EXPECT_GE(weak.n_threshold, strong_converse_threshold(p, k, ch, 0.0) - 1e-6) << model << k << p;
        EXPECT_NEAR(weak_converse_threshold(p, k, ch, 0.3).n_threshold, 0.7 * weak.n_threshold,
                    1e-9 * weak.n_threshold);
        EXPECT_EQ(weak.per_ell.size(), static_cast<std::size_t>(k));
        double top = 0.0;
        for (const auto& term : weak.per_ell) top = std::max(top, term.ratio);
        EXPECT_NEAR(top, weak.n_threshold, 1e-9 * top);
      }
    }
  }
}

TEST(WeakThreshold, NondecreasingInP) {
  const auto ch = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 3);
  double previous = 0.0;
  for (long long p : {4LL, 10LL, 50LL, 300LL, 5000LL, 1000000LL}) {
    const double value = weak_converse_threshold(p, 3, ch, 0.0).n_threshold;
    EXPECT_GE(value, previous - 1e-9);
    previous = value;
  }
}

TEST(Mixture, SingleAtomReproducesWeak) {
  const auto ch = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 4);
  const auto weak = weak_converse_threshold(500, 4, ch, 0.0);
  MixtureProfile single{{{1.0, weak.best_nu}}};
  EXPECT_NEAR(mixture_threshold(500, 4, ch, 0.0, 1.0, single).n_threshold, weak.n_threshold, 1e-9);
  const auto search = optimize_mixture(500, 4, ch, 0.0, 1.0);
  EXPECT_LE(search.threshold.n_threshold, weak.n_threshold + 1e-12);
  double total = 0.0;
  for (const auto& atom : search.profile.atoms) total += atom.weight;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Mixture, RejectsInvalidProfiles) {
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 2);
  EXPECT_THROW(mixture_threshold(20, 2, ch, 0.0, 1.0, MixtureProfile{{{0.5, 0.5}}}), ParameterError);
  EXPECT_THROW(mixture_threshold(20, 2, ch, 0.0, 1.0, MixtureProfile{{{1.0, 3.0}}}), ParameterError);
  EXPECT_THROW(mixture_threshold(20, 2, ch, 0.0, 1.0, MixtureProfile{}), ParameterError);
}

MeasurementMatrix random_matrix(CounterRng& rng, int tests, int items, double density) {
  std::vector<std::uint8_t> entries(static_cast<std::size_t>(tests) * items);
  for (auto& e : entries) e = rng.bernoulli(density) ? 1 : 0;
  return MeasurementMatrix(tests, items, std::move(entries));
}

TEST(InfoDensity, MomentsAreSumsOfPerTestTerms) {
  CounterRng rng(21, 0);
  const auto ch = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 3);
  const auto q = capacity_output_dist(ch).q_star;
  const auto per = per_test_info_density(ch, q);
  const auto matrix = random_matrix(rng, 40, 12, 0.2);
  const auto set = random_subset(12, 3, rng);
  double mean = 0.0, var = 0.0;
  for (int v : matrix.defective_counts(set)) {
    mean += per.mean[v];
    var += per.variance[v];
  }
  const auto moments = info_density_moments(matrix, set, ch, q);
  EXPECT_NEAR(moments.mean, mean, 1e-12);
  EXPECT_NEAR(moments.variance, var, 1e-12);
}

TEST(InfoDensity, PerTestMeanIsKlAgainstOutputLaw) {
  const auto ch = make_channel(NoiseModelSpec::parse("dilution:0.3"), 4);
  const auto q = Distribution::bernoulli(0.4);
  const auto per = per_test_info_density(ch, q);
  for (int v = 0; v <= 4; ++v) {
    EXPECT_NEAR(per.mean[v], kl_divergence(Distribution::bernoulli(ch.prob_one(v)), q), 1e-14);
  }
}

TEST(InfoDensity, DetectsAbsoluteContinuityFailure) {
  const auto ch = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 1);
  MeasurementMatrix matrix(1, 2, {1, 0});
  const std::vector<int> set{0};
  EXPECT_THROW(info_density_moments(matrix, set, ch, Distribution::point_mass(1)), AbsoluteContinuityError);
}

TEST(InfoDensity, MeanAndVarianceBoundsOnRandomMatrices) {
  CounterRng rng(22, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const char* model = kModels[trial % 7];
    const int k = 1 + static_cast<int>(rng.below(5));
    const int items = k + 1 + static_cast<int>(rng.below(45));
    const int tests = 1 + static_cast<int>(rng.below(200));
    const auto ch = make_channel(NoiseModelSpec::parse(model), k);
    const auto cap = capacity_output_dist(ch);
    const auto matrix = random_matrix(rng, tests, items, rng.uniform());
    const double var_cap = max_per_test_variance(ch, cap.q_star);
    for (int s = 0; s < 5; ++s) {
      const auto set = random_subset(items, k, rng);
      const auto moments = info_density_moments(matrix, set, ch, cap.q_star);
      EXPECT_LE(moments.mean, tests * cap.capacity + 1e-9);
      EXPECT_LE(moments.variance / tests, var_cap + 1e-12);
    }
  }
}

TEST(Chebyshev, VacuousWhenOnlyOneSet) {
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 3);
  const MeasurementMatrix matrix(5, 3, std::vector<std::uint8_t>(15, 1));
  const auto b = chebyshev_error_lower_bound(matrix, ch, 3, 0.1, 0.1);
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.bound, 0.0);
  EXPECT_FALSE(b.reason.empty());
}

TEST(Chebyshev, ZeroTestsLeavesOnlyDelta1) {
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 2);
  const MeasurementMatrix matrix(0, 10);
  const auto b = chebyshev_error_lower_bound(matrix, ch, 2, 0.25, 0.1);
  EXPECT_FALSE(b.vacuous);
  EXPECT_NEAR(b.bound, 0.75, 1e-15);
}

TEST(Chebyshev, MatchesDirectComputationOnSmallMatrix) {
  CounterRng rng(23, 0);
  const auto ch = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 2);
  const auto matrix = random_matrix(rng, 3, 12, 0.3);
  const double delta1 = 0.5, slack = 0.9;
  const auto cap = capacity_output_dist(ch);
  const auto per = per_test_info_density(ch, cap.q_star);
  const double istar = i_star(ch).value;
  double sum = 0.0, max_mean = -1.0;
  int sets = 0;
  for (int a = 0; a < 12; ++a) {
    for (int b = a + 1; b < 12; ++b) {
      double mean = 0.0, var = 0.0;
      for (int i = 0; i < 3; ++i) {
        const int v = matrix.at(i, a) + matrix.at(i, b);
        mean += per.mean[v];
        var += per.variance[v];
      }
      max_mean = std::max(max_mean, mean);
      sum += var / std::pow(3 * slack * istar, 2);
      ++sets;
    }
  }
  const auto bound = chebyshev_error_lower_bound(matrix, ch, 2, delta1, slack);
  ASSERT_LE(max_mean + 3 * slack * istar, std::log(66.0) + std::log(delta1));
  EXPECT_EQ(bound.sets_evaluated, 66);
  EXPECT_NEAR(bound.max_mean, max_mean, 1e-12);
  EXPECT_NEAR(bound.bound, std::max(0.0, 1 - sum / sets - delta1), 1e-12);
}

TEST(Chebyshev, MonteCarloTracksExhaustive) {
  CounterRng rng(24, 0);
  const auto ch = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 2);
  const auto matrix = random_matrix(rng, 6, 30, 0.3);
  SetSampler exact;
  exact.mode = SetSampler::Mode::kExhaustive;
  SetSampler sampled;
  sampled.mode = SetSampler::Mode::kMonteCarlo;
  sampled.trials = 20000;
  sampled.seed = 5;
  const auto a = chebyshev_error_lower_bound(matrix, ch, 2, 0.01, 0.9, exact);
  const auto b = chebyshev_error_lower_bound(matrix, ch, 2, 0.01, 0.9, sampled);
  EXPECT_TRUE(a.exhaustive);
  EXPECT_FALSE(b.exhaustive);
  EXPECT_NEAR(a.chebyshev_term, b.chebyshev_term, 5 * b.std_error + 1e-12);
}

TEST(Chebyshev, BestOverGridIsAtLeastEachValue) {
  CounterRng rng(25, 0);
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 2);
  const auto matrix = random_matrix(rng, 4, 24, 0.3);
  const auto grid = default_slack_grid();
  const double delta1 = default_delta1(24, 2);
  const auto best = best_chebyshev_bound(matrix, ch, 2, delta1, grid);
  for (double slack : grid) {
    EXPECT_GE(best.bound, chebyshev_error_lower_bound(matrix, ch, 2, delta1, slack).bound);
  }
  EXPECT_NEAR(delta1, 1 / std::sqrt(276.0), 1e-12);
  EXPECT_EQ(default_delta1(3, 1), 0.5);
}


TEST(Examples, IStarAndCapacity) {
  const auto one = i_star(make_channel(NoiseModelSpec::parse("noiseless"), 1));
  EXPECT_NEAR(one.nu, 0.5, 1e-6);
  EXPECT_NEAR(one.value, kLn2, 1e-12);
  EXPECT_NEAR(i_star(make_channel(NoiseModelSpec::parse("symmetric:0.11"), 1)).value, 0.3466, 1e-4);
  const auto three = make_channel(NoiseModelSpec::parse("noiseless"), 3);
  const double best = i_star(three).value;
  for (int i = 0; i <= 1000; ++i) EXPECT_GE(best, conditional_mi_bernoulli_design(three, 3, 3.0 * i / 1000) - 1e-15);

  const auto cap1 = capacity_output_dist(make_channel(NoiseModelSpec::parse("noiseless"), 1));
  EXPECT_NEAR(cap1.capacity, kLn2, 1e-12);
  EXPECT_NEAR(cap1.q_star(1), 0.5, 1e-9);
  const auto cap2 = capacity_output_dist(make_channel(NoiseModelSpec::parse("symmetric:0.2"), 2));
  EXPECT_NEAR(cap2.capacity, kLn2 - h2(0.2), 1e-9);
  EXPECT_NEAR(cap2.q_star(1), 0.5, 1e-9);
  EXPECT_NEAR(capacity_output_dist(Channel({0.3, 0.3, 0.3})).capacity, 0.0, 1e-15);
}

TEST(Examples, StrongThresholdValues) {
  EXPECT_NEAR(strong_converse_threshold(4, 1, make_channel(NoiseModelSpec::parse("noiseless"), 1), 0.0), 2.0, 1e-9);
  const auto sym = make_channel(NoiseModelSpec::parse("symmetric:0.11"), 5);
  EXPECT_NEAR(strong_converse_threshold(10000, 5, sym, 0.0),
              log_binomial_coefficient(10000, 5) / (kLn2 - h2(0.11)), 1e-6);
}

TEST(Examples, MomentEdgeCases) {
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 2);
  const std::vector<int> set{0, 1};
  const auto empty = info_density_moments(MeasurementMatrix(0, 4), set, ch, Distribution::bernoulli(0.5));
  EXPECT_EQ(empty.mean, 0.0);
  EXPECT_EQ(empty.variance, 0.0);
  const auto zeros = info_density_moments(MeasurementMatrix(7, 4), set, ch, Distribution::bernoulli(0.5));
  EXPECT_NEAR(zeros.mean, 7 * kLn2, 1e-13);
  EXPECT_EQ(zeros.variance, 0.0);
}

TEST(Examples, DeltaEllValues) {
  EXPECT_NEAR(delta_ell(100, 4, 2, 1.0), 0.04 * std::log(25.0), 1e-15);
  EXPECT_NEAR(delta_ell(100, 4, 2, 1.0), 0.12876, 1e-5);
  EXPECT_EQ(delta_ell(17, 8, 4, 1.0) > 0, true);
  EXPECT_NEAR(delta_ell(16, 8, 4, 1.0), 1.0, 1e-15);
  const auto single = weak_converse_threshold(50, 1, make_channel(NoiseModelSpec::parse("noiseless"), 1), 0.0);
  ASSERT_EQ(single.per_ell.size(), 1u);
  EXPECT_EQ(single.per_ell[0].delta_ell, 0.0);
}

TEST(Examples, MixtureDegenerateAndRandomChannels) {
  const auto ch = make_channel(NoiseModelSpec::parse("dilution:0.3"), 3);
  MixtureProfile one{{{1.0, 0.8}}};
  MixtureProfile two{{{0.5, 0.8}, {0.5, 0.8}}};
  EXPECT_NEAR(mixture_threshold(300, 3, ch, 0.0, 1.0, one).n_threshold,
              mixture_threshold(300, 3, ch, 0.0, 1.0, two).n_threshold, 1e-12);

  CounterRng rng(61, 0);
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + static_cast<int>(rng.below(3));
    std::vector<double> table(static_cast<std::size_t>(k + 1));
    for (auto& q : table) q = rng.uniform();
    const Channel random(table);
    const auto weak = weak_converse_threshold(200, k, random, 0.0);
    const auto best = optimize_mixture(200, k, random, 0.0, 1.0, 3);
    EXPECT_LE(best.threshold.n_threshold, weak.n_threshold * (1 + 1e-12));
    EXPECT_LE(best.profile.atoms.size(), 3u);
  }
}

TEST(Examples, ChebyshevTrivialCases) {
  const auto ch = make_channel(NoiseModelSpec::parse("noiseless"), 2);
  const auto same = chebyshev_error_lower_bound(MeasurementMatrix(3, 2), ch, 2, 0.5, 0.1);
  EXPECT_TRUE(same.vacuous);
  EXPECT_EQ(same.bound, 0.0);
}

}  // namespace
}  // namespace gtbounds
