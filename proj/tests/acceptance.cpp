// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gtbounds/approx_bounds.hpp"
#include "gtbounds/channels.hpp"
#include "gtbounds/infomath.hpp"
#include "gtbounds/report.hpp"
#include "gtbounds/simulator.hpp"
#include "gtbounds/thresholds.hpp"

using namespace gtbounds;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > limit_seconds) {
    outcome.pass = false;
    outcome.detail += "; over time limit";
  }
  if (!outcome.pass) ++failures;
  std::printf("criterion %d %s  %s: %s (%.2f s, limit %.0f s)\n", id, outcome.pass ? "PASS" : "FAIL", title.c_str(),
              outcome.detail.c_str(), seconds, limit_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, a, b, c, d);
  return buffer;
}

Channel channel(const std::string& model, int k) { return make_channel(NoiseModelSpec::parse(model), k); }

double h2(double x) { return binary_entropy(x); }

const std::vector<std::string> kModels = {"noiseless",     "symmetric:0.05", "symmetric:0.11", "symmetric:0.25",
                                          "zchannel:0.11", "dilution:0.3",   "dilution:0.5"};

Outcome closed_form(const std::string& model, double target) {
  const auto ch = channel(model, 10);
  const double weak = weak_converse_threshold(1000000, 10, ch, 0.0).n_threshold;
  const double iid = iid_converse_threshold(1000000, 10, ch, 0.0).n_threshold;
  const double rel = std::abs(weak - target) / target;
  return {rel <= 0.05, fmt("weak=%.2f target=%.2f rel_err=%.2f%% (iid-numerator threshold %.2f)", weak, target,
                           100 * rel, iid)};
}

// Criterion 5-8 artifacts, written to `dir` so two runs can be compared byte for byte.
struct Artifacts {
  std::string tv_json;
  std::string mi_json;
  std::string consistency_json;
  std::string sweep_csv;
};

Artifacts run_tv(Artifacts a, Outcome& outcome) {
  const auto summary = verify_tv_grid({50, 100, 500}, 2, 10);
  a.tv_json = to_json(summary).dump();
  outcome = {summary.violations == 0,
             fmt("%.0f checks, %.0f violations, worst exact/bound ratio %.4f", static_cast<double>(summary.reports.size()),
                 static_cast<double>(summary.violations), summary.worst_ratio)};
  return a;
}

struct ConsistencyRow {
  std::string model;
  std::string design;
  int n = 0;
  ChebyshevBound bound;
  SimEstimate estimate;
};

std::vector<ConsistencyRow> run_consistency(std::uint64_t seed) {
  const int p = 24;
  const int k = 2;
  std::vector<ConsistencyRow> rows;
  for (const std::string model : {"noiseless", "symmetric:0.11"}) {
    const auto ch = channel(model, k);
    const auto nu = i_star(ch).nu;
    const int n = static_cast<int>(std::floor(0.5 * strong_converse_threshold(p, k, ch, 0.0)));
    const int weight = std::max(1, static_cast<int>(std::lround(n * nu / k)));
    char profile[128];
    std::snprintf(profile, sizeof profile, "profile:0.5@%.17g,0.5@%.17g", 0.5 * nu, std::min(1.5 * nu, 2.0));
    char iid[64];
    std::snprintf(iid, sizeof iid, "iid:%.17g", nu);
    std::uint64_t index = 0;
    for (const std::string design : {std::string(iid), "ccw:" + std::to_string(weight), std::string(profile)}) {
      const std::uint64_t design_seed = derive_seed(seed, index++);
      const auto spec = EnsembleSpec::parse(design, n, design_seed);
      const auto matrix = gen_matrix(spec, n, p, k);
      const auto grid = default_slack_grid();
      ConsistencyRow row{model, spec.to_string(), n, best_chebyshev_bound(matrix, ch, k, default_delta1(p, k), grid),
                         estimate_pe(matrix, ch, k, make_map_decoder(k, ch), 10000, design_seed)};
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "acceptance_artifacts";
  std::filesystem::create_directories(out_dir);

  report(1, "noiseless closed form", 10, [] { return closed_form("noiseless", 10 * std::log2(1e5)); });
  report(2, "symmetric closed form", 10, [] {
    return closed_form("symmetric:0.11", 10 * std::log(1e5) / (std::log(2.0) - h2(0.11)));
  });

  report(3, "saddlepoint property", 30, [] {
    double worst = -1.0;
    int checks = 0;
    for (const auto& model : kModels) {
      for (int k = 1; k <= 10; ++k) {
        const auto ch = channel(model, k);
        const auto cap = capacity_output_dist(ch);
        for (int v = 0; v <= k; ++v) {
          worst = std::max(worst, kl_divergence(Distribution::bernoulli(ch.prob_one(v)), cap.q_star) - cap.capacity);
          ++checks;
        }
      }
    }
    return Outcome{worst <= 1e-6, fmt("%.0f rows, max KL - C = %.3g", checks, worst)};
  });

  report(4, "moment bounds", 30, [] {
    CounterRng rng(4, 0);
    double worst_mean = -1e300, worst_var = -1e300;
    int checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto& model = kModels[static_cast<std::size_t>(trial) % kModels.size()];
      const int k = 1 + static_cast<int>(rng.below(6));
      const int p = k + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(50 - k)));
      const int n = 1 + static_cast<int>(rng.below(200));
      const auto ch = channel(model, k);
      const auto cap = capacity_output_dist(ch);
      const double var_cap = max_per_test_variance(ch, cap.q_star);
      const auto matrix = gen_matrix(EnsembleSpec{IidDesign{k * rng.uniform()}, 0}, n, p, k, rng);
      for (int s = 0; s < 10; ++s) {
        const auto set = random_subset(p, k, rng);
        const auto m = info_density_moments(matrix, set, ch, cap.q_star);
        worst_mean = std::max(worst_mean, m.mean - n * cap.capacity);
        worst_var = std::max(worst_var, m.variance / n - var_cap);
        ++checks;
      }
    }
    return Outcome{worst_mean <= 1e-9 && worst_var <= 1e-12,
                   fmt("%.0f sets, max(mu - nC) = %.3g, max(sigma^2/n - bound) = %.3g", checks, worst_mean, worst_var)};
  });

  Artifacts run[2];
  for (int r = 0; r < 2; ++r) {
    const bool show = r == 0;
    auto timed = [&](int id, const std::string& title, double limit, const std::function<Outcome()>& body) {
      if (show) {
        report(id, title, limit, body);
      } else {
        body();
      }
    };

    timed(5, "TV bound grid", 120, [&] {
      Outcome o;
      run[r] = run_tv(run[r], o);
      return o;
    });

    timed(6, "MI continuity", 60, [&] {
      const auto continuity = verify_mi_continuity(10000, 42);
      run[r].mi_json = to_json(continuity).dump();
      return Outcome{continuity.passed(),
                     fmt("%.0f checks, %.0f violations, worst ratios %.4f (dif) %.4f (eq)",
                         static_cast<double>(continuity.checks), static_cast<double>(continuity.violations.size()),
                         continuity.worst_mi_ratio, continuity.worst_conditional_ratio)};
    });

    timed(7, "converse consistency", 300, [&] {
      const auto rows = run_consistency(7);
      json doc = json::array();
      bool ok = true;
      bool noiseless_half = true;
      std::ostringstream detail;
      for (const auto& row : rows) {
        const double se = row.estimate.std_error();
        const bool dominates = row.estimate.pe_hat >= row.bound.bound - 4 * se;
        ok = ok && dominates;
        if (row.model == "noiseless" && row.bound.bound < 0.5) noiseless_half = false;
        detail << row.model << '/' << row.design.substr(0, row.design.find(':')) << " n=" << row.n
               << " pe=" << fmt("%.4f", row.estimate.pe_hat) << " bound=" << fmt("%.4f", row.bound.bound) << "; ";
        doc.push_back({{"model", row.model},
                       {"design", row.design},
                       {"n", row.n},
                       {"bound", to_json(row.bound)},
                       {"estimate", to_json(row.estimate)}});
      }
      run[r].consistency_json = doc.dump();
      std::string text = detail.str();
      if (!noiseless_half) text += "noiseless bound below 0.5";
      return Outcome{ok && noiseless_half, text};
    });

    timed(8, "phase transition", 300, [&] {
      const int p = 30, k = 2;
      const auto ch = channel("noiseless", k);
      const double strong = strong_converse_threshold(p, k, ch, 0.0);
      char ensemble[64];
      std::snprintf(ensemble, sizeof ensemble, "iid:%.17g", i_star(ch).nu);
      const auto spec = EnsembleSpec::parse(ensemble, 0, 8);
      std::vector<int> grid;
      for (int n = 0; n <= 30; ++n) grid.push_back(n);
      const auto result = sweep_n(spec, ch, p, k, grid, 4000, 8);
      std::ostringstream csv;
      csv << "# strong_threshold=" << format_number(strong) << '\n';
      write_sweep_csv(csv, result);
      run[r].sweep_csv = csv.str();
      if (!result.crossing_n) return Outcome{false, "no pe = 0.5 crossing on the grid"};
      const double ratio = *result.crossing_n / strong;
      return Outcome{ratio >= 0.6 && ratio <= 1.6,
                     fmt("crossing n=%.2f, strong threshold %.2f, ratio %.3f (window 0.6..1.6)", *result.crossing_n,
                         strong, ratio)};
    });

    const auto dir = out_dir / ("run" + std::to_string(r + 1));
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "tv_grid.json", std::ios::binary) << run[r].tv_json;
    std::ofstream(dir / "mi_continuity.json", std::ios::binary) << run[r].mi_json;
    std::ofstream(dir / "converse_consistency.json", std::ios::binary) << run[r].consistency_json;
    std::ofstream(dir / "phase_transition.csv", std::ios::binary) << run[r].sweep_csv;
  }

  report(9, "determinism", 1, [&] {
    int identical = 0;
    for (const char* name : {"tv_grid.json", "mi_continuity.json", "converse_consistency.json", "phase_transition.csv"}) {
      auto slurp = [&](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
      };
      const auto a = slurp(out_dir / "run1" / name);
      if (!a.empty() && a == slurp(out_dir / "run2" / name)) ++identical;
    }
    return Outcome{identical == 4, fmt("%.0f of 4 artifacts byte-identical across two runs", identical)};
  });

  return failures;
}
