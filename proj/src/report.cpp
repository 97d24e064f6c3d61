#include "gtbounds/report.hpp"

#include <cmath>
#include <charconv>
#include <ostream>

namespace gtbounds {

using nlohmann::json;

namespace {

// JSON has no infinity; non-finite values become strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto end = std::to_chars(buffer, buffer + sizeof buffer, x).ptr;
  return std::string(buffer, end);
}

json to_json(const ThresholdResult& result) {
  json per_ell = json::array();
  for (const auto& term : result.per_ell) {
    per_ell.push_back({{"ell", term.ell},
                       {"nu", number(term.nu)},
                       {"mi", number(term.mi)},
                       {"delta_ell", number(term.delta_ell)},
                       {"numerator", number(term.numerator)},
                       {"ratio", number(term.ratio)}});
  }
  return {{"n_threshold", number(result.n_threshold)},
          {"best_ell", result.best_ell},
          {"best_nu", number(result.best_nu)},
          {"eta", result.eta},
          {"c0", result.c0},
          {"per_ell", per_ell}};
}

json to_json(const MixtureProfile& profile) {
  json atoms = json::array();
  for (const auto& atom : profile.atoms) atoms.push_back({{"weight", atom.weight}, {"nu", atom.nu}});
  return atoms;
}

json to_json(const ChebyshevBound& bound) {
  return {{"bound", bound.bound},
          {"vacuous", bound.vacuous},
          {"reason", bound.reason},
          {"delta1", bound.delta1},
          {"slack", bound.slack},
          {"i_star", bound.i_star},
          {"capacity", bound.capacity},
          {"log_num_sets", bound.log_num_sets},
          {"sets_evaluated", bound.sets_evaluated},
          {"exhaustive", bound.exhaustive},
          {"max_mean", number(bound.max_mean)},
          {"chebyshev_term", number(bound.chebyshev_term)},
          {"std_error", number(bound.std_error)}};
}

json to_json(const SimEstimate& estimate) {
  return {{"pe_hat", estimate.pe_hat},       {"trials", estimate.trials},   {"errors", estimate.errors},
          {"ci_low", estimate.ci_low},       {"ci_high", estimate.ci_high}, {"std_error", estimate.std_error()},
          {"seed", estimate.seed}};
}

json to_json(const SweepResult& sweep) {
  json points = json::array();
  for (const auto& point : sweep.points) {
    json entry = to_json(point.estimate);
    entry["n"] = point.n;
    entry["pe_monotone"] = point.pe_monotone;
    points.push_back(entry);
  }
  return {{"points", points}, {"crossing_n", sweep.crossing_n ? json(*sweep.crossing_n) : json(nullptr)}};
}

json to_json(const TvBoundReport& report) {
  return {{"step", report.step}, {"p", report.p},           {"k", report.k},
          {"ell", report.ell},   {"m", report.m},           {"v_eq", report.v_eq},
          {"exact_tv", report.exact_tv}, {"bound", report.bound}, {"satisfied", report.satisfied}};
}

json to_json(const TvGridSummary& summary) {
  json reports = json::array();
  for (const auto& report : summary.reports) reports.push_back(to_json(report));
  return {{"checks", summary.reports.size()},
          {"violations", summary.violations},
          {"worst_ratio", summary.worst_ratio},
          {"reports", reports}};
}

json to_json(const ContinuityReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"check", v.check},
                          {"trial", v.trial},
                          {"p", v.p},
                          {"q", v.q},
                          {"channel", v.channel},
                          {"lhs", v.lhs},
                          {"rhs", v.rhs}});
  }
  return {{"trials", report.trials},
          {"seed", report.seed},
          {"checks", report.checks},
          {"violations", violations},
          {"worst_mi_ratio", report.worst_mi_ratio},
          {"worst_conditional_ratio", report.worst_conditional_ratio},
          {"passed", report.passed()}};
}

void write_threshold_csv(std::ostream& out, const ThresholdResult& result) {
  out << kThresholdCsvHeader << '\n';
  for (const auto& t : result.per_ell) {
    out << t.ell << ',' << format_number(t.nu) << ',' << format_number(t.mi) << ',' << format_number(t.delta_ell)
        << ',' << format_number(t.numerator) << ',' << format_number(t.ratio) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << kSweepCsvHeader << '\n';
  for (const auto& point : sweep.points) {
    const auto& e = point.estimate;
    out << point.n << ',' << e.trials << ',' << e.errors << ',' << format_number(e.pe_hat) << ','
        << format_number(e.ci_low) << ',' << format_number(e.ci_high) << '\n';
  }
}

void write_estimate_csv(std::ostream& out, const SimEstimate& e) {
  out << kEstimateCsvHeader << '\n'
      << e.trials << ',' << e.errors << ',' << format_number(e.pe_hat) << ',' << format_number(e.ci_low) << ','
      << format_number(e.ci_high) << ',' << e.seed << '\n';
}

void write_bound_csv(std::ostream& out, const ChebyshevBound& b) {
  out << kBoundCsvHeader << '\n'
      << format_number(b.bound) << ',' << (b.vacuous ? 1 : 0) << ',' << format_number(b.delta1) << ','
      << format_number(b.slack) << ',' << format_number(b.i_star) << ',' << format_number(b.capacity) << ','
      << format_number(b.log_num_sets) << ',' << b.sets_evaluated << ',' << (b.exhaustive ? 1 : 0) << ','
      << format_number(b.max_mean) << ',' << format_number(b.chebyshev_term) << '\n';
}

void write_tv_csv(std::ostream& out, const TvGridSummary& summary) {
  out << kTvCsvHeader << '\n';
  for (const auto& r : summary.reports) {
    out << r.step << ',' << r.p << ',' << r.k << ',' << r.ell << ',' << r.m << ',' << r.v_eq << ','
        << format_number(r.exact_tv) << ',' << format_number(r.bound) << ',' << (r.satisfied ? 1 : 0) << '\n';
  }
}

}  // namespace gtbounds
