#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "gtbounds/approx_bounds.hpp"
#include "gtbounds/simulator.hpp"
#include "gtbounds/thresholds.hpp"

namespace gtbounds {

inline constexpr int kSchemaVersion = 1;

// Fixed CSV headers.
inline constexpr const char* kThresholdCsvHeader = "ell,nu,mi,delta_ell,numerator,ratio";
inline constexpr const char* kSweepCsvHeader = "n,trials,errors,pe_hat,ci_low,ci_high";
inline constexpr const char* kEstimateCsvHeader = "trials,errors,pe_hat,ci_low,ci_high,seed";
inline constexpr const char* kBoundCsvHeader =
    "bound,vacuous,delta1,slack,i_star,capacity,log_num_sets,sets_evaluated,exhaustive,max_mean,chebyshev_term";
inline constexpr const char* kTvCsvHeader = "step,p,k,ell,m,v_eq,exact_tv,bound,satisfied";

/// Shortest decimal form that reads back to the same double; "inf"/"nan" for non-finite values.
std::string format_number(double x);

nlohmann::json to_json(const ThresholdResult& result);
nlohmann::json to_json(const MixtureProfile& profile);
nlohmann::json to_json(const ChebyshevBound& bound);
nlohmann::json to_json(const SimEstimate& estimate);
nlohmann::json to_json(const SweepResult& sweep);
nlohmann::json to_json(const TvBoundReport& report);
nlohmann::json to_json(const TvGridSummary& summary);
nlohmann::json to_json(const ContinuityReport& report);

void write_threshold_csv(std::ostream& out, const ThresholdResult& result);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
void write_estimate_csv(std::ostream& out, const SimEstimate& estimate);
void write_bound_csv(std::ostream& out, const ChebyshevBound& bound);
void write_tv_csv(std::ostream& out, const TvGridSummary& summary);

}  // namespace gtbounds
