#include "gtbounds/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gtbounds/approx_bounds.hpp"
#include "gtbounds/channels.hpp"
#include "gtbounds/errors.hpp"
#include "gtbounds/matrix.hpp"
#include "gtbounds/report.hpp"
#include "gtbounds/simulator.hpp"
#include "gtbounds/thresholds.hpp"

namespace gtbounds {

using nlohmann::json;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

bool is_randomized(const std::string& command) {
  return command == "simulate" || command == "sweep" || command == "verify";
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--seed must be a nonnegative integer or 'auto', got '" + text + "'");
  }
  return value;
}

std::string resolve_seed(const std::string& seed, std::ostream& err) {
  if (seed != "auto") return seed;
  std::random_device device;
  const std::uint64_t chosen = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  err << "seed: " << chosen << '\n';
  return std::to_string(chosen);
}

Channel channel_for(const RunConfig& config, int k) {
  NoiseModelSpec spec;
  try {
    spec = NoiseModelSpec::parse(config.channel);
  } catch (const ParameterError& e) {
    throw UsageError(std::string("--channel: ") + e.what());
  }
  return make_channel(spec, k);
}

EnsembleSpec ensemble_for(const RunConfig& config, const Channel& channel, int tests, std::uint64_t seed) {
  const std::string text =
      config.ensemble.empty() ? "iid:" + format_number(i_star(channel).nu) : config.ensemble;
  try {
    return EnsembleSpec::parse(text, tests, seed);
  } catch (const ParameterError& e) {
    throw UsageError(std::string("--ensemble: ") + e.what());
  }
}

struct Artifact {
  json result;
  std::vector<std::pair<std::string, std::string>> comments;  // CSV "# key=value" lines
  std::string table;
  int status = 0;
};

Artifact run_threshold(const RunConfig& c) {
  const auto channel = channel_for(c, c.k);
  const auto nu_opt = i_star(channel);
  const double strong = strong_converse_threshold_from(c.p, c.k, nu_opt.value, c.eta);
  const auto weak = weak_converse_threshold(c.p, c.k, channel, c.eta, c.c0);
  const auto iid = iid_converse_threshold(c.p, c.k, channel, c.eta);
  CapacityResult capacity;
  try {
    capacity = capacity_output_dist(channel);
  } catch (const ConvergenceError& e) {
    capacity = e.best();
  }

  Artifact a;
  a.result = {{"strong", {{"n_threshold", strong},
                          {"i_star", nu_opt.value},
                          {"i_star_bits", nu_opt.value / kLn2},
                          {"nu", nu_opt.nu}}},
              {"weak", to_json(weak)},
              {"iid", to_json(iid)},
              {"capacity", {{"nats", capacity.capacity},
                            {"bits", capacity.capacity / kLn2},
                            {"gap", capacity.gap},
                            {"iterations", capacity.iterations}}}};
  a.comments = {{"strong_threshold", format_number(strong)},
                {"weak_threshold", format_number(weak.n_threshold)},
                {"iid_threshold", format_number(iid.n_threshold)}};
  if (c.mixture) {
    const auto search = optimize_mixture(c.p, c.k, channel, c.eta, c.c0);
    a.result["mixture"] = {{"profile", to_json(search.profile)}, {"threshold", to_json(search.threshold)}};
    a.comments.emplace_back("mixture_threshold", format_number(search.threshold.n_threshold));
  }
  std::ostringstream table;
  write_threshold_csv(table, weak);
  a.table = table.str();
  return a;
}

Artifact run_bound(const RunConfig& c, const std::optional<std::uint64_t>& seed) {
  const auto matrix = load_matrix(c.matrix);
  if (c.k > matrix.items()) throw UsageError("--k exceeds the number of items in the matrix");
  if (c.p > 0 && c.p != matrix.items()) throw UsageError("--p disagrees with the matrix file");
  SetSampler sampler;
  if (c.trials > 0) sampler.trials = c.trials;
  if (log_binomial_coefficient(matrix.items(), c.k) > std::log(static_cast<double>(sampler.exhaustive_cutoff))) {
    if (!seed) throw UsageError("bound: too many sets to enumerate; Monte Carlo sampling needs --seed");
  }
  if (seed) sampler.seed = *seed;
  const auto channel = channel_for(c, c.k);
  const double delta1 = c.delta1 ? *c.delta1 : default_delta1(matrix.items(), c.k);
  ChebyshevBound bound;
  if (c.delta) {
    bound = chebyshev_error_lower_bound(matrix, channel, c.k, delta1, *c.delta, sampler);
  } else {
    const auto grid = default_slack_grid();
    bound = best_chebyshev_bound(matrix, channel, c.k, delta1, grid, sampler);
  }
  const double strong = strong_converse_threshold(matrix.items(), c.k, channel, 0.0);

  Artifact a;
  a.result = {{"bound", to_json(bound)},
              {"tests", matrix.tests()},
              {"items", matrix.items()},
              {"strong_threshold", strong}};
  a.comments = {{"tests", std::to_string(matrix.tests())},
                {"items", std::to_string(matrix.items())},
                {"strong_threshold", format_number(strong)}};
  if (!bound.reason.empty()) a.comments.emplace_back("reason", bound.reason);
  std::ostringstream table;
  write_bound_csv(table, bound);
  a.table = table.str();
  return a;
}

Artifact run_simulate(const RunConfig& c, std::uint64_t seed) {
  const auto channel = channel_for(c, c.k);
  const auto decoder = make_map_decoder(c.k, channel);
  Artifact a;
  SimEstimate estimate;
  if (!c.matrix.empty()) {
    const auto matrix = load_matrix(c.matrix);
    if (c.p > 0 && c.p != matrix.items()) throw UsageError("--p disagrees with the matrix file");
    if (c.k > matrix.items()) throw UsageError("--k exceeds the number of items in the matrix");
    estimate = estimate_pe(matrix, channel, c.k, decoder, c.trials, seed, c.workers);
    a.result["tests"] = matrix.tests();
    a.result["items"] = matrix.items();
    a.result["matrix"] = c.matrix;
  } else {
    const auto spec = ensemble_for(c, channel, c.n, seed);
    if (c.mode == "fixed") {
      const auto matrix = gen_matrix(spec, c.n, static_cast<int>(c.p), c.k);
      estimate = estimate_pe(matrix, channel, c.k, decoder, c.trials, seed, c.workers);
    } else {
      estimate = estimate_pe_ensemble(spec, c.n, static_cast<int>(c.p), channel, c.k, decoder, c.trials, seed,
                                      c.workers);
    }
    a.result["tests"] = c.n;
    a.result["items"] = c.p;
    a.result["ensemble"] = spec.to_string();
  }
  a.result["estimate"] = to_json(estimate);
  std::ostringstream table;
  write_estimate_csv(table, estimate);
  a.table = table.str();
  return a;
}

Artifact run_sweep(const RunConfig& c, std::uint64_t seed) {
  const auto grid = parse_n_grid(c.n_grid);
  const auto channel = channel_for(c, c.k);
  const auto spec = ensemble_for(c, channel, grid.back(), seed);
  const auto mode = c.mode == "fixed" ? SweepMode::kFixedMatrix : SweepMode::kEnsemble;
  const auto sweep = sweep_n(spec, channel, static_cast<int>(c.p), c.k, grid, c.trials, seed, mode, c.workers);
  const double strong = strong_converse_threshold(c.p, c.k, channel, c.eta);
  const double weak = c.k < c.p ? weak_converse_threshold(c.p, c.k, channel, c.eta, c.c0).n_threshold : 0.0;

  Artifact a;
  a.result = {{"sweep", to_json(sweep)},
              {"ensemble", spec.to_string()},
              {"strong_threshold", strong},
              {"weak_threshold", weak}};
  a.comments = {{"ensemble", spec.to_string()},
                {"strong_threshold", format_number(strong)},
                {"weak_threshold", format_number(weak)},
                {"crossing_n", sweep.crossing_n ? format_number(*sweep.crossing_n) : "none"}};
  std::ostringstream table;
  write_sweep_csv(table, sweep);
  a.table = table.str();
  return a;
}

Artifact run_verify(const RunConfig& c, std::uint64_t seed, std::ostream& err) {
  const std::vector<long long> ps = c.p > 0 ? std::vector<long long>{c.p} : std::vector<long long>{50, 100, 500};
  const int k_lo = c.k > 0 ? c.k : 2;
  const int k_hi = c.k > 0 ? c.k : 10;
  const auto tv = verify_tv_grid(ps, k_lo, k_hi);
  const auto mi = verify_mi_continuity(c.trials, seed);
  const bool passed = tv.violations == 0 && mi.passed();

  Artifact a;
  a.result = {{"tv", to_json(tv)}, {"mi", to_json(mi)}, {"passed", passed}};
  a.comments = {{"tv_checks", std::to_string(tv.reports.size())},
                {"tv_violations", std::to_string(tv.violations)},
                {"mi_checks", std::to_string(mi.checks)},
                {"mi_violations", std::to_string(mi.violations.size())},
                {"worst_mi_ratio", format_number(mi.worst_mi_ratio)},
                {"worst_conditional_ratio", format_number(mi.worst_conditional_ratio)}};
  std::ostringstream table;
  write_tv_csv(table, tv);
  a.table = table.str();
  if (!passed) {
    err << "verify: " << tv.violations << " TV violations, " << mi.violations.size() << " MI violations\n";
    a.status = 1;
  }
  return a;
}

template <class T>
T json_value(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"channel", c.channel},
          {"p", c.p},
          {"k", c.k},
          {"n", c.n},
          {"n_grid", c.n_grid},
          {"eta", c.eta},
          {"c0", c.c0},
          {"delta", c.delta ? json(*c.delta) : json(nullptr)},
          {"delta1", c.delta1 ? json(*c.delta1) : json(nullptr)},
          {"ensemble", c.ensemble},
          {"mode", c.mode},
          {"matrix", c.matrix},
          {"trials", c.trials},
          {"seed", c.seed},
          {"workers", c.workers},
          {"mixture", c.mixture},
          {"output", c.output},
          {"format", c.format}};
}

void merge_run_config(RunConfig& c, const json& patch) {
  if (!patch.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : patch.items()) {
    if (key == "command") c.command = json_value<std::string>(value, key);
    else if (key == "channel") c.channel = json_value<std::string>(value, key);
    else if (key == "p") c.p = json_value<long long>(value, key);
    else if (key == "k") c.k = json_value<int>(value, key);
    else if (key == "n") c.n = json_value<int>(value, key);
    else if (key == "n_grid") c.n_grid = json_value<std::string>(value, key);
    else if (key == "eta") c.eta = json_value<double>(value, key);
    else if (key == "c0") c.c0 = json_value<double>(value, key);
    else if (key == "delta") c.delta = value.is_null() ? std::nullopt : std::optional(json_value<double>(value, key));
    else if (key == "delta1") c.delta1 = value.is_null() ? std::nullopt : std::optional(json_value<double>(value, key));
    else if (key == "ensemble") c.ensemble = json_value<std::string>(value, key);
    else if (key == "mode") c.mode = json_value<std::string>(value, key);
    else if (key == "matrix") c.matrix = json_value<std::string>(value, key);
    else if (key == "trials") c.trials = json_value<long long>(value, key);
    else if (key == "seed") c.seed = value.is_number_unsigned() ? std::to_string(value.get<std::uint64_t>())
                                                                 : json_value<std::string>(value, key);
    else if (key == "workers") c.workers = json_value<int>(value, key);
    else if (key == "mixture") c.mixture = json_value<bool>(value, key);
    else if (key == "output") c.output = json_value<std::string>(value, key);
    else if (key == "format") c.format = json_value<std::string>(value, key);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json parsed;
  try {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '#') {
      std::istringstream lines(text);
      std::string line;
      const std::string prefix = "# config=";
      bool found = false;
      while (std::getline(lines, line)) {
        if (line.rfind(prefix, 0) == 0) {
          parsed = json::parse(line.substr(prefix.size()));
          found = true;
          break;
        }
      }
      if (!found) throw UsageError("no '# config=' line in " + path.string());
    } else {
      parsed = json::parse(text);
      if (parsed.is_object() && parsed.contains("schema_version") && parsed.contains("config")) {
        parsed = parsed["config"];
      }
    }
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path.string() + ": " + e.what());
  }
  RunConfig config;
  merge_run_config(config, parsed);
  return config;
}

std::vector<int> parse_n_grid(const std::string& text) {
  auto parse_int = [&](std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
      throw UsageError("--n-grid: bad entry '" + std::string(s) + "'");
    }
    return value;
  };
  std::vector<int> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<int> parts;
    std::string_view rest = text;
    while (true) {
      const auto colon = rest.find(':');
      parts.push_back(parse_int(rest.substr(0, colon)));
      if (colon == std::string_view::npos) break;
      rest = rest.substr(colon + 1);
    }
    if (parts.size() > 3) throw UsageError("--n-grid: expected lo:hi or lo:hi:step");
    const int step = parts.size() == 3 ? parts[2] : 1;
    if (step < 1 || parts[1] < parts[0]) throw UsageError("--n-grid: need lo <= hi and step >= 1");
    for (int n = parts[0]; n <= parts[1]; n += step) grid.push_back(n);
  } else {
    std::string_view rest = text;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      grid.push_back(parse_int(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  if (grid.empty()) throw UsageError("--n-grid is empty");
  return grid;
}

void validate(const RunConfig& c) {
  const std::string& cmd = c.command;
  if (cmd != "threshold" && cmd != "bound" && cmd != "simulate" && cmd != "sweep" && cmd != "verify") {
    throw UsageError("unknown command '" + cmd + "'");
  }
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.mode != "ensemble" && c.mode != "fixed") throw UsageError("--mode must be ensemble or fixed");
  if (c.workers < 1) throw UsageError("--workers must be >= 1");
  if (!(c.eta >= 0.0 && c.eta < 1.0)) throw UsageError("--eta must lie in [0, 1)");
  if (!(c.c0 > 0.0 && std::isfinite(c.c0))) throw UsageError("--c0 must be a finite value > 0");
  if (c.delta && !(*c.delta > 0.0 && std::isfinite(*c.delta))) throw UsageError("--delta must be > 0");
  if (c.delta1 && !(*c.delta1 > 0.0 && *c.delta1 < 1.0)) throw UsageError("--delta1 must lie in (0, 1)");
  if (c.trials < 0) throw UsageError("--trials must be >= 1");
  if (c.seed != "auto" && !c.seed.empty()) parse_seed(c.seed);
  if (is_randomized(cmd) && c.seed.empty()) {
    throw UsageError(cmd + " is randomized: pass --seed <integer> or --seed auto");
  }

  auto need_pk = [&](bool strict) {
    if (c.k < 1) throw UsageError("--k must be >= 1");
    if (c.p < c.k || (strict && c.p == c.k)) {
      throw UsageError(std::string("--p must be ") + (strict ? "> k" : ">= k"));
    }
  };
  auto need_trials = [&] {
    if (c.trials < 1) throw UsageError("--trials must be >= 1");
  };

  if (cmd == "threshold") {
    need_pk(true);
  } else if (cmd == "bound") {
    if (c.matrix.empty()) throw UsageError("bound needs --matrix");
    if (c.k < 1) throw UsageError("--k must be >= 1");
  } else if (cmd == "simulate") {
    need_trials();
    if (c.matrix.empty()) {
      need_pk(false);
      if (c.n < 0) throw UsageError("simulate needs --n (or --matrix)");
    } else if (c.k < 1) {
      throw UsageError("--k must be >= 1");
    }
  } else if (cmd == "sweep") {
    need_pk(false);
    need_trials();
    if (c.n_grid.empty()) throw UsageError("sweep needs --n-grid");
    parse_n_grid(c.n_grid);
  } else {
    need_trials();
    if (c.k < 0 || (c.k > 0 && c.p > 0 && c.k >= c.p)) throw UsageError("verify: need k < p");
    if (c.p < 0) throw UsageError("--p must be >= 0");
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err, const json& sources) {
  try {
    validate(config);
    RunConfig resolved = config;
    if (!resolved.seed.empty()) resolved.seed = resolve_seed(resolved.seed, err);
    const std::optional<std::uint64_t> seed =
        resolved.seed.empty() ? std::nullopt : std::optional(parse_seed(resolved.seed));

    Artifact artifact;
    const auto& cmd = resolved.command;
    if (cmd == "threshold") artifact = run_threshold(resolved);
    else if (cmd == "bound") artifact = run_bound(resolved, seed);
    else if (cmd == "simulate") artifact = run_simulate(resolved, *seed);
    else if (cmd == "sweep") artifact = run_sweep(resolved, *seed);
    else artifact = run_verify(resolved, *seed, err);

    std::ostringstream text;
    const json config_json = to_json(resolved);
    if (resolved.format == "json") {
      json doc = {{"schema_version", kSchemaVersion}, {"command", cmd}, {"config", config_json}};
      if (!sources.is_null()) doc["sources"] = sources;
      doc["result"] = artifact.result;
      text << doc.dump(2) << '\n';
    } else {
      text << "# schema_version=" << kSchemaVersion << '\n' << "# command=" << cmd << '\n';
      text << "# config=" << config_json.dump() << '\n';
      if (!sources.is_null()) text << "# sources=" << sources.dump() << '\n';
      for (const auto& [key, value] : artifact.comments) text << "# " << key << '=' << value << '\n';
      text << artifact.table;
    }

    if (resolved.output.empty()) {
      out << text.str();
    } else {
      std::ofstream file(resolved.output, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + resolved.output);
      file << text.str();
      if (!file) throw std::runtime_error("write failed for " + resolved.output);
    }
    return artifact.status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Converse bounds and decoder simulations for noisy group testing", "gtbounds"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file or a previous output; flags override it");

  RunConfig flags;
  struct Field {
    std::string key;
    CLI::App* sub;
    CLI::Option* option;
    std::function<void(RunConfig&)> copy;
  };
  std::vector<Field> fields;
  auto add = [&](CLI::App* sub, const std::string& key, auto RunConfig::*member, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    auto* option = sub->add_option(flag, flags.*member, help);
    fields.push_back({key, sub, option, [&flags, member](RunConfig& dst) { dst.*member = flags.*member; }});
  };
  auto add_flag = [&](CLI::App* sub, const std::string& key, bool RunConfig::*member, const std::string& help) {
    auto* option = sub->add_flag("--" + key, flags.*member, help);
    fields.push_back({key, sub, option, [&flags, member](RunConfig& dst) { dst.*member = flags.*member; }});
  };
  auto add_output = [&](CLI::App* sub) {
    add(sub, "output", &RunConfig::output, "Output file (default: standard output)");
    add(sub, "format", &RunConfig::format, "json or csv");
  };

  auto* threshold = app.add_subcommand("threshold", "Strong and weak converse thresholds");
  add(threshold, "channel", &RunConfig::channel, "noiseless | symmetric:r | zchannel:r | zchannel-mirrored:r | dilution:q");
  add(threshold, "p", &RunConfig::p, "Number of items");
  add(threshold, "k", &RunConfig::k, "Number of defectives");
  add(threshold, "eta", &RunConfig::eta, "Target error probability eta in [0, 1)");
  add(threshold, "c0", &RunConfig::c0, "Remainder constant");
  add_flag(threshold, "mixture", &RunConfig::mixture, "Also optimize a non-identical row profile");
  add_output(threshold);

  auto* bound = app.add_subcommand("bound", "Chebyshev lower bound on the error for a matrix file");
  add(bound, "channel", &RunConfig::channel, "Noise model");
  add(bound, "matrix", &RunConfig::matrix, "Matrix file");
  add(bound, "p", &RunConfig::p, "Number of items (checked against the file)");
  add(bound, "k", &RunConfig::k, "Number of defectives");
  add(bound, "delta", &RunConfig::delta, "Slack Delta; unset sweeps a grid");
  add(bound, "delta1", &RunConfig::delta1, "delta1 in (0, 1)");
  add(bound, "trials", &RunConfig::trials, "Sampled sets when enumeration is too large");
  add(bound, "seed", &RunConfig::seed, "Seed for set sampling, or auto");
  add_output(bound);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo error of the MAP decoder");
  auto* sweep = app.add_subcommand("sweep", "Error probability over a grid of test counts");
  for (auto* sub : {simulate, sweep}) {
    add(sub, "channel", &RunConfig::channel, "Noise model");
    add(sub, "p", &RunConfig::p, "Number of items");
    add(sub, "k", &RunConfig::k, "Number of defectives");
    add(sub, "ensemble", &RunConfig::ensemble, "iid:nu | ccw:w | profile:w@nu,...");
    add(sub, "mode", &RunConfig::mode, "ensemble (redraw the matrix per trial) or fixed");
    add(sub, "trials", &RunConfig::trials, "Monte Carlo trials");
    add(sub, "seed", &RunConfig::seed, "Seed, or auto");
    add(sub, "workers", &RunConfig::workers, "Worker threads");
    add_output(sub);
  }
  add(simulate, "n", &RunConfig::n, "Number of tests");
  add(simulate, "matrix", &RunConfig::matrix, "Fixed matrix file instead of an ensemble");
  add(sweep, "n_grid", &RunConfig::n_grid, "lo:hi[:step] or n1,n2,...");
  add(sweep, "eta", &RunConfig::eta, "eta for the overlaid thresholds");
  add(sweep, "c0", &RunConfig::c0, "Remainder constant for the overlaid weak threshold");

  auto* verify = app.add_subcommand("verify", "Check the TV and mutual-information perturbation bounds");
  add(verify, "p", &RunConfig::p, "Single p for the TV grid (default 50, 100, 500)");
  add(verify, "k", &RunConfig::k, "Single k for the TV grid (default 2..10)");
  add(verify, "trials", &RunConfig::trials, "Random MI instances");
  add(verify, "seed", &RunConfig::seed, "Seed, or auto");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig config;
    json sources = {{"config_file", nullptr}, {"flags", json::array()}};
    if (!config_path.empty()) {
      config = load_run_config(config_path);
      sources["config_file"] = config_path;
    }
    CLI::App* chosen = nullptr;
    for (auto* sub : app.get_subcommands()) chosen = sub;
    if (chosen) config.command = chosen->get_name();
    if (config.command.empty()) throw UsageError("no command given; run with --help");
    for (const auto& field : fields) {
      if (field.sub == chosen && field.option->count() > 0) {
        field.copy(config);
        sources["flags"].push_back(field.key);
      }
    }
    return run(config, out, err, sources);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gtbounds
