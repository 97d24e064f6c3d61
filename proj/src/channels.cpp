#include "gtbounds/channels.hpp"

#include <charconv>
#include <cmath>

#include "gtbounds/errors.hpp"

namespace gtbounds {

namespace {

struct FamilyName {
  NoiseFamily family;
  std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {NoiseFamily::kNoiseless, "noiseless"},
    {NoiseFamily::kSymmetric, "symmetric"},
    {NoiseFamily::kZChannel, "zchannel"},
    {NoiseFamily::kZChannelMirrored, "zchannel-mirrored"},
    {NoiseFamily::kDilution, "dilution"},
};

double parse_probability(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParameterError("noise model: cannot parse parameter '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

NoiseModelSpec NoiseModelSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  for (const auto& entry : kFamilyNames) {
    if (entry.name != name) continue;
    NoiseModelSpec spec{entry.family, 0.0};
    if (entry.family == NoiseFamily::kNoiseless) {
      if (colon != std::string_view::npos) {
        throw ParameterError("noise model: 'noiseless' takes no parameter");
      }
    } else {
      if (colon == std::string_view::npos) {
        throw ParameterError("noise model: '" + std::string(name) + "' requires a parameter");
      }
      spec.parameter = parse_probability(text.substr(colon + 1));
    }
    spec.validate();
    return spec;
  }
  throw ParameterError("noise model: unknown family '" + std::string(name) + "'");
}

std::string NoiseModelSpec::to_string() const {
  for (const auto& entry : kFamilyNames) {
    if (entry.family != family) continue;
    if (family == NoiseFamily::kNoiseless) return std::string(entry.name);
    char buffer[32];
    const auto end = std::to_chars(buffer, buffer + sizeof buffer, parameter).ptr;
    return std::string(entry.name) + ':' + std::string(buffer, end);
  }
  return "unknown";
}

void NoiseModelSpec::validate() const {
  const double x = parameter;
  switch (family) {
    case NoiseFamily::kNoiseless:
      return;
    case NoiseFamily::kSymmetric:
      if (!(x >= 0.0 && x < 0.5)) throw ParameterError("symmetric noise requires rho in [0, 1/2)");
      return;
    case NoiseFamily::kZChannel:
    case NoiseFamily::kZChannelMirrored:
      if (!(x >= 0.0 && x < 1.0)) throw ParameterError("z-channel requires rho in [0, 1)");
      return;
    case NoiseFamily::kDilution:
      if (!(x >= 0.0 && x < 1.0)) throw ParameterError("dilution requires q in [0, 1)");
      return;
  }
}

Channel::Channel(std::vector<double> prob_one) : prob_one_(std::move(prob_one)) {
  if (prob_one_.size() < 2) throw DomainError("channel table needs entries for v = 0..k with k >= 1");
  for (double q : prob_one_) {
    if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("channel entries must lie in [0, 1]");
  }
}

double Channel::prob_one(int v) const {
  if (v < 0 || v > k()) {
    throw DomainError("defective count " + std::to_string(v) + " outside 0.." + std::to_string(k()));
  }
  return prob_one_[static_cast<std::size_t>(v)];
}

Channel make_channel(const NoiseModelSpec& spec, int k) {
  if (k < 1) throw DomainError("channel requires k >= 1");
  spec.validate();
  const double x = spec.parameter;
  std::vector<double> table(static_cast<std::size_t>(k) + 1);
  for (int v = 0; v <= k; ++v) {
    double q = 0.0;
    switch (spec.family) {
      case NoiseFamily::kNoiseless:
        q = v > 0 ? 1.0 : 0.0;
        break;
      case NoiseFamily::kSymmetric:
        q = v > 0 ? 1.0 - x : x;
        break;
      case NoiseFamily::kZChannel:
        q = v > 0 ? 1.0 - x : 0.0;
        break;
      case NoiseFamily::kZChannelMirrored:
        q = v > 0 ? 1.0 : x;
        break;
      case NoiseFamily::kDilution:
        q = 1.0 - std::pow(x, v);
        break;
    }
    table[static_cast<std::size_t>(v)] = q;
  }
  return Channel(std::move(table));
}

int sample_output(const Channel& channel, int v, CounterRng& rng) {
  const double q = channel.prob_one(v);
  return rng.uniform() < q ? 1 : 0;
}

}  // namespace gtbounds
