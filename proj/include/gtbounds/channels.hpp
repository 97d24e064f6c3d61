#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtbounds/rng.hpp"

namespace gtbounds {

enum class NoiseFamily {
  kNoiseless,
  kSymmetric,         // Y = 1{V>0} xor Bernoulli(rho)
  kZChannel,          // a 1-output is flipped to 0 w.p. rho
  kZChannelMirrored,  // a 0-output is flipped to 1 w.p. rho
  kDilution,          // each defective in the test is independently erased w.p. q
};

/// Noise family plus its parameter. Parses from "noiseless", "symmetric:0.11",
/// "zchannel:0.11", "zchannel-mirrored:0.11", "dilution:0.5".
struct NoiseModelSpec {
  NoiseFamily family = NoiseFamily::kNoiseless;
  double parameter = 0.0;

  static NoiseModelSpec parse(std::string_view text);
  std::string to_string() const;
  void validate() const;
};

/// Observation model P(Y = 1 | V_S = v) for v = 0..k, stored densely.
class Channel {
 public:
  /// Table entry v is P(Y=1 | V_S=v); requires at least two entries, each in [0, 1].
  explicit Channel(std::vector<double> prob_one);

  int k() const { return static_cast<int>(prob_one_.size()) - 1; }
  double prob_one(int v) const;
  double prob(int y, int v) const { return y == 1 ? prob_one(v) : 1.0 - prob_one(v); }
  std::span<const double> table() const { return prob_one_; }

 private:
  std::vector<double> prob_one_;
};

Channel make_channel(const NoiseModelSpec& spec, int k);

/// Draws Y given V_S = v. Consumes exactly one uniform from the stream.
int sample_output(const Channel& channel, int v, CounterRng& rng);

}  // namespace gtbounds
