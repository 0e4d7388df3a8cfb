#include "scuw/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "scuw/multirate.hpp"

namespace scuw {

SamplePacket apply_multipath(const SamplePacket& x, const ChannelRealization& h) {
  if (h.taps.empty()) throw std::invalid_argument("apply_multipath: empty channel");
  if (x.samples.empty()) return x;
  return SamplePacket{linear_convolve(x.samples, h.taps)};
}

void add_awgn_inplace(ComplexVector& x, double noise_var, Engine& engine) {
  if (noise_var < 0.0) throw std::invalid_argument("add_awgn: negative noise variance");
  if (noise_var == 0.0) return;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * noise_var));
  for (auto& v : x) {
    const double re = normal(engine);
    const double im = normal(engine);
    v += Complex(re, im);
  }
}

SamplePacket add_awgn(const SamplePacket& x, double noise_var, std::uint64_t seed) {
  SamplePacket y = x;
  Engine engine = make_engine(seed);
  add_awgn_inplace(y.samples, noise_var, engine);
  return y;
}

ChannelRealization make_tdl_channel(std::size_t memory, double decay_db_per_tap, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ChannelRealization h;
  h.taps.resize(memory + 1);
  for (std::size_t l = 0; l <= memory; ++l) {
    const double power = std::pow(10.0, -decay_db_per_tap * static_cast<double>(l) / 10.0);
    const double re = normal(engine);
    const double im = normal(engine);
    h.taps[l] = Complex(re, im) * std::sqrt(0.5 * power);
  }
  const double norm = std::sqrt(channel_power(h));
  if (norm == 0.0) {
    h.taps.assign(memory + 1, Complex{});
    h.taps[0] = 1.0;
    return h;
  }
  for (auto& t : h.taps) t /= norm;
  return h;
}

ChannelRealization make_tdl_channel(std::size_t memory, double decay_db_per_tap, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return make_tdl_channel(memory, decay_db_per_tap, engine);
}

double channel_power(const ChannelRealization& h) {
  double p = 0.0;
  for (const auto& t : h.taps) p += std::norm(t);
  return p;
}

}  // namespace scuw
