#pragma once

#include <cstddef>
#include <cstdint>

#include "scuw/rng.hpp"
#include "scuw/types.hpp"

namespace scuw {

/// Linear convolution of the packet with the channel; grows by L samples.
SamplePacket apply_multipath(const SamplePacket& x, const ChannelRealization& h);

/// Adds i.i.d. CN(0, noise_var) samples. Deterministic for a given seed.
SamplePacket add_awgn(const SamplePacket& x, double noise_var, std::uint64_t seed);
/// Same, drawing from a caller-owned engine.
void add_awgn_inplace(ComplexVector& x, double noise_var, Engine& engine);

/// L + 1 complex Gaussian taps with power profile 10^(-decay_db * l / 10),
/// renormalized so the realization has unit total power.
ChannelRealization make_tdl_channel(std::size_t memory, double decay_db_per_tap, std::uint64_t seed);
ChannelRealization make_tdl_channel(std::size_t memory, double decay_db_per_tap, Engine& engine);

/// Sum |h_l|^2.
double channel_power(const ChannelRealization& h);

}  // namespace scuw
