#include <stdexcept>

#include "scuw/types.hpp"

namespace scuw {

Complex EqualizerGains::mean_signal_gain() const {
  if (gains.empty() || gains.size() != response.size()) {
    throw std::logic_error("equalizer: gains and response sizes differ");
  }
  Complex acc{};
  for (std::size_t k = 0; k < gains.size(); ++k) acc += gains[k] * response[k];
  return acc / static_cast<double>(gains.size());
}

EqualizerGains mmse_gains(ComplexVector response, double noise_var) {
  if (noise_var < 0.0) throw std::invalid_argument("mmse: negative noise variance");
  EqualizerGains eq;
  eq.gains.resize(response.size());
  for (std::size_t k = 0; k < response.size(); ++k) {
    const double den = std::norm(response[k]) + noise_var;
    eq.gains[k] = den > 0.0 ? std::conj(response[k]) / den : Complex{};
  }
  eq.response = std::move(response);
  eq.noise_var = noise_var;
  return eq;
}

}  // namespace scuw
