#include "scuw/multirate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace scuw {
namespace {

ComplexVector unitary_transform(std::span<const Complex> x, bool inverse) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  ComplexVector out(x.begin(), x.end());
  detail::fft_inplace(out.data(), out.size(), inverse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
  for (auto& v : out) v *= scale;
  return out;
}

void require_factor(std::size_t factor, const char* what) {
  if (factor == 0) throw std::invalid_argument(std::string(what) + ": factor must be >= 1");
}

// Below this many multiply-accumulates the direct sum wins.
constexpr std::size_t kDirectWorkLimit = 1u << 14;

ComplexVector linear_direct(std::span<const Complex> x, std::span<const Complex> f) {
  ComplexVector y(x.size() + f.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Complex xi = x[i];
    if (xi == Complex{}) continue;
    for (std::size_t l = 0; l < f.size(); ++l) y[i + l] += xi * f[l];
  }
  return y;
}

ComplexVector linear_fft(std::span<const Complex> x, std::span<const Complex> f) {
  const std::size_t out_len = x.size() + f.size() - 1;
  const std::size_t n = detail::good_fft_size(out_len);
  ComplexVector xa(n), fa(n);
  std::copy(x.begin(), x.end(), xa.begin());
  std::copy(f.begin(), f.end(), fa.begin());
  detail::fft_inplace(xa.data(), n, false);
  detail::fft_inplace(fa.data(), n, false);
  for (std::size_t k = 0; k < n; ++k) xa[k] *= fa[k];
  detail::fft_inplace(xa.data(), n, true);
  const double scale = 1.0 / static_cast<double>(n);
  ComplexVector y(out_len);
  for (std::size_t k = 0; k < out_len; ++k) y[k] = xa[k] * scale;
  return y;
}

}  // namespace

ComplexVector dft(std::span<const Complex> x) { return unitary_transform(x, false); }

ComplexVector idft(std::span<const Complex> x) { return unitary_transform(x, true); }

ComplexVector upsample_time(std::span<const Complex> x, std::size_t a) {
  require_factor(a, "upsample_time");
  ComplexVector y(x.size() * a);
  for (std::size_t m = 0; m < x.size(); ++m) y[m * a] = x[m];
  return y;
}

ComplexVector upsample_dft(std::span<const Complex> x, std::size_t a) {
  require_factor(a, "upsample_dft");
  if (a == 1) return ComplexVector(x.begin(), x.end());
  ComplexVector tiled = tile_bins(dft(x), a);
  const double scale = 1.0 / std::sqrt(static_cast<double>(a));
  for (auto& v : tiled) v *= scale;
  return idft(tiled);
}

ComplexVector downsample_time(std::span<const Complex> x, std::size_t b) {
  require_factor(b, "downsample_time");
  if (x.size() % b != 0) {
    throw std::invalid_argument("downsample_time: factor " + std::to_string(b) +
                                " does not divide length " + std::to_string(x.size()));
  }
  ComplexVector y(x.size() / b);
  for (std::size_t m = 0; m < y.size(); ++m) y[m] = x[m * b];
  return y;
}

ComplexVector downsample_dft(std::span<const Complex> x, std::size_t b) {
  require_factor(b, "downsample_dft");
  if (x.size() % b != 0) {
    throw std::invalid_argument("downsample_dft: factor " + std::to_string(b) +
                                " does not divide length " + std::to_string(x.size()));
  }
  if (b == 1) return ComplexVector(x.begin(), x.end());
  ComplexVector folded = fold_bins(dft(x), b);
  const double scale = 1.0 / std::sqrt(static_cast<double>(b));
  for (auto& v : folded) v *= scale;
  return idft(folded);
}

ComplexVector tile_bins(std::span<const Complex> spectrum, std::size_t a) {
  require_factor(a, "tile_bins");
  ComplexVector out;
  out.reserve(spectrum.size() * a);
  for (std::size_t r = 0; r < a; ++r) out.insert(out.end(), spectrum.begin(), spectrum.end());
  return out;
}

ComplexVector fold_bins(std::span<const Complex> spectrum, std::size_t b) {
  require_factor(b, "fold_bins");
  if (spectrum.size() % b != 0) {
    throw std::invalid_argument("fold_bins: factor does not divide spectrum length");
  }
  const std::size_t n = spectrum.size() / b;
  ComplexVector out(n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) out[k % n] += spectrum[k];
  return out;
}

ComplexVector linear_convolve(std::span<const Complex> x, std::span<const Complex> f,
                              ConvolutionPath path) {
  if (x.empty() || f.empty()) throw std::invalid_argument("linear_convolve: empty input");
  if (path == ConvolutionPath::automatic) {
    const std::size_t work = x.size() * f.size();
    path = (work <= kDirectWorkLimit || std::min(x.size(), f.size()) <= 16)
               ? ConvolutionPath::direct
               : ConvolutionPath::fft;
  }
  return path == ConvolutionPath::direct ? linear_direct(x, f) : linear_fft(x, f);
}

ComplexVector circ_shift(std::span<const Complex> x, long tau) {
  const long n = static_cast<long>(x.size());
  ComplexVector y(x.size());
  if (n == 0) return y;
  const long shift = ((tau % n) + n) % n;
  for (long k = 0; k < n; ++k) y[static_cast<std::size_t>((k + shift) % n)] = x[k];
  return y;
}

ComplexVector circular_convolve(std::span<const Complex> x, std::span<const Complex> c,
                                ConvolutionPath path) {
  if (x.empty() || c.empty()) throw std::invalid_argument("circular_convolve: empty input");
  if (c.size() > x.size()) {
    throw std::invalid_argument("circular_convolve: kernel longer than the cycle");
  }
  const std::size_t n = x.size();
  if (path == ConvolutionPath::automatic) {
    path = (n * c.size() <= kDirectWorkLimit) ? ConvolutionPath::direct : ConvolutionPath::fft;
  }
  if (path == ConvolutionPath::direct) {
    ComplexVector y(n);
    for (std::size_t l = 0; l < c.size(); ++l) {
      const Complex cl = c[l];
      if (cl == Complex{}) continue;
      for (std::size_t k = 0; k < n; ++k) y[(k + l) % n] += cl * x[k];
    }
    return y;
  }
  return apply_circulant(circulant_eigenvalues(c, n), x);
}

DiagonalOperator circulant_eigenvalues(std::span<const Complex> c, std::size_t n) {
  if (n == 0 || c.empty()) throw std::invalid_argument("circulant_eigenvalues: empty input");
  if (c.size() > n) {
    throw std::invalid_argument("circulant_eigenvalues: column longer than the matrix");
  }
  ComplexVector gains = dft(zero_pad(c, n));
  const double scale = std::sqrt(static_cast<double>(n));
  for (auto& g : gains) g *= scale;
  return DiagonalOperator{std::move(gains)};
}

ComplexVector apply_circulant(const DiagonalOperator& op, std::span<const Complex> x) {
  if (op.size() != x.size()) throw std::invalid_argument("apply_circulant: size mismatch");
  ComplexVector spec = dft(x);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= op.gains[k];
  return idft(spec);
}

ComplexVector zero_pad(std::span<const Complex> x, std::size_t n) {
  ComplexVector y(n);
  std::copy_n(x.begin(), std::min(n, x.size()), y.begin());
  return y;
}

}  // namespace scuw
