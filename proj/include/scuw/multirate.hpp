#pragma once

#include <cstddef>
#include <span>

#include "scuw/types.hpp"

namespace scuw {

/// Selects how convolutions are evaluated. `direct` is the O(n*m) sum and is
/// what the oracle tests compare against.
enum class ConvolutionPath { automatic, direct, fft };

/// Unitary DFT: X[k] = 1/sqrt(n) * sum_m x[m] exp(-j 2 pi k m / n). Any n >= 1.
ComplexVector dft(std::span<const Complex> x);
/// Unitary inverse DFT, idft(dft(x)) == x.
ComplexVector idft(std::span<const Complex> x);

/// Zero-insertion up-sampler: y[m] = x[m / a] when a | m, else 0. Length a*|x|.
ComplexVector upsample_time(std::span<const Complex> x, std::size_t a);
/// Up-sampling through the DFT domain,
/// (1/sqrt(a)) F_{aM}^H (1_{a x 1} kron I_M) F_M x. Equals upsample_time.
ComplexVector upsample_dft(std::span<const Complex> x, std::size_t a);

/// Decimator y[m] = x[m * b]. Throws std::invalid_argument unless b | |x|.
ComplexVector downsample_time(std::span<const Complex> x, std::size_t b);
/// Decimation through the DFT domain,
/// (1/sqrt(b)) F_N^H (1_{1 x b} kron I_N) F_{bN} x. Equals downsample_time.
ComplexVector downsample_dft(std::span<const Complex> x, std::size_t b);

/// Repeats a length-M spectrum `a` times: (1_{a x 1} kron I_M) X.
ComplexVector tile_bins(std::span<const Complex> spectrum, std::size_t a);
/// Sums the `b` consecutive length-N chunks of a length-bN spectrum:
/// (1_{1 x b} kron I_N) X. Throws unless b | |X|.
ComplexVector fold_bins(std::span<const Complex> spectrum, std::size_t b);

/// Full linear convolution, output length |x| + |f| - 1.
ComplexVector linear_convolve(std::span<const Complex> x, std::span<const Complex> f,
                              ConvolutionPath path = ConvolutionPath::automatic);

/// Cyclic delay by tau: y[k] = x[(k - tau) mod n]. Negative tau advances.
ComplexVector circ_shift(std::span<const Complex> x, long tau);

/// Cyclic convolution of x with c zero-padded to |x|. Throws if |c| > |x|.
ComplexVector circular_convolve(std::span<const Complex> x, std::span<const Complex> c,
                                ConvolutionPath path = ConvolutionPath::automatic);

/// Eigenvalues of the n x n circulant whose first column is c zero-padded to n:
/// lambda = sqrt(n) * dft(c_padded), so circular_convolve(x, c) equals
/// idft(lambda .* dft(x)). Throws if |c| > n.
DiagonalOperator circulant_eigenvalues(std::span<const Complex> c, std::size_t n);

/// idft(op .* dft(x)); throws on a size mismatch.
ComplexVector apply_circulant(const DiagonalOperator& op, std::span<const Complex> x);

/// Zero-pads (or truncates) x to length n.
ComplexVector zero_pad(std::span<const Complex> x, std::size_t n);

}  // namespace scuw
