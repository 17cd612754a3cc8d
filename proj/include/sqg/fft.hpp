#pragma once

#include "sqg/grid.hpp"

#include <complex>
#include <vector>

namespace sqg {

// Coefficient convention: forward_transform returns c with
//   f(x) = sum_k c_k exp(i k . x),
// i.e. the raw DFT scaled by 1/n^2. inverse_transform is the unscaled
// inverse DFT. Plans are cached per size and guarded by a mutex; execution
// uses the new-array interface and is safe from concurrent threads.

SpectralField forward_transform(const RealField& f);
RealField inverse_transform(const SpectralField& f);

// 2D real-to-complex transform on an nf x nf grid, unscaled; output is the
// full row-major nf x (nf/2 + 1) half-spectrum. Used by the fine-grid kernel
// convolution, which needs sizes unrelated to the solver grid.
std::vector<std::complex<double>> r2c_transform(const std::vector<double>& v, int nf);

} // namespace sqg
