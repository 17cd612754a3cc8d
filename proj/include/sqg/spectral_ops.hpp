#pragma once

#include "sqg/grid.hpp"

#include <utility>

namespace sqg {

// (d/dx1 f, d/dx2 f) via i*k multipliers; Nyquist rows are zeroed so the
// result of an odd-order derivative stays real-representable.
std::pair<RealField, RealField> gradient(const SpectralField& f);

// coefficient at k multiplied by |k|^{2s}; k=0 annihilated; s in (0,1)
SpectralField fractional_laplacian_spectral(const SpectralField& f, double s);

// u = (-R2, R1) theta with Riesz multiplier i*k_j/|k| (0 at k=0 and Nyquist)
std::pair<RealField, RealField> riesz_velocity(const SpectralField& theta);

// 2/3 rule: zero modes with max(|k1|,|k2|) > n/3
SpectralField dealias(const SpectralField& f);

void enforce_hermitian(SpectralField& f);

// divergence du1/dx1 + du2/dx2 evaluated spectrally, returned as max |coefficient|
double spectral_divergence_max(const RealField& u1, const RealField& u2);

// sum |c_k|^2 (equals grid mean of f^2 by Parseval)
double spectral_energy(const SpectralField& f);
double mean_square(const RealField& f);

} // namespace sqg
