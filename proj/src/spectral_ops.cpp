#include "sqg/spectral_ops.hpp"

#include "sqg/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace sqg {

std::pair<RealField, RealField> gradient(const SpectralField& f) {
    const int n = f.grid.n;
    SpectralField d1(f.grid), d2(f.grid);
    for (int i = 0; i < n; ++i) {
        const double k1 = i == n / 2 ? 0.0 : f.grid.k(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = j == n / 2 ? 0.0 : f.grid.k(j);
            const std::complex<double> c = f.at(i, j);
            d1.at(i, j) = std::complex<double>(-k1 * c.imag(), k1 * c.real());
            d2.at(i, j) = std::complex<double>(-k2 * c.imag(), k2 * c.real());
        }
    }
    return {inverse_transform(d1), inverse_transform(d2)};
}

SpectralField fractional_laplacian_spectral(const SpectralField& f, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("fractional_laplacian_spectral: s must be in (0,1)");
    const int n = f.grid.n;
    SpectralField out(f.grid);
    for (int i = 0; i < n; ++i) {
        const double k1 = f.grid.k(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = f.grid.k(j);
            const double k2sum = k1 * k1 + k2 * k2;
            out.at(i, j) = k2sum == 0.0 ? 0.0 : f.at(i, j) * std::pow(k2sum, s);
        }
    }
    return out;
}

std::pair<RealField, RealField> riesz_velocity(const SpectralField& theta) {
    const int n = theta.grid.n;
    SpectralField u1(theta.grid), u2(theta.grid);
    for (int i = 0; i < n; ++i) {
        const double k1 = i == n / 2 ? 0.0 : theta.grid.k(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = j == n / 2 ? 0.0 : theta.grid.k(j);
            const double kn = std::sqrt(k1 * k1 + k2 * k2);
            if (kn == 0.0) continue;
            const std::complex<double> c = theta.at(i, j);
            // u1 = -R2 theta = -(i k2/|k|) theta, u2 = R1 theta = (i k1/|k|) theta
            u1.at(i, j) = std::complex<double>(k2 * c.imag(), -k2 * c.real()) / kn;
            u2.at(i, j) = std::complex<double>(-k1 * c.imag(), k1 * c.real()) / kn;
        }
    }
    return {inverse_transform(u1), inverse_transform(u2)};
}

SpectralField dealias(const SpectralField& f) {
    const int n = f.grid.n;
    const double cut = n / 3.0;
    SpectralField out = f;
    for (int i = 0; i < n; ++i) {
        const int k1 = std::abs(f.grid.freq(i));
        for (int j = 0; j < n; ++j) {
            const int k2 = std::abs(f.grid.freq(j));
            if (std::max(k1, k2) > cut) out.at(i, j) = 0.0;
        }
    }
    return out;
}

void enforce_hermitian(SpectralField& f) {
    const int n = f.grid.n;
    for (int i = 0; i < n; ++i) {
        const int im = (n - i) % n;
        for (int j = 0; j < n; ++j) {
            const int jm = (n - j) % n;
            if (i > im || (i == im && j > jm)) continue;
            if (i == im && j == jm) {
                f.at(i, j) = f.at(i, j).real();
            } else {
                const std::complex<double> avg =
                    0.5 * (f.at(i, j) + std::conj(f.at(im, jm)));
                f.at(i, j) = avg;
                f.at(im, jm) = std::conj(avg);
            }
        }
    }
}

double spectral_divergence_max(const RealField& u1, const RealField& u2) {
    const SpectralField c1 = forward_transform(u1);
    const SpectralField c2 = forward_transform(u2);
    const int n = c1.grid.n;
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k1 = i == n / 2 ? 0.0 : c1.grid.k(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = j == n / 2 ? 0.0 : c1.grid.k(j);
            const std::complex<double> div =
                std::complex<double>(0.0, k1) * c1.at(i, j) +
                std::complex<double>(0.0, k2) * c2.at(i, j);
            m = std::max(m, std::abs(div));
        }
    }
    return m;
}

double spectral_energy(const SpectralField& f) {
    double e = 0.0;
    for (const auto& z : f.c) e += std::norm(z);
    return e;
}

double mean_square(const RealField& f) {
    double e = 0.0;
    for (double x : f.v) e += x * x;
    return e / static_cast<double>(f.v.size());
}

} // namespace sqg
