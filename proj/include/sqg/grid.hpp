#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sqg {

struct Grid {
    int n = 0;
    double length = 2.0 * std::numbers::pi;

    Grid() = default;
    Grid(int n_, double length_ = 2.0 * std::numbers::pi) : n(n_), length(length_) {
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("grid size must be even and >= 4");
        if (!(length > 0.0))
            throw std::invalid_argument("grid length must be positive");
    }

    double dx() const { return length / n; }
    double x(int j) const { return j * length / n; }

    // integer frequency in [-n/2, n/2) for storage index i in [0, n)
    int freq(int i) const { return i < n / 2 ? i : i - n; }
    // physical wavenumber
    double k(int i) const { return freq(i) * (2.0 * std::numbers::pi / length); }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
};

struct RealField {
    Grid grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const Grid& g) : grid(g), v(static_cast<size_t>(g.n) * g.n, 0.0) {}

    double& at(int i, int j) { return v[static_cast<size_t>(i) * grid.n + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * grid.n + j]; }
};

struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), c(static_cast<size_t>(g.n) * g.n, 0.0) {}

    std::complex<double>& at(int i, int j) { return c[static_cast<size_t>(i) * grid.n + j]; }
    std::complex<double> at(int i, int j) const { return c[static_cast<size_t>(i) * grid.n + j]; }

    // coefficient of integer mode (k1, k2), k in [-n/2, n/2)
    std::complex<double>& mode(int k1, int k2) {
        int n = grid.n;
        return c[static_cast<size_t>((k1 % n + n) % n) * n + ((k2 % n + n) % n)];
    }
    std::complex<double> mode(int k1, int k2) const {
        int n = grid.n;
        return c[static_cast<size_t>((k1 % n + n) % n) * n + ((k2 % n + n) % n)];
    }
};

} // namespace sqg
