// Timing comparison of the OpenMP kernels against their serial references.

#include "sqg/cs_kernel.hpp"
#include "sqg/grid.hpp"
#include "sqg/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    // one warmup, then best of reps
    fn();
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel);
}

} // namespace

int main() {
    const int n = 512;
    const size_t sz = static_cast<size_t>(n) * n;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    std::vector<double> u1(sz), u2(sz), g1(sz), g2(sz), out(sz);
    for (size_t i = 0; i < sz; ++i) {
        u1[i] = unit(rng);
        u2[i] = unit(rng);
        g1[i] = unit(rng);
        g2[i] = unit(rng);
    }
    std::vector<std::complex<double>> c(sz);
    std::vector<double> mult(sz);
    for (size_t i = 0; i < sz; ++i) {
        c[i] = {unit(rng), unit(rng)};
        mult[i] = unit(rng);
    }

    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        auto cs = c;
        auto cp = c;
        row("apply_multiplier",
            time_of([&] { sqg::kernels::apply_multiplier_serial(cs, mult); }, 5),
            time_of([&] { sqg::kernels::apply_multiplier(cp, mult); }, 5));
    }
    row("advection_product",
        time_of([&] { sqg::kernels::advection_product_serial(u1, u2, g1, g2, out); }, 5),
        time_of([&] { sqg::kernels::advection_product(u1, u2, g1, g2, out); }, 5));
    row("max_abs", time_of([&] { sqg::kernels::max_abs_serial(u1); }, 5),
        time_of([&] { sqg::kernels::max_abs(u1); }, 5));
    row("max_gradient_norm",
        time_of([&] { sqg::kernels::max_gradient_norm_serial(g1, g2); }, 5),
        time_of([&] { sqg::kernels::max_gradient_norm(g1, g2); }, 5));

    {
        std::vector<std::pair<int, int>> disp;
        for (int d1 = 0; d1 <= 24; ++d1)
            for (int d2 = -24; d2 <= 24; ++d2)
                if (d1 > 0 || d2 > 0) disp.emplace_back(d1, d2);
        row("displacement_scan",
            time_of([&] { sqg::kernels::displacement_scan_serial(u1, n, disp); }, 3),
            time_of([&] { sqg::kernels::displacement_scan(u1, n, disp); }, 3));
    }

    {
        const auto params = sqg::make_cs_params(2, 0.25);
        const int nf = 512;
        const double L = 2.0 * 3.14159265358979323846;
        row("sample_periodized_kernel",
            time_of([&] { sqg::sample_periodized_kernel_serial(nf, 0.4, L, params, 8); }, 3),
            time_of([&] { sqg::sample_periodized_kernel(nf, 0.4, L, params, 8); }, 3));
    }
    return 0;
}
