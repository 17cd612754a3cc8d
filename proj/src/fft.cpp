#include "sqg/fft.hpp"

#include "sqg/kernels.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace sqg {

namespace {

std::mutex plan_mutex;

fftw_plan get_c2c_plan(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<size_t>(n) * n);
    fftw_plan p = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(scratch.data()),
                                   reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(key, p);
    return p;
}

fftw_plan get_r2c_plan(int nf) {
    static std::map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(nf);
    if (it != cache.end()) return it->second;
    std::vector<double> in(static_cast<size_t>(nf) * nf);
    std::vector<std::complex<double>> out(static_cast<size_t>(nf) * (nf / 2 + 1));
    fftw_plan p = fftw_plan_dft_r2c_2d(nf, nf, in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(nf, p);
    return p;
}

} // namespace

SpectralField forward_transform(const RealField& f) {
    if (!kernels::all_finite(f.v))
        throw std::invalid_argument("forward_transform: non-finite input field");
    SpectralField out(f.grid);
    for (size_t i = 0; i < f.v.size(); ++i) out.c[i] = f.v[i];
    fftw_plan p = get_c2c_plan(f.grid.n, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.c.data()),
                     reinterpret_cast<fftw_complex*>(out.c.data()));
    const double scale = 1.0 / (static_cast<double>(f.grid.n) * f.grid.n);
    for (auto& z : out.c) z *= scale;
    return out;
}

RealField inverse_transform(const SpectralField& f) {
    std::vector<std::complex<double>> buf = f.c;
    fftw_plan p = get_c2c_plan(f.grid.n, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    RealField out(f.grid);
    for (size_t i = 0; i < buf.size(); ++i) out.v[i] = buf[i].real();
    return out;
}

std::vector<std::complex<double>> r2c_transform(const std::vector<double>& v, int nf) {
    if (v.size() != static_cast<size_t>(nf) * nf)
        throw std::invalid_argument("r2c_transform: size mismatch");
    std::vector<double> in = v; // r2c destroys its input
    std::vector<std::complex<double>> out(static_cast<size_t>(nf) * (nf / 2 + 1));
    fftw_plan p = get_r2c_plan(nf);
    fftw_execute_dft_r2c(p, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace sqg
