#include "ring_fft.hpp"

#include <mutex>

namespace wente::detail {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RingFft::RingFft(int n) : n_(n) {
    std::vector<double> re(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> co(static_cast<std::size_t>(modes()));
    auto* c = reinterpret_cast<fftw_complex*>(co.data());
    std::lock_guard lock(planner_mutex());
    r2c_ = fftw_plan_dft_r2c_1d(n, re.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r_ = fftw_plan_dft_c2r_1d(n, c, re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

RingFft::~RingFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
}

void RingFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    // r2c leaves its input untouched; the const_cast only satisfies the C API.
    fftw_execute_dft_r2c(r2c_, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RingFft::backward(std::span<const std::complex<double>> in, std::span<double> out) const {
    // c2r overwrites its input.
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double scale = 1.0 / n_;
    for (auto& v : out) v *= scale;
}

}  // namespace wente::detail
