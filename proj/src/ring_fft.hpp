#pragma once

#include <complex>
#include <span>
#include <vector>

#include <fftw3.h>

namespace wente::detail {

/// Real-to-complex transforms of one ring of n samples. Plans are made once
/// (FFTW_ESTIMATE | FFTW_UNALIGNED) and executed through the new-array
/// interface, which is safe from concurrent callers.
class RingFft {
public:
    explicit RingFft(int n);
    ~RingFft();
    RingFft(const RingFft&) = delete;
    RingFft& operator=(const RingFft&) = delete;

    int size() const { return n_; }
    int modes() const { return n_ / 2 + 1; }

    /// Unnormalized forward transform: out[m] = sum_k in[k] exp(-i m theta_k).
    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
    /// Inverse of forward including the 1/n factor.
    void backward(std::span<const std::complex<double>> in, std::span<double> out) const;

private:
    int n_;
    fftw_plan r2c_ = nullptr;
    fftw_plan c2r_ = nullptr;
};

}  // namespace wente::detail
