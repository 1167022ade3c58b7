#include "invlab/core/fft2d.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace invlab {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft2D::Fft2D(int n1, int n2, double period) : n1_(n1), n2_(n2), P_(period) {
    real_.resize(std::size_t(n1) * n2);
    spec_.resize(std::size_t(nk1()) * n2);
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_2d(n2_, n1_, real_.data(),
                                     reinterpret_cast<fftw_complex*>(spec_.data()),
                                     FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_2d(n2_, n1_,
                                     reinterpret_cast<fftw_complex*>(spec_.data()),
                                     real_.data(), FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

double Fft2D::k1(int m1) const {
    if (2 * m1 == n1_) return 0.0;
    return 2.0 * M_PI / P_ * m1;
}

double Fft2D::k2(int m2) const {
    int m = m2 <= n2_ / 2 ? m2 : m2 - n2_;
    if (2 * m2 == n2_) return 0.0;
    return 2.0 * M_PI / P_ * m;
}

void Fft2D::forward(const double* slab) {
    std::memcpy(real_.data(), slab, real_.size() * sizeof(double));
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), real_.data(),
                         reinterpret_cast<fftw_complex*>(spec_.data()));
}

void Fft2D::inverse(double* slab) {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                         reinterpret_cast<fftw_complex*>(spec_.data()), real_.data());
    const double scale = 1.0 / (double(n1_) * n2_);
    for (std::size_t i = 0; i < real_.size(); ++i) slab[i] = real_[i] * scale;
}

void Fft2D::apply_ik(int direction) {
    const int K1 = nk1();
    for (int m2 = 0; m2 < n2_; ++m2) {
        for (int m1 = 0; m1 < K1; ++m1) {
            double k = direction == 1 ? k1(m1) : k2(m2);
            std::complex<double>& c = spec_[std::size_t(m2) * K1 + m1];
            c = std::complex<double>(-k * c.imag(), k * c.real());
        }
    }
}

} // namespace invlab
