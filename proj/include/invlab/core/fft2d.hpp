#pragma once
#include <complex>
#include <vector>

namespace invlab {

/// 2-D real<->complex FFT on an n2 x n1 periodic slab (FFTW backend).
/// Plans use FFTW_ESTIMATE so runs are reproducible. One instance owns its
/// workspace; instances are not shared across threads.
class Fft2D {
  public:
    Fft2D(int n1, int n2, double period);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int nk1() const { return n1_ / 2 + 1; }

    // wavenumber of mode index (zero at Nyquist so derivatives stay real-symmetric)
    double k1(int m1) const;
    double k2(int m2) const;

    /// forward transform of a real slab (row-major [i2][i1]) into spec()
    void forward(const double* slab);
    /// inverse transform of spec() into a real slab (normalized)
    void inverse(double* slab);

    std::complex<double>* spec() { return spec_.data(); }
    const std::complex<double>* spec() const { return spec_.data(); }
    std::size_t nspec() const { return spec_.size(); }

    /// multiply spectrum by i*k along direction 1 or 2
    void apply_ik(int direction);

  private:
    int n1_, n2_;
    double P_;
    std::vector<double> real_;
    std::vector<std::complex<double>> spec_;
    void* plan_fwd_;
    void* plan_inv_;
};

} // namespace invlab
