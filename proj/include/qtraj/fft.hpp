#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "qtraj/grid.hpp"

namespace qtraj {

/// Thin RAII wrapper over FFTW complex transforms of one fixed size.
/// Data is copied through internal aligned buffers, so callers may pass any
/// std::vector. Plans use FFTW_ESTIMATE only: plan creation must not depend
/// on runtime timing, or outputs would not be reproducible bit-for-bit.
class Fft {
  public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    /// In-place forward transform (no normalization).
    void forward(std::vector<std::complex<double>>& data) const;
    /// In-place inverse transform, normalized by 1/n.
    void inverse(std::vector<std::complex<double>>& data) const;

  private:
    struct Impl;
    int n_;
    std::unique_ptr<Impl> impl_;
};

/// Spectral derivative of a periodic complex field sampled on the grid.
std::vector<std::complex<double>> spectral_derivative(
    const SpatialGrid& grid, const std::vector<std::complex<double>>& f);

/// Spectral derivative of a periodic real field.
std::vector<double> spectral_derivative(const SpatialGrid& grid,
                                        const std::vector<double>& f);

}  // namespace qtraj
