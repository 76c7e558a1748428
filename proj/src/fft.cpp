#include "qtraj/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace qtraj {

struct Fft::Impl {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Fft::Fft(int n) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n <= 0) throw std::invalid_argument("Fft size must be positive");
    impl_->buf = fftw_alloc_complex(static_cast<size_t>(n));
    impl_->fwd = fftw_plan_dft_1d(n, impl_->buf, impl_->buf, FFTW_FORWARD,
                                  FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_1d(n, impl_->buf, impl_->buf, FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("fftw planning failed");
}

Fft::~Fft() {
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->buf) fftw_free(impl_->buf);
}

void Fft::forward(std::vector<std::complex<double>>& data) const {
    if (static_cast<int>(data.size()) != n_)
        throw std::invalid_argument("Fft::forward size mismatch");
    std::memcpy(impl_->buf, data.data(), sizeof(fftw_complex) * n_);
    fftw_execute(impl_->fwd);
    std::memcpy(data.data(), impl_->buf, sizeof(fftw_complex) * n_);
}

void Fft::inverse(std::vector<std::complex<double>>& data) const {
    if (static_cast<int>(data.size()) != n_)
        throw std::invalid_argument("Fft::inverse size mismatch");
    std::memcpy(impl_->buf, data.data(), sizeof(fftw_complex) * n_);
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / n_;
    auto* out = reinterpret_cast<std::complex<double>*>(impl_->buf);
    for (int j = 0; j < n_; ++j) data[j] = out[j] * scale;
}

std::vector<std::complex<double>> spectral_derivative(
    const SpatialGrid& grid, const std::vector<std::complex<double>>& f) {
    Fft fft(grid.n_points);
    auto work = f;
    fft.forward(work);
    const auto k = grid.wavenumbers();
    for (int j = 0; j < grid.n_points; ++j)
        work[j] *= std::complex<double>(0.0, k[j]);
    fft.inverse(work);
    return work;
}

std::vector<double> spectral_derivative(const SpatialGrid& grid,
                                        const std::vector<double>& f) {
    std::vector<std::complex<double>> c(f.begin(), f.end());
    auto d = spectral_derivative(grid, c);
    std::vector<double> out(f.size());
    for (size_t j = 0; j < f.size(); ++j) out[j] = d[j].real();
    return out;
}

}  // namespace qtraj
