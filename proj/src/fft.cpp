#include "fft.hpp"

#include <algorithm>
#include <mutex>
#include <new>

namespace fbpl::detail {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (buf_ == nullptr) {
        throw std::bad_alloc();
    }
    const int len = static_cast<int>(n);
    fwd_ = fftw_plan_dft_1d(len, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(len, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
}

void Fft::forward() { fftw_execute(fwd_); }

void Fft::inverse() { fftw_execute(inv_); }

void Fft::forward_padded(std::span<const double> row) {
    auto b = buffer();
    std::fill(b.begin(), b.end(), std::complex<double>(0.0, 0.0));
    std::copy(row.begin(), row.end(), b.begin());
    forward();
}

}  // namespace fbpl::detail
