#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace fbpl::detail {

// Complex 1D DFT of a fixed length backed by FFTW. Forward is unnormalized;
// inverse is unnormalized as well (callers apply 1/N).
class Fft {
  public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }
    std::span<std::complex<double>> buffer() { return {reinterpret_cast<std::complex<double>*>(buf_), n_}; }

    void forward();
    void inverse();

    // Zero-pads `row` (data first) into the buffer and runs the forward transform.
    void forward_padded(std::span<const double> row);

  private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

}  // namespace fbpl::detail
