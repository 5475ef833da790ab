#pragma once

// Small hand-rolled generators for property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fbpl/core.hpp"
#include "fbpl/spectral.hpp"

namespace gen {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
        return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
    }
    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

inline fbpl::Image image(const fbpl::GridSpec& grid, Rng& rng, double lo = -1.0, double hi = 1.0) {
    fbpl::Image img(grid);
    for (double& v : img.values()) {
        v = rng.uniform(lo, hi);
    }
    return img;
}

inline fbpl::Sinogram sinogram(const fbpl::ScanGeometry& geom, Rng& rng) {
    fbpl::Sinogram s(geom);
    for (double& v : s.values()) {
        v = rng.uniform(-1.0, 1.0);
    }
    return s;
}

inline fbpl::SpectralFilter symmetric_filter(const fbpl::ScanGeometry& geom, Rng& rng) {
    const std::size_t n = geom.pad_length();
    std::vector<double> c(n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        c[k] = rng.uniform(-1.0, 1.0);
        c[(n - k) % n] = c[k];
    }
    return fbpl::SpectralFilter(n, geom.bin_spacing(), std::move(c));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline double correlation(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace gen
