#include "fbpl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbpl/projector.hpp"
#include "fft.hpp"

namespace fbpl {

SpectralFilter::SpectralFilter(std::size_t pad_length, double bin_spacing, std::vector<double> coeffs)
    : bin_spacing_(bin_spacing), coeffs_(std::move(coeffs)) {
    if (pad_length < 2 || (pad_length & (pad_length - 1)) != 0) {
        throw ValidationError("filter pad length must be a power of two >= 2, got " + std::to_string(pad_length));
    }
    if (coeffs_.size() != pad_length) {
        throw ValidationError("filter has " + std::to_string(coeffs_.size()) + " coefficients, pad length is " +
                              std::to_string(pad_length));
    }
    if (!(bin_spacing > 0.0) || !std::isfinite(bin_spacing)) {
        throw ValidationError("filter bin spacing must be positive and finite");
    }
    require_finite(coeffs_, "filter");

    double scale = 1.0;
    for (double c : coeffs_) {
        scale = std::max(scale, std::abs(c));
    }
    const std::size_t n = pad_length;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double a = coeffs_[k];
        const double b = coeffs_[n - k];
        if (std::abs(a - b) > kSymmetryTolerance * scale) {
            throw ValidationError("filter is not conjugate symmetric at bin " + std::to_string(k));
        }
        const double mean = 0.5 * (a + b);
        coeffs_[k] = mean;
        coeffs_[n - k] = mean;
    }
}

bool SpectralFilter::compatible_with(const ScanGeometry& geom) const {
    return pad_length() == geom.pad_length() &&
           std::abs(bin_spacing_ - geom.bin_spacing()) <= 1e-12 * std::max(bin_spacing_, geom.bin_spacing());
}

FilterKind parse_filter_kind(std::string_view name) {
    if (name == "ramp") return FilterKind::Ramp;
    if (name == "modified-ramp") return FilterKind::ModifiedRamp;
    if (name == "ramlak") return FilterKind::RamLak;
    if (name == "shepp-logan") return FilterKind::SheppLogan;
    throw ValidationError("unknown filter kind '" + std::string(name) + "'");
}

std::string to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::Ramp: return "ramp";
        case FilterKind::ModifiedRamp: return "modified-ramp";
        case FilterKind::RamLak: return "ramlak";
        case FilterKind::SheppLogan: return "shepp-logan";
    }
    return "unknown";
}

namespace {
std::vector<double> ramp_coeffs(const ScanGeometry& geom) {
    std::vector<double> c(geom.pad_length());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = frequency_of_bin(k, geom);
    }
    return c;
}
}  // namespace

SpectralFilter ramp_filter(const ScanGeometry& geom) {
    return SpectralFilter(geom.pad_length(), geom.bin_spacing(), ramp_coeffs(geom));
}

std::size_t modified_ramp_zero_bins(const ScanGeometry& geom) {
    // Bins with |f_k| < 1 / (M ds): k * M < N.
    const std::size_t n = geom.pad_length();
    const std::size_t m = geom.num_bins();
    return (n + m - 1) / m;
}

SpectralFilter modified_ramp_filter(const ScanGeometry& geom) {
    auto c = ramp_coeffs(geom);
    const std::size_t n = c.size();
    for (std::size_t k = 0; k < modified_ramp_zero_bins(geom); ++k) {
        c[k] = 0.0;
        c[(n - k) % n] = 0.0;
    }
    return SpectralFilter(n, geom.bin_spacing(), std::move(c));
}

std::vector<double> ramlak_kernel(const ScanGeometry& geom) {
    const std::size_t n = geom.pad_length();
    const double ds2 = geom.bin_spacing() * geom.bin_spacing();
    std::vector<double> h(n, 0.0);
    h[0] = 1.0 / (4.0 * ds2);
    for (std::size_t i = 1; i <= n / 2; i += 2) {
        const auto fi = static_cast<double>(i);
        const double v = -1.0 / (std::numbers::pi * std::numbers::pi * fi * fi * ds2);
        h[i] = v;
        h[n - i] = v;
    }
    return h;
}

SpectralFilter ramlak_filter(const ScanGeometry& geom) {
    const std::size_t n = geom.pad_length();
    const auto h = ramlak_kernel(geom);
    detail::Fft fft(n);
    auto buf = fft.buffer();
    std::copy(h.begin(), h.end(), buf.begin());
    fft.forward();

    std::vector<double> c(n);
    double max_re = 0.0;
    double max_im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = geom.bin_spacing() * buf[k].real();
        max_re = std::max(max_re, std::abs(buf[k].real()));
        max_im = std::max(max_im, std::abs(buf[k].imag()));
    }
    if (max_im >= 1e-12 * std::max(1.0, max_re)) {
        throw std::logic_error("Ram-Lak kernel spectrum is not real");
    }
    return SpectralFilter(n, geom.bin_spacing(), std::move(c));
}

SpectralFilter shepp_logan_filter(const ScanGeometry& geom) {
    auto c = ramp_coeffs(geom);
    const double nyquist = 0.5 / geom.bin_spacing();
    for (double& v : c) {
        const double u = v / (2.0 * nyquist);
        if (u != 0.0) {
            v *= std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
        }
    }
    return SpectralFilter(geom.pad_length(), geom.bin_spacing(), std::move(c));
}

SpectralFilter make_filter(FilterKind kind, const ScanGeometry& geom) {
    switch (kind) {
        case FilterKind::Ramp: return ramp_filter(geom);
        case FilterKind::ModifiedRamp: return modified_ramp_filter(geom);
        case FilterKind::RamLak: return ramlak_filter(geom);
        case FilterKind::SheppLogan: return shepp_logan_filter(geom);
    }
    throw ValidationError("unknown filter kind");
}

Sinogram apply_filter(const Sinogram& sino, const SpectralFilter& filt) {
    const ScanGeometry& geom = sino.geometry();
    if (!filt.compatible_with(geom)) {
        throw ValidationError("filter (pad length " + std::to_string(filt.pad_length()) + ", spacing " +
                              std::to_string(filt.bin_spacing()) + ") does not match sinogram geometry (pad length " +
                              std::to_string(geom.pad_length()) + ", spacing " + std::to_string(geom.bin_spacing()) +
                              ")");
    }
    const std::size_t n = geom.pad_length();
    const double inv_n = 1.0 / static_cast<double>(n);
    const auto coeffs = filt.coeffs();

    Sinogram out(geom);
    detail::Fft fft(n);
    auto buf = fft.buffer();
    for (std::size_t a = 0; a < geom.num_angles(); ++a) {
        fft.forward_padded(sino.row(a));
        for (std::size_t k = 0; k < n; ++k) {
            buf[k] *= coeffs[k];
        }
        fft.inverse();

        double re2 = 0.0;
        double im2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            re2 += buf[k].real() * buf[k].real();
            im2 += buf[k].imag() * buf[k].imag();
        }
        if (std::sqrt(im2) > 1e-9 * std::sqrt(re2 + im2)) {
            throw std::logic_error("filtered projection has a non-negligible imaginary part");
        }

        auto row = out.row(a);
        for (std::size_t m = 0; m < row.size(); ++m) {
            row[m] = buf[m].real() * inv_n;
        }
    }
    return out;
}

Image reconstruct(const Sinogram& sino, const SpectralFilter& filt, const GridSpec& grid) {
    return back_project(apply_filter(sino, filt), grid);
}

}  // namespace fbpl
