#include "fbpl/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fbpl {

DiffStats abs_diff_stats(const Image& a, const Image& b) {
    if (!(a.grid() == b.grid())) {
        throw ValidationError("cannot compare images on different grids");
    }
    const auto va = a.values();
    const auto vb = b.values();
    const auto n = static_cast<double>(va.size());

    DiffStats st;
    st.min = std::abs(va[0] - vb[0]);
    st.max = st.min;
    double sum = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = std::abs(va[i] - vb[i]);
        sum += d;
        st.min = std::min(st.min, d);
        st.max = std::max(st.max, d);
    }
    st.mean = sum / n;
    double var = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = std::abs(va[i] - vb[i]) - st.mean;
        var += d * d;
    }
    st.std_dev = std::sqrt(var / n);
    return st;
}

std::vector<ProfilePoint> line_profile(const Image& img, std::size_t row) {
    const GridSpec& grid = img.grid();
    if (row >= grid.size()) {
        throw ValidationError("profile row " + std::to_string(row) + " out of range for grid size " +
                              std::to_string(grid.size()));
    }
    std::vector<ProfilePoint> profile;
    profile.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        profile.push_back({grid.world_x(j), img(row, j)});
    }
    return profile;
}

std::vector<ProfilePoint> line_profile(const Image& img) { return line_profile(img, img.grid().size() / 2); }

double cupping_index(const Image& img, double radius) {
    if (!(radius > 0.0)) {
        throw ValidationError("cupping index needs a positive radius");
    }
    const GridSpec& grid = img.grid();
    const double inner = 0.2 * radius;
    const double ring_lo = 0.7 * radius;
    const double ring_hi = 0.9 * radius;
    double center_sum = 0.0;
    double ring_sum = 0.0;
    std::size_t center_count = 0;
    std::size_t ring_count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double d = std::hypot(grid.world_x(j), grid.world_y(i));
            if (d <= inner) {
                center_sum += img(i, j);
                ++center_count;
            }
            if (d >= ring_lo && d <= ring_hi) {
                ring_sum += img(i, j);
                ++ring_count;
            }
        }
    }
    if (center_count == 0 || ring_count == 0) {
        throw ValidationError("cupping index regions are empty for radius " + std::to_string(radius));
    }
    const double ring_mean = ring_sum / static_cast<double>(ring_count);
    if (ring_mean == 0.0) {
        throw ValidationError("cupping index undefined: annulus mean is zero");
    }
    return 1.0 - (center_sum / static_cast<double>(center_count)) / ring_mean;
}

double spectrum_distance(const SpectralFilter& a, const SpectralFilter& b, std::size_t k_max) {
    if (a.pad_length() != b.pad_length() ||
        std::abs(a.bin_spacing() - b.bin_spacing()) > 1e-12 * std::max(a.bin_spacing(), b.bin_spacing())) {
        throw ValidationError("cannot compare filters with different pad length or spacing");
    }
    if (k_max == 0 || k_max > a.pad_length() / 2) {
        throw ValidationError("spectrum distance bin limit must lie in 1..N/2");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace fbpl
