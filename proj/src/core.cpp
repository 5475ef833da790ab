#include "fbpl/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace fbpl {

GridSpec::GridSpec(std::size_t size, double spacing) : size_(size), spacing_(spacing) {
    if (size < 2) {
        throw ValidationError("grid size must be at least 2, got " + std::to_string(size));
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw ValidationError("grid spacing must be positive and finite");
    }
}

Image::Image(GridSpec grid) : grid_(grid), values_(grid.num_pixels(), 0.0) {}

Image::Image(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.num_pixels()) {
        throw ValidationError("image has " + std::to_string(values_.size()) + " values, grid needs " +
                              std::to_string(grid_.num_pixels()));
    }
    require_finite(values_, "image");
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

ScanGeometry::ScanGeometry(std::size_t num_angles, std::size_t num_bins, double bin_spacing)
    : num_angles_(num_angles), num_bins_(num_bins), bin_spacing_(bin_spacing), pad_length_(next_power_of_two(2 * num_bins)) {
    if (num_angles < 1) {
        throw ValidationError("scan geometry needs at least one angle");
    }
    if (num_bins < 2) {
        throw ValidationError("scan geometry needs at least two detector bins");
    }
    if (!(bin_spacing > 0.0) || !std::isfinite(bin_spacing)) {
        throw ValidationError("detector bin spacing must be positive and finite");
    }
}

double ScanGeometry::angle(std::size_t j) const {
    return static_cast<double>(j) * std::numbers::pi / static_cast<double>(num_angles_);
}

double ScanGeometry::bin_offset(std::size_t m) const {
    return (static_cast<double>(m) - 0.5 * static_cast<double>(num_bins_ - 1)) * bin_spacing_;
}

Sinogram::Sinogram(ScanGeometry geom) : geom_(geom), values_(geom.num_samples(), 0.0) {}

Sinogram::Sinogram(ScanGeometry geom, std::vector<double> values) : geom_(geom), values_(std::move(values)) {
    if (values_.size() != geom_.num_samples()) {
        throw ValidationError("sinogram has " + std::to_string(values_.size()) + " values, geometry needs " +
                              std::to_string(geom_.num_samples()));
    }
    require_finite(values_, "sinogram");
}

ScanGeometry default_geometry(const GridSpec& grid, std::size_t num_angles) {
    // Odd so that a bin sits at s = 0; never fewer than 5 so the bilinear
    // footprint of tiny grids still lands on the detector.
    auto bins = static_cast<std::size_t>(std::ceil(static_cast<double>(grid.size()) * std::numbers::sqrt2));
    bins = std::max<std::size_t>(bins, 5);
    if (bins % 2 == 0) {
        ++bins;
    }
    return ScanGeometry(num_angles, bins, grid.spacing());
}

double frequency_of_bin(std::size_t k, const ScanGeometry& geom) {
    const std::size_t n = geom.pad_length();
    if (k >= n) {
        throw ValidationError("DFT bin " + std::to_string(k) + " out of range for pad length " + std::to_string(n));
    }
    const std::size_t folded = std::min(k, n - k);
    return static_cast<double>(folded) / (static_cast<double>(n) * geom.bin_spacing());
}

void require_finite(std::span<const double> values, const std::string& what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ValidationError(what + " contains a non-finite value at index " + std::to_string(i));
        }
    }
}

}  // namespace fbpl
