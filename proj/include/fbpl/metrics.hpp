#pragma once

#include <vector>

#include "fbpl/core.hpp"
#include "fbpl/spectral.hpp"

namespace fbpl {

// Statistics of |a - b| over every pixel (no field-of-view mask).
// std_dev is the population standard deviation.
struct DiffStats {
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

DiffStats abs_diff_stats(const Image& a, const Image& b);

struct ProfilePoint {
    double x;  // world coordinate
    double value;
};

/// Pixel values of one image row with their world x-coordinates.
std::vector<ProfilePoint> line_profile(const Image& img, std::size_t row);
std::vector<ProfilePoint> line_profile(const Image& img);  // center row

/// 1 - mean(center disc of radius 0.2 r) / mean(annulus 0.7 r .. 0.9 r), with
/// both regions centered on the world origin. 0 for a flat disc, positive when
/// the center sags below the rim.
double cupping_index(const Image& img, double radius);

/// L2 norm of the coefficient difference over bins 0..k_max.
double spectrum_distance(const SpectralFilter& a, const SpectralFilter& b, std::size_t k_max);

}  // namespace fbpl
