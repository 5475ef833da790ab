#pragma once

#include <vector>

#include "fbpl/core.hpp"

namespace fbpl {

/// Binary disc centered at the world origin: a pixel takes `value` when its
/// center lies within `radius`, 0 otherwise.
Image make_disc(const GridSpec& grid, double radius, double value = 1.0);

/// `count` unit discs with radii (i / (count + 1)) * half_extent, i = 1..count.
std::vector<Image> make_training_set(const GridSpec& grid, std::size_t count = 10);

// Radius of the i-th (1-based) disc of a training set of `count` discs.
double training_radius(const GridSpec& grid, std::size_t i, std::size_t count);

struct Ellipse {
    double center_x;  // fraction of the grid half-extent
    double center_y;
    double semi_axis_a;  // fraction of the grid half-extent
    double semi_axis_b;
    double angle_deg;  // rotation of the a-axis from +x
    double value;
};

/// Parameter table of the held-out phantom. Ellipses are painted in order;
/// a later ellipse overwrites earlier ones where it covers them.
const std::vector<Ellipse>& held_out_ellipses();

/// Deterministic multi-ellipse phantom with intensities in [0, 1].
Image make_held_out(const GridSpec& grid);

}  // namespace fbpl
