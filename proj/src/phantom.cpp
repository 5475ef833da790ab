#include "fbpl/phantom.hpp"

#include <cmath>
#include <numbers>

namespace fbpl {

Image make_disc(const GridSpec& grid, double radius, double value) {
    if (!(radius >= 0.0)) {
        throw ValidationError("disc radius must be non-negative");
    }
    if (radius > grid.half_extent()) {
        throw ValidationError("disc radius " + std::to_string(radius) + " exceeds grid half-extent " +
                              std::to_string(grid.half_extent()));
    }
    if (!std::isfinite(value)) {
        throw ValidationError("disc value must be finite");
    }
    Image img(grid);
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid.world_y(i);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid.world_x(j);
            if (x * x + y * y <= r2) {
                img(i, j) = value;
            }
        }
    }
    return img;
}

double training_radius(const GridSpec& grid, std::size_t i, std::size_t count) {
    return static_cast<double>(i) / static_cast<double>(count + 1) * grid.half_extent();
}

std::vector<Image> make_training_set(const GridSpec& grid, std::size_t count) {
    if (count < 1) {
        throw ValidationError("training set needs at least one disc");
    }
    std::vector<Image> discs;
    discs.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        discs.push_back(make_disc(grid, training_radius(grid, i, count)));
    }
    return discs;
}

const std::vector<Ellipse>& held_out_ellipses() {
    static const std::vector<Ellipse> table = {
        {0.00, 0.00, 0.80, 0.65, 0.0, 0.50},
        {-0.25, 0.15, 0.30, 0.18, 30.0, 0.90},
        {0.30, -0.20, 0.20, 0.12, -45.0, 0.20},
        {0.10, 0.40, 0.15, 0.08, 90.0, 1.00},
        {0.05, -0.45, 0.08, 0.05, 0.0, 0.70},
    };
    return table;
}

Image make_held_out(const GridSpec& grid) {
    Image img(grid);
    const double h = grid.half_extent();
    for (const Ellipse& e : held_out_ellipses()) {
        const double phi = e.angle_deg * std::numbers::pi / 180.0;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double a = e.semi_axis_a * h;
        const double b = e.semi_axis_b * h;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double dy = grid.world_y(i) - e.center_y * h;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double dx = grid.world_x(j) - e.center_x * h;
                const double u = (c * dx + s * dy) / a;
                const double v = (-s * dx + c * dy) / b;
                if (u * u + v * v <= 1.0) {
                    img(i, j) = e.value;
                }
            }
        }
    }
    return img;
}

}  // namespace fbpl
