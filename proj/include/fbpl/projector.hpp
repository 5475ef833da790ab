#pragma once

#include <vector>

#include "fbpl/core.hpp"

namespace fbpl {

/// Ray-driven discrete Radon transform.
///
/// Each ray x*cos(theta) + y*sin(theta) = s_m is sampled every spacing/2 along
/// its length across the bounding circle of the image's interpolation support.
/// Samples are bilinearly interpolated (zero outside the grid), summed and
/// multiplied by the step length.
Sinogram forward_project(const Image& img, const ScanGeometry& geom);

/// Pixel-driven back-projection with linear detector interpolation and the
/// pi/P angular quadrature weight. Not the transpose of forward_project.
Image back_project(const Sinogram& sino, const GridSpec& grid);

// Step length along each ray used by forward_project.
double ray_step(const GridSpec& grid);

/// Explicit system matrix of forward_project for tiny grids, (P*M) x size^2,
/// row-major. Column j is forward_project of the j-th unit-pixel image.
struct DenseSystem {
    GridSpec grid;
    ScanGeometry geom;
    std::vector<double> matrix;

    std::size_t rows() const { return geom.num_samples(); }
    std::size_t cols() const { return grid.num_pixels(); }
    double at(std::size_t r, std::size_t c) const { return matrix[r * cols() + c]; }
};

constexpr std::size_t kMaxDenseGridSize = 32;

DenseSystem build_dense_system(const GridSpec& grid, const ScanGeometry& geom);

// matrix * x
Sinogram dense_forward(const Image& img, const DenseSystem& sys);

// matrix^T * p: the exact adjoint of the ray-driven projector.
Image matched_back_project(const Sinogram& sino, const DenseSystem& sys);

}  // namespace fbpl
