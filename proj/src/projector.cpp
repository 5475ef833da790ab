#include "fbpl/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fbpl {

namespace {

double bilinear(const Image& img, double fx, double fy) {
    const auto n = static_cast<double>(img.grid().size());
    if (fx <= -1.0 || fy <= -1.0 || fx >= n || fy >= n) {
        return 0.0;
    }
    const double jf = std::floor(fx);
    const double if_ = std::floor(fy);
    const double wx = fx - jf;
    const double wy = fy - if_;
    const auto j0 = static_cast<long>(jf);
    const auto i0 = static_cast<long>(if_);
    const auto size = static_cast<long>(img.grid().size());

    auto at = [&](long i, long j) -> double {
        if (i < 0 || j < 0 || i >= size || j >= size) {
            return 0.0;
        }
        return img(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    return (1.0 - wy) * ((1.0 - wx) * at(i0, j0) + wx * at(i0, j0 + 1)) +
           wy * ((1.0 - wx) * at(i0 + 1, j0) + wx * at(i0 + 1, j0 + 1));
}

}  // namespace

double ray_step(const GridSpec& grid) { return 0.5 * grid.spacing(); }

Sinogram forward_project(const Image& img, const ScanGeometry& geom) {
    const GridSpec& grid = img.grid();
    Sinogram sino(geom);

    const double dt = ray_step(grid);
    // The interpolation support extends one pixel beyond the outer pixel centers.
    const double support = (grid.center() + 1.0) * grid.spacing();
    const double radius = support * std::numbers::sqrt2;
    const auto half_count = static_cast<long>(std::ceil(radius / dt));

    const auto num_angles = static_cast<long>(geom.num_angles());
#pragma omp parallel for schedule(static)
    for (long a = 0; a < num_angles; ++a) {
        const double theta = geom.angle(static_cast<std::size_t>(a));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        auto row = sino.row(static_cast<std::size_t>(a));
        for (std::size_t m = 0; m < geom.num_bins(); ++m) {
            const double offset = geom.bin_offset(m);
            const double x0 = offset * c;
            const double y0 = offset * s;

            // Restrict the sample lattice to the square support; samples outside
            // it interpolate to zero.
            double t_lo = -radius;
            double t_hi = radius;
            const double dir[2] = {-s, c};
            const double origin[2] = {x0, y0};
            bool empty = false;
            for (int ax = 0; ax < 2; ++ax) {
                if (std::abs(dir[ax]) < 1e-12) {
                    if (std::abs(origin[ax]) >= support) {
                        empty = true;
                    }
                    continue;
                }
                double t1 = (-support - origin[ax]) / dir[ax];
                double t2 = (support - origin[ax]) / dir[ax];
                if (t1 > t2) {
                    std::swap(t1, t2);
                }
                t_lo = std::max(t_lo, t1);
                t_hi = std::min(t_hi, t2);
            }
            if (empty || t_lo > t_hi) {
                continue;
            }
            const long n_lo = std::max(-half_count, static_cast<long>(std::floor(t_lo / dt)) - 1);
            const long n_hi = std::min(half_count, static_cast<long>(std::ceil(t_hi / dt)) + 1);

            double sum = 0.0;
            for (long n = n_lo; n <= n_hi; ++n) {
                const double t = static_cast<double>(n) * dt;
                const double x = x0 - t * s;
                const double y = y0 + t * c;
                sum += bilinear(img, grid.to_index(x), grid.to_index(y));
            }
            row[m] = sum * dt;
        }
    }
    return sino;
}

Image back_project(const Sinogram& sino, const GridSpec& grid) {
    const ScanGeometry& geom = sino.geometry();
    Image img(grid);

    const std::size_t num_angles = geom.num_angles();
    std::vector<double> cosines(num_angles);
    std::vector<double> sines(num_angles);
    for (std::size_t a = 0; a < num_angles; ++a) {
        cosines[a] = std::cos(geom.angle(a));
        sines[a] = std::sin(geom.angle(a));
    }
    const double weight = std::numbers::pi / static_cast<double>(num_angles);
    const auto last_bin = static_cast<long>(geom.num_bins()) - 1;

    const auto size = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < size; ++i) {
        const double y = grid.world_y(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid.world_x(j);
            double sum = 0.0;
            for (std::size_t a = 0; a < num_angles; ++a) {
                const double u = geom.to_bin(x * cosines[a] + y * sines[a]);
                const double uf = std::floor(u);
                const auto m0 = static_cast<long>(uf);
                if (m0 < -1 || m0 > last_bin) {
                    continue;
                }
                const double w = u - uf;
                const auto row = sino.row(a);
                const double lo = m0 >= 0 ? row[static_cast<std::size_t>(m0)] : 0.0;
                const double hi = m0 + 1 <= last_bin ? row[static_cast<std::size_t>(m0 + 1)] : 0.0;
                sum += (1.0 - w) * lo + w * hi;
            }
            img(static_cast<std::size_t>(i), j) = sum * weight;
        }
    }
    return img;
}

DenseSystem build_dense_system(const GridSpec& grid, const ScanGeometry& geom) {
    if (grid.size() > kMaxDenseGridSize) {
        throw ValidationError("dense system matrix limited to grids of at most " + std::to_string(kMaxDenseGridSize) +
                              " pixels per side, got " + std::to_string(grid.size()));
    }
    DenseSystem sys{grid, geom, std::vector<double>(geom.num_samples() * grid.num_pixels(), 0.0)};
    const std::size_t cols = grid.num_pixels();
    Image unit(grid);
    for (std::size_t j = 0; j < cols; ++j) {
        unit.values()[j] = 1.0;
        const Sinogram column = forward_project(unit, geom);
        unit.values()[j] = 0.0;
        const auto v = column.values();
        for (std::size_t r = 0; r < v.size(); ++r) {
            sys.matrix[r * cols + j] = v[r];
        }
    }
    return sys;
}

Sinogram dense_forward(const Image& img, const DenseSystem& sys) {
    if (!(img.grid() == sys.grid)) {
        throw ValidationError("image grid does not match dense system");
    }
    Sinogram sino(sys.geom);
    const auto x = img.values();
    auto out = sino.values();
    for (std::size_t r = 0; r < sys.rows(); ++r) {
        double sum = 0.0;
        const double* row = &sys.matrix[r * sys.cols()];
        for (std::size_t c = 0; c < sys.cols(); ++c) {
            sum += row[c] * x[c];
        }
        out[r] = sum;
    }
    return sino;
}

Image matched_back_project(const Sinogram& sino, const DenseSystem& sys) {
    if (!(sino.geometry() == sys.geom)) {
        throw ValidationError("sinogram geometry does not match dense system");
    }
    Image img(sys.grid);
    const auto p = sino.values();
    auto out = img.values();
    for (std::size_t r = 0; r < sys.rows(); ++r) {
        const double pr = p[r];
        if (pr == 0.0) {
            continue;
        }
        const double* row = &sys.matrix[r * sys.cols()];
        for (std::size_t c = 0; c < sys.cols(); ++c) {
            out[c] += row[c] * pr;
        }
    }
    return img;
}

}  // namespace fbpl
