#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbpl {

// Precondition or invariant violated by caller-supplied data.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Training produced a non-finite objective.
class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Square pixel grid centered on the world origin.
///
/// Pixel (i, j) (row i, column j) sits at world coordinates
/// x = (j - (size-1)/2) * spacing, y = (i - (size-1)/2) * spacing.
class GridSpec {
  public:
    explicit GridSpec(std::size_t size, double spacing = 1.0);

    std::size_t size() const { return size_; }
    double spacing() const { return spacing_; }
    std::size_t num_pixels() const { return size_ * size_; }

    double center() const { return 0.5 * static_cast<double>(size_ - 1); }
    double world_x(std::size_t col) const { return (static_cast<double>(col) - center()) * spacing_; }
    double world_y(std::size_t row) const { return (static_cast<double>(row) - center()) * spacing_; }
    // Continuous (fractional) pixel coordinate of a world coordinate.
    double to_index(double world) const { return world / spacing_ + center(); }
    double half_extent() const { return 0.5 * static_cast<double>(size_) * spacing_; }

    bool operator==(const GridSpec&) const = default;

  private:
    std::size_t size_;
    double spacing_;
};

/// Row-major size x size real image.
class Image {
  public:
    explicit Image(GridSpec grid);
    Image(GridSpec grid, std::vector<double> values);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double operator()(std::size_t row, std::size_t col) const { return values_[row * grid_.size() + col]; }
    double& operator()(std::size_t row, std::size_t col) { return values_[row * grid_.size() + col]; }

  private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Parallel-beam acquisition: P angles theta_j = j*pi/P over [0, pi), M detector
/// bins centered on s = 0, and the FFT length used for filtering.
class ScanGeometry {
  public:
    ScanGeometry(std::size_t num_angles, std::size_t num_bins, double bin_spacing);

    std::size_t num_angles() const { return num_angles_; }
    std::size_t num_bins() const { return num_bins_; }
    double bin_spacing() const { return bin_spacing_; }
    // Smallest power of two >= 2M.
    std::size_t pad_length() const { return pad_length_; }

    double angle(std::size_t j) const;
    // Detector offset s_m of bin m.
    double bin_offset(std::size_t m) const;
    // Fractional bin index of detector offset s.
    double to_bin(double s) const { return s / bin_spacing_ + 0.5 * static_cast<double>(num_bins_ - 1); }
    std::size_t num_samples() const { return num_angles_ * num_bins_; }

    bool operator==(const ScanGeometry&) const = default;

  private:
    std::size_t num_angles_;
    std::size_t num_bins_;
    double bin_spacing_;
    std::size_t pad_length_;
};

/// P x M line integrals, angle-major.
class Sinogram {
  public:
    explicit Sinogram(ScanGeometry geom);
    Sinogram(ScanGeometry geom, std::vector<double> values);

    const ScanGeometry& geometry() const { return geom_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    std::span<const double> row(std::size_t angle) const {
        return std::span<const double>(values_).subspan(angle * geom_.num_bins(), geom_.num_bins());
    }
    std::span<double> row(std::size_t angle) {
        return std::span<double>(values_).subspan(angle * geom_.num_bins(), geom_.num_bins());
    }

  private:
    ScanGeometry geom_;
    std::vector<double> values_;
};

constexpr std::size_t kDefaultNumAngles = 360;

std::size_t next_power_of_two(std::size_t n);

/// Default acquisition for a grid: 360 angles, bin spacing equal to the pixel
/// spacing, and an odd detector wide enough to cover the grid diagonal.
ScanGeometry default_geometry(const GridSpec& grid, std::size_t num_angles = kDefaultNumAngles);

/// Physical frequency |f_k| (cycles per unit length) of DFT bin k.
double frequency_of_bin(std::size_t k, const ScanGeometry& geom);

// Throws ValidationError when any value is NaN or infinite.
void require_finite(std::span<const double> values, const std::string& what);

}  // namespace fbpl
