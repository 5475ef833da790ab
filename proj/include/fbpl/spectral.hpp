#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fbpl/core.hpp"

namespace fbpl {

/// Real per-bin multipliers of the padded detector DFT, shared by every
/// projection angle. Conjugate symmetric: coeffs[k] == coeffs[N - k], so the
/// spatial kernel is real and even.
///
/// The constructor accepts coefficients that are symmetric to within
/// kSymmetryTolerance (relative to max(1, max|c|)) and stores the exactly
/// symmetrized average.
class SpectralFilter {
  public:
    static constexpr double kSymmetryTolerance = 1e-9;

    SpectralFilter(std::size_t pad_length, double bin_spacing, std::vector<double> coeffs);

    std::size_t pad_length() const { return coeffs_.size(); }
    double bin_spacing() const { return bin_spacing_; }
    std::span<const double> coeffs() const { return coeffs_; }
    double operator[](std::size_t k) const { return coeffs_[k]; }

    bool compatible_with(const ScanGeometry& geom) const;

  private:
    double bin_spacing_;
    std::vector<double> coeffs_;
};

enum class FilterKind { Ramp, ModifiedRamp, RamLak, SheppLogan };

FilterKind parse_filter_kind(std::string_view name);
std::string to_string(FilterKind kind);

/// |f_k| sampled at every DFT bin; zero at DC.
SpectralFilter ramp_filter(const ScanGeometry& geom);

/// Ramp with its zero-valued band doubled in width.
///
/// On the unpadded detector frequency grid (spacing 1/(M ds)) the ramp is zero
/// only on the DC cell |f| < 1/(2 M ds). The modified ramp is zero on
/// |f| < 1/(M ds), which on the padded grid clears bins k < N/M and their
/// mirrors. Used as the training initialization; it produces pronounced
/// cupping on homogeneous objects.
SpectralFilter modified_ramp_filter(const ScanGeometry& geom);

// Number of leading bins (k = 0 .. count-1, plus mirrors) the modified ramp zeroes.
std::size_t modified_ramp_zero_bins(const ScanGeometry& geom);

/// Spectrum of the band-limited ramp kernel sampled on the detector:
/// h[0] = 1/(4 ds^2), h[n] = -1/(pi^2 n^2 ds^2) for odd n, 0 for even n != 0,
/// wrapped onto the padded length; coeffs = ds * Re(DFT(h)). Nonzero at DC.
SpectralFilter ramlak_filter(const ScanGeometry& geom);

// Spatial kernel h[n], n = 0..N-1, used by ramlak_filter.
std::vector<double> ramlak_kernel(const ScanGeometry& geom);

/// Ramp apodized by sinc(f / (2 f_nyquist)).
SpectralFilter shepp_logan_filter(const ScanGeometry& geom);

SpectralFilter make_filter(FilterKind kind, const ScanGeometry& geom);

/// Filters every projection row: zero-pad to N (data first), forward DFT,
/// multiply by the coefficients, inverse DFT scaled by 1/N, keep the real part
/// of the first M samples.
Sinogram apply_filter(const Sinogram& sino, const SpectralFilter& filt);

/// Filtered back-projection: back_project(apply_filter(sino, filt), grid).
Image reconstruct(const Sinogram& sino, const SpectralFilter& filt, const GridSpec& grid);

}  // namespace fbpl
