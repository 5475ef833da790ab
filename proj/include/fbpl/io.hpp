#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fbpl/core.hpp"
#include "fbpl/learner.hpp"
#include "fbpl/metrics.hpp"
#include "fbpl/spectral.hpp"

namespace fbpl::io {

namespace fs = std::filesystem;

/// Raw arrays are little-endian float32, row-major, with a JSON sidecar next to
/// them: "<dir>/<stem>.meta.json".
///
///   image:    {"kind": "image", "size": N, "spacing": h}
///   sinogram: {"kind": "sinogram", "num_angles": P, "num_bins": M,
///              "bin_spacing": ds, "pad_length": N_pad,
///              "grid_size": n, "grid_spacing": h}   (grid keys optional)
fs::path sidecar_path(const fs::path& data_path);

void save_image(const fs::path& path, const Image& img);
Image load_image(const fs::path& path);

void save_sinogram(const fs::path& path, const Sinogram& sino, std::optional<GridSpec> grid = std::nullopt);
Sinogram load_sinogram(const fs::path& path);
// Reconstruction grid recorded alongside a sinogram, if any.
std::optional<GridSpec> load_sinogram_grid(const fs::path& path);

/// CSV "k,frequency,coefficient", one row per DFT bin. Loading re-checks
/// conjugate symmetry and recovers the bin spacing from the frequency column.
void save_filter(const fs::path& path, const SpectralFilter& filt);
SpectralFilter load_filter(const fs::path& path);

/// Plain-text 8-bit graymap (P2). Values map linearly from [lo, hi] to
/// [0, 255] with floor and clamping.
void export_viewable(const fs::path& path, const Image& img, double lo, double hi);
int window_level(double value, double lo, double hi);

struct NamedStats {
    std::string name;
    DiffStats stats;
};

// "name,mean,std. dev.,min,max"
void save_diff_stats(const fs::path& path, const std::vector<NamedStats>& rows);
// "x,value"
void save_profile(const fs::path& path, const std::vector<ProfilePoint>& profile);
// "k,frequency,coefficient[,compare]"
void save_spectrum(const fs::path& path, const SpectralFilter& filt, const SpectralFilter* compare = nullptr);
// "epoch,objective" with epoch 0 holding the initial objective, plus one filter
// CSV per epoch named "<stem>_epoch_<NN>.csv" next to it.
void save_history(const fs::path& path, const TrainHistory& history);

}  // namespace fbpl::io
