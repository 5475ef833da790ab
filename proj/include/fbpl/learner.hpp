#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fbpl/core.hpp"
#include "fbpl/projector.hpp"
#include "fbpl/spectral.hpp"

namespace fbpl {

/// The forward operator used to back-propagate reconstruction errors and the
/// back-projector used in the reconstruction itself.
///
/// The unmatched pair is ray-driven forward / pixel-driven back. The matched
/// pair uses an explicit system matrix and its exact transpose, for which the
/// analytic filter gradient is the true gradient of the objective.
class ProjectorPair {
  public:
    static ProjectorPair unmatched(const GridSpec& grid, const ScanGeometry& geom);
    static ProjectorPair matched(std::shared_ptr<const DenseSystem> system);

    const GridSpec& grid() const { return grid_; }
    const ScanGeometry& geometry() const { return geom_; }
    bool is_matched() const { return system_ != nullptr; }

    Sinogram project(const Image& img) const;
    Image back_project(const Sinogram& sino) const;
    // Factor c with back_project^T ~= c * project: 1 for the matched pair,
    // (pi/P) * ds / spacing^2 for the pixel-driven back-projector.
    double adjoint_scale() const;

  private:
    ProjectorPair(GridSpec grid, ScanGeometry geom, std::shared_ptr<const DenseSystem> system);

    GridSpec grid_;
    ScanGeometry geom_;
    std::shared_ptr<const DenseSystem> system_;
};

struct TrainingSample {
    Image image;
    Sinogram sinogram;
};

// Pairs each image with its projection under `pair`.
std::vector<TrainingSample> make_samples(const std::vector<Image>& images, const ProjectorPair& pair);

Image reconstruct(const Sinogram& sino, const SpectralFilter& filt, const ProjectorPair& pair);

/// Mean over samples of 0.5 * ||reconstruct(p_i) - x_i||^2.
double objective(const SpectralFilter& filt, const std::vector<TrainingSample>& samples, const ProjectorPair& pair);
double objective(const SpectralFilter& filt, const std::vector<TrainingSample>& samples, const GridSpec& grid);

/// Gradient of one sample's objective with respect to the filter coefficients.
///
/// The residual r = reconstruct(p) - x is pushed through the forward operator,
/// g = A r, and correlated with the projections bin by bin:
///   raw[k] = c / N * sum_theta Re(conj(DFT(g_theta)[k]) * DFT(p_theta)[k])
/// with c = pair.adjoint_scale(). The result is symmetrized over k and N - k.
std::vector<double> gradient(const SpectralFilter& filt, const TrainingSample& sample, const ProjectorPair& pair);
std::vector<double> gradient(const SpectralFilter& filt, const TrainingSample& sample, const GridSpec& grid);

constexpr std::size_t kCurvatureIterations = 20;

/// Largest curvature of one sample's objective along the filter coefficients:
/// the dominant eigenvalue magnitude of the gradient's linear part, estimated
/// by power iteration.
double gradient_curvature(const SpectralFilter& filt, const TrainingSample& sample, const ProjectorPair& pair,
                          std::size_t iterations = kCurvatureIterations);

/// Step size 1 / max_i curvature_i over the samples, the largest step for which
/// a single-sample update cannot overshoot along its stiffest direction.
/// Returns 1 when every curvature is zero.
double auto_learning_rate(const SpectralFilter& initial, const std::vector<TrainingSample>& samples,
                          const ProjectorPair& pair);

struct TrainConfig {
    GridSpec grid;
    ScanGeometry geom;
    std::size_t epochs = 20;
    std::optional<double> learning_rate;  // nullopt selects auto_learning_rate
    std::uint64_t shuffle_seed = 0;
    FilterKind init = FilterKind::ModifiedRamp;
};

struct TrainHistory {
    double initial_objective = 0.0;
    double learning_rate = 0.0;
    std::vector<double> epoch_objective;  // mean objective after each epoch
    std::vector<SpectralFilter> snapshots;  // filter after each epoch
    SpectralFilter final_filter;
};

/// Per-sample stochastic gradient descent on the filter coefficients.
TrainHistory train(const TrainConfig& config, const std::vector<TrainingSample>& samples);
TrainHistory train(const TrainConfig& config, const std::vector<TrainingSample>& samples, const ProjectorPair& pair,
                   std::optional<SpectralFilter> initial = std::nullopt);

struct GradCheckReport {
    std::vector<std::size_t> bins;
    std::vector<double> analytic;
    std::vector<double> numeric;
    double max_relative_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

constexpr std::size_t kGradCheckBins = 20;

/// Compares the analytic gradient with central finite differences of the
/// objective, using the matched dense operator pair on a random image.
GradCheckReport grad_check(const GridSpec& grid, const ScanGeometry& geom, double tolerance, std::uint64_t seed = 0,
                           std::size_t num_bins = kGradCheckBins);

}  // namespace fbpl
