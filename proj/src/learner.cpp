#include "fbpl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "fft.hpp"

namespace fbpl {

ProjectorPair::ProjectorPair(GridSpec grid, ScanGeometry geom, std::shared_ptr<const DenseSystem> system)
    : grid_(grid), geom_(geom), system_(std::move(system)) {}

ProjectorPair ProjectorPair::unmatched(const GridSpec& grid, const ScanGeometry& geom) {
    return ProjectorPair(grid, geom, nullptr);
}

ProjectorPair ProjectorPair::matched(std::shared_ptr<const DenseSystem> system) {
    if (!system) {
        throw ValidationError("matched projector pair needs a dense system");
    }
    return ProjectorPair(system->grid, system->geom, system);
}

Sinogram ProjectorPair::project(const Image& img) const {
    if (!(img.grid() == grid_)) {
        throw ValidationError("image grid does not match projector pair");
    }
    return system_ ? dense_forward(img, *system_) : forward_project(img, geom_);
}

Image ProjectorPair::back_project(const Sinogram& sino) const {
    if (!(sino.geometry() == geom_)) {
        throw ValidationError("sinogram geometry does not match projector pair");
    }
    return system_ ? matched_back_project(sino, *system_) : fbpl::back_project(sino, grid_);
}

double ProjectorPair::adjoint_scale() const {
    if (system_) {
        return 1.0;
    }
    return std::numbers::pi / static_cast<double>(geom_.num_angles()) * geom_.bin_spacing() /
           (grid_.spacing() * grid_.spacing());
}

std::vector<TrainingSample> make_samples(const std::vector<Image>& images, const ProjectorPair& pair) {
    std::vector<TrainingSample> samples;
    samples.reserve(images.size());
    for (const Image& img : images) {
        samples.push_back({img, pair.project(img)});
    }
    return samples;
}

Image reconstruct(const Sinogram& sino, const SpectralFilter& filt, const ProjectorPair& pair) {
    return pair.back_project(apply_filter(sino, filt));
}

namespace {

double half_squared_residual(const Image& recon, const Image& truth) {
    const auto a = recon.values();
    const auto b = truth.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return 0.5 * sum;
}

void require_samples(const std::vector<TrainingSample>& samples) {
    if (samples.empty()) {
        throw ValidationError("at least one training sample is required");
    }
}

std::vector<double> subtract_scaled(std::span<const double> c, std::span<const double> g, double step) {
    std::vector<double> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        out[k] = c[k] - step * g[k];
    }
    return out;
}

}  // namespace

double objective(const SpectralFilter& filt, const std::vector<TrainingSample>& samples, const ProjectorPair& pair) {
    require_samples(samples);
    double total = 0.0;
    for (const TrainingSample& s : samples) {
        total += half_squared_residual(reconstruct(s.sinogram, filt, pair), s.image);
    }
    return total / static_cast<double>(samples.size());
}

double objective(const SpectralFilter& filt, const std::vector<TrainingSample>& samples, const GridSpec& grid) {
    require_samples(samples);
    return objective(filt, samples, ProjectorPair::unmatched(grid, samples.front().sinogram.geometry()));
}

std::vector<double> gradient(const SpectralFilter& filt, const TrainingSample& sample, const ProjectorPair& pair) {
    const ScanGeometry& geom = sample.sinogram.geometry();
    if (!(geom == pair.geometry()) || !(sample.image.grid() == pair.grid())) {
        throw ValidationError("training sample does not match projector pair geometry");
    }

    Image residual = reconstruct(sample.sinogram, filt, pair);
    {
        auto r = residual.values();
        const auto x = sample.image.values();
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] -= x[i];
        }
    }
    const Sinogram propagated = pair.project(residual);

    const std::size_t n = geom.pad_length();
    std::vector<double> raw(n, 0.0);
    detail::Fft fft_err(n);
    detail::Fft fft_in(n);
    const auto u = fft_err.buffer();
    const auto v = fft_in.buffer();
    for (std::size_t a = 0; a < geom.num_angles(); ++a) {
        fft_err.forward_padded(propagated.row(a));
        fft_in.forward_padded(sample.sinogram.row(a));
        for (std::size_t k = 0; k < n; ++k) {
            raw[k] += u[k].real() * v[k].real() + u[k].imag() * v[k].imag();
        }
    }

    const double scale = pair.adjoint_scale() / static_cast<double>(n);
    std::vector<double> grad(n);
    for (std::size_t k = 0; k < n; ++k) {
        grad[k] = 0.5 * (raw[k] + raw[(n - k) % n]) * scale;
    }
    return grad;
}

std::vector<double> gradient(const SpectralFilter& filt, const TrainingSample& sample, const GridSpec& grid) {
    return gradient(filt, sample, ProjectorPair::unmatched(grid, sample.sinogram.geometry()));
}

double gradient_curvature(const SpectralFilter& filt, const TrainingSample& sample, const ProjectorPair& pair,
                          std::size_t iterations) {
    // The gradient is affine in the coefficients, so grad(c + v) - grad(c)
    // applies its linear part to v exactly.
    const std::size_t n = filt.pad_length();
    const auto base = gradient(filt, sample, pair);
    double probe_scale = 1.0;
    for (double c : filt.coeffs()) {
        probe_scale = std::max(probe_scale, std::abs(c));
    }

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<double> c(filt.coeffs().begin(), filt.coeffs().end());
        for (std::size_t k = 0; k < n; ++k) {
            c[k] += probe_scale * v[k];
        }
        const auto moved = gradient(SpectralFilter(n, filt.bin_spacing(), std::move(c)), sample, pair);
        double norm2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = (moved[k] - base[k]) / probe_scale;
            norm2 += v[k] * v[k];
        }
        lambda = std::sqrt(norm2);
        if (lambda == 0.0) {
            return 0.0;
        }
        for (double& x : v) {
            x /= lambda;
        }
    }
    return lambda;
}

double auto_learning_rate(const SpectralFilter& initial, const std::vector<TrainingSample>& samples,
                          const ProjectorPair& pair) {
    require_samples(samples);
    double lambda_max = 0.0;
    for (const TrainingSample& s : samples) {
        lambda_max = std::max(lambda_max, gradient_curvature(initial, s, pair, kCurvatureIterations));
    }
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        return 1.0;
    }
    return 1.0 / lambda_max;
}

TrainHistory train(const TrainConfig& config, const std::vector<TrainingSample>& samples) {
    return train(config, samples, ProjectorPair::unmatched(config.grid, config.geom));
}

TrainHistory train(const TrainConfig& config, const std::vector<TrainingSample>& samples, const ProjectorPair& pair,
                   std::optional<SpectralFilter> initial) {
    require_samples(samples);
    if (config.epochs < 1) {
        throw ValidationError("training needs at least one epoch");
    }
    if (config.learning_rate && !(*config.learning_rate > 0.0 && std::isfinite(*config.learning_rate))) {
        throw ValidationError("learning rate must be positive and finite");
    }

    SpectralFilter filter = initial ? *initial : make_filter(config.init, config.geom);
    const double eta = config.learning_rate ? *config.learning_rate : auto_learning_rate(filter, samples, pair);

    auto diverged = [&](std::size_t epoch, const std::string& what) {
        std::ostringstream msg;
        msg << "training diverged in epoch " << epoch << " (learning rate " << eta << "): " << what;
        return DivergenceError(msg.str());
    };

    const double initial_objective = objective(filter, samples, pair);
    if (!std::isfinite(initial_objective)) {
        throw diverged(0, "initial objective is not finite");
    }

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.shuffle_seed);

    std::vector<double> epoch_objective;
    std::vector<SpectralFilter> snapshots;
    epoch_objective.reserve(config.epochs);
    snapshots.reserve(config.epochs);

    const std::size_t n = filter.pad_length();
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            const auto g = gradient(filter, samples[idx], pair);
            auto next = subtract_scaled(filter.coeffs(), g, eta);
            for (std::size_t k = 0; k < n; ++k) {
                if (!std::isfinite(next[k])) {
                    throw diverged(epoch, "non-finite filter coefficient");
                }
                if (next[k] != next[(n - k) % n]) {
                    throw std::logic_error("filter update broke conjugate symmetry");
                }
            }
            filter = SpectralFilter(n, filter.bin_spacing(), std::move(next));
        }
        const double obj = objective(filter, samples, pair);
        if (!std::isfinite(obj)) {
            throw diverged(epoch, "objective is not finite");
        }
        epoch_objective.push_back(obj);
        snapshots.push_back(filter);
    }

    return TrainHistory{initial_objective, eta, std::move(epoch_objective), std::move(snapshots), filter};
}

GradCheckReport grad_check(const GridSpec& grid, const ScanGeometry& geom, double tolerance, std::uint64_t seed,
                           std::size_t num_bins) {
    auto system = std::make_shared<const DenseSystem>(build_dense_system(grid, geom));
    const ProjectorPair pair = ProjectorPair::matched(system);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Image truth(grid);
    for (double& v : truth.values()) {
        v = unit(rng);
    }
    const std::vector<TrainingSample> samples = make_samples({truth}, pair);

    // A filter away from the optimum so the residual is not small.
    const SpectralFilter filt = modified_ramp_filter(geom);
    const auto analytic = gradient(filt, samples.front(), pair);

    const std::size_t n = filt.pad_length();
    std::vector<std::size_t> candidates(n / 2 + 1);
    std::iota(candidates.begin(), candidates.end(), 0);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(std::min(num_bins, candidates.size()));
    std::sort(candidates.begin(), candidates.end());

    const auto coeffs = filt.coeffs();
    double typical = 0.0;
    for (double c : coeffs) {
        typical += std::abs(c);
    }
    typical /= static_cast<double>(n);
    double grad_scale = 0.0;
    for (double g : analytic) {
        grad_scale = std::max(grad_scale, std::abs(g));
    }

    GradCheckReport report;
    report.tolerance = tolerance;
    const double eps_cbrt = std::cbrt(std::numeric_limits<double>::epsilon());
    for (std::size_t k : candidates) {
        const double h = eps_cbrt * std::max(std::abs(coeffs[k]), typical);
        const bool paired = k != 0 && k != n / 2;
        auto perturbed = [&](double delta) {
            std::vector<double> c(coeffs.begin(), coeffs.end());
            c[k] += delta;
            if (paired) {
                c[n - k] += delta;
            }
            return objective(SpectralFilter(n, filt.bin_spacing(), std::move(c)), samples, pair);
        };
        double numeric = (perturbed(h) - perturbed(-h)) / (2.0 * h);
        if (paired) {
            // The symmetric perturbation moves two coefficients.
            numeric *= 0.5;
        }
        const double a = analytic[k];
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6 * grad_scale});
        const double rel = denom > 0.0 ? std::abs(a - numeric) / denom : 0.0;

        report.bins.push_back(k);
        report.analytic.push_back(a);
        report.numeric.push_back(numeric);
        report.max_relative_error = std::max(report.max_relative_error, rel);
    }
    report.passed = report.max_relative_error < tolerance;
    return report;
}

}  // namespace fbpl
