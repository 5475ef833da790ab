#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "fbpl/core.hpp"
#include "fbpl/io.hpp"
#include "fbpl/learner.hpp"
#include "fbpl/metrics.hpp"
#include "fbpl/phantom.hpp"
#include "fbpl/projector.hpp"
#include "fbpl/spectral.hpp"

namespace fs = std::filesystem;
using namespace fbpl;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kDivergence = 3 };

// Geometry overrides shared by project, make-filter and train.
struct GeometryFlags {
    std::size_t angles = kDefaultNumAngles;
    std::optional<std::size_t> bins;
    std::optional<double> spacing;

    ScanGeometry resolve(const GridSpec& grid) const {
        const ScanGeometry def = default_geometry(grid, angles);
        return ScanGeometry(angles, bins.value_or(def.num_bins()), spacing.value_or(def.bin_spacing()));
    }
};

void add_geometry_flags(CLI::App* cmd, GeometryFlags& g, bool with_angles) {
    if (with_angles) {
        cmd->add_option("--angles", g.angles, "Number of projection angles over [0, pi)")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--bins", g.bins, "Detector bins (default: ceil(size*sqrt(2)), odd)")->check(CLI::PositiveNumber);
    cmd->add_option("--spacing", g.spacing, "Detector bin spacing (default: pixel spacing)")
        ->check(CLI::PositiveNumber);
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw ValidationError("dataset directory '" + dir.string() + "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".raw") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw ValidationError("no .raw images found in '" + dir.string() + "'");
    }
    return files;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filtered back-projection with a learnable reconstruction filter"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);

    // phantom
    auto* phantom = app.add_subcommand("phantom", "Write disc phantoms");
    std::size_t ph_size = 0;
    double ph_pixel = 1.0;
    std::optional<double> ph_radius;
    std::string ph_out;
    std::optional<std::size_t> ph_dataset;
    std::string ph_out_dir;
    bool ph_ellipses = false;
    phantom->add_option("--size", ph_size, "Grid size N")->required()->check(CLI::Range(2, 1 << 14));
    phantom->add_option("--pixel-spacing", ph_pixel, "Pixel spacing")->capture_default_str()->check(
        CLI::PositiveNumber);
    auto* ph_radius_opt = phantom->add_option("--radius", ph_radius, "Disc radius in world units");
    auto* ph_ellipses_opt = phantom->add_flag("--ellipses", ph_ellipses, "Write the multi-ellipse test phantom");
    auto* ph_out_opt = phantom->add_option("--out", ph_out, "Output image path");
    auto* ph_dataset_opt =
        phantom->add_option("--dataset", ph_dataset, "Number of training discs")->check(CLI::PositiveNumber);
    auto* ph_out_dir_opt = phantom->add_option("--out-dir", ph_out_dir, "Output directory for --dataset");
    ph_radius_opt->excludes(ph_ellipses_opt)->excludes(ph_dataset_opt)->needs(ph_out_opt);
    ph_ellipses_opt->excludes(ph_dataset_opt)->needs(ph_out_opt);
    ph_dataset_opt->needs(ph_out_dir_opt)->excludes(ph_out_opt);
    ph_out_dir_opt->needs(ph_dataset_opt);

    // project
    auto* project = app.add_subcommand("project", "Ray-driven forward projection");
    std::string pr_image;
    std::string pr_out;
    GeometryFlags pr_geom;
    project->add_option("--image", pr_image, "Input image")->required();
    project->add_option("--out", pr_out, "Output sinogram")->required();
    add_geometry_flags(project, pr_geom, true);

    // make-filter
    auto* make = app.add_subcommand("make-filter", "Write an analytic reconstruction filter");
    std::string mf_kind;
    std::size_t mf_size = 0;
    double mf_pixel = 1.0;
    std::string mf_out;
    GeometryFlags mf_geom;
    make->add_option("--kind", mf_kind, "ramp | modified-ramp | ramlak | shepp-logan")
        ->required()
        ->check(CLI::IsMember({"ramp", "modified-ramp", "ramlak", "shepp-logan"}));
    make->add_option("--size", mf_size, "Image grid size the filter is meant for")
        ->required()
        ->check(CLI::Range(2, 1 << 14));
    make->add_option("--pixel-spacing", mf_pixel, "Pixel spacing")->capture_default_str()->check(CLI::PositiveNumber);
    make->add_option("--out", mf_out, "Output filter CSV")->required();
    add_geometry_flags(make, mf_geom, false);

    // reconstruct
    auto* recon = app.add_subcommand("reconstruct", "Filtered back-projection");
    std::string rc_sino;
    std::string rc_filter;
    std::string rc_out;
    std::string rc_viewable;
    std::vector<double> rc_window{0.0, 1.0};
    std::optional<std::size_t> rc_size;
    recon->add_option("--sinogram", rc_sino, "Input sinogram")->required();
    recon->add_option("--filter", rc_filter, "Filter CSV")->required();
    recon->add_option("--out", rc_out, "Output image")->required();
    recon->add_option("--size", rc_size, "Output grid size (default: recorded with the sinogram)")
        ->check(CLI::Range(2, 1 << 14));
    auto* rc_view_opt = recon->add_option("--viewable", rc_viewable, "Also write a P2 graymap");
    recon->add_option("--window", rc_window, "Display window lo,hi")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str()
        ->needs(rc_view_opt);

    // train
    auto* trainc = app.add_subcommand("train", "Learn the filter by stochastic gradient descent");
    std::string tr_dir;
    std::size_t tr_epochs = 20;
    std::string tr_lr = "auto";
    std::string tr_init = "modified-ramp";
    std::string tr_out;
    std::string tr_history;
    std::uint64_t tr_seed = 0;
    GeometryFlags tr_geom;
    trainc->add_option("--dataset-dir", tr_dir, "Directory of training images (*.raw)")->required();
    trainc->add_option("--epochs", tr_epochs, "Passes over the dataset")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    trainc->add_option("--lr", tr_lr, "Learning rate or 'auto'")->capture_default_str();
    trainc->add_option("--init", tr_init, "Initial filter kind")
        ->capture_default_str()
        ->check(CLI::IsMember({"ramp", "modified-ramp", "ramlak", "shepp-logan"}));
    trainc->add_option("--out-filter", tr_out, "Learned filter CSV")->required();
    trainc->add_option("--history", tr_history, "Objective history CSV (plus per-epoch filters)");
    trainc->add_option("--seed", tr_seed, "Shuffle seed")->capture_default_str();
    add_geometry_flags(trainc, tr_geom, true);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Absolute difference statistics against ground truth");
    std::vector<std::string> ev_recon;
    std::string ev_gt;
    std::string ev_out;
    evaluate->add_option("--recon", ev_recon, "Reconstruction(s); rows are named by file stem")->required();
    evaluate->add_option("--gt", ev_gt, "Ground truth image")->required();
    evaluate->add_option("--out-csv", ev_out, "Output CSV")->required();

    // profile
    auto* profile = app.add_subcommand("profile", "Export one image row");
    std::string pf_image;
    std::string pf_row = "center";
    std::string pf_out;
    profile->add_option("--image", pf_image, "Input image")->required();
    profile->add_option("--row", pf_row, "Row index or 'center'")->capture_default_str();
    profile->add_option("--out-csv", pf_out, "Output CSV")->required();

    // filter-spectrum
    auto* spectrum = app.add_subcommand("filter-spectrum", "Export filter coefficients per bin");
    std::string fs_filter;
    std::string fs_compare;
    std::string fs_out;
    spectrum->add_option("--filter", fs_filter, "Filter CSV")->required();
    spectrum->add_option("--compare", fs_compare, "Second filter written alongside");
    spectrum->add_option("--out-csv", fs_out, "Output CSV")->required();

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the filter gradient");
    std::size_t gc_size = 16;
    std::size_t gc_angles = 12;
    double gc_tol = 1e-5;
    std::uint64_t gc_seed = 0;
    std::size_t gc_bins = kGradCheckBins;
    gradcheck->add_option("--size", gc_size, "Grid size")->capture_default_str()->check(CLI::Range(2, 1 << 14));
    gradcheck->add_option("--angles", gc_angles, "Projection angles")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    gradcheck->add_option("--tol", gc_tol, "Relative error tolerance")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    gradcheck->add_option("--seed", gc_seed, "Seed for the image and bin choice")->capture_default_str();
    gradcheck->add_option("--bins", gc_bins, "Number of bins checked")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

#ifdef _OPENMP
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
#endif

    try {
        if (*phantom) {
            const GridSpec grid(ph_size, ph_pixel);
            if (ph_dataset) {
                const auto images = make_training_set(grid, *ph_dataset);
                fs::create_directories(ph_out_dir);
                for (std::size_t i = 0; i < images.size(); ++i) {
                    char name[32];
                    std::snprintf(name, sizeof name, "disc_%02zu.raw", i + 1);
                    io::save_image(fs::path(ph_out_dir) / name, images[i]);
                }
                std::cout << "wrote " << images.size() << " discs to " << ph_out_dir << '\n';
            } else if (ph_ellipses) {
                const Image img = make_held_out(grid);
                ensure_parent(ph_out);
                io::save_image(ph_out, img);
            } else if (ph_radius) {
                const Image img = make_disc(grid, *ph_radius);
                ensure_parent(ph_out);
                io::save_image(ph_out, img);
            } else {
                std::cerr << "phantom: give --radius, --ellipses or --dataset\n";
                return kUsage;
            }
        } else if (*project) {
            const Image img = io::load_image(pr_image);
            const ScanGeometry geom = pr_geom.resolve(img.grid());
            const Sinogram sino = forward_project(img, geom);
            ensure_parent(pr_out);
            io::save_sinogram(pr_out, sino, img.grid());
        } else if (*make) {
            const ScanGeometry geom = mf_geom.resolve(GridSpec(mf_size, mf_pixel));
            const SpectralFilter filt = make_filter(parse_filter_kind(mf_kind), geom);
            ensure_parent(mf_out);
            io::save_filter(mf_out, filt);
        } else if (*recon) {
            if (!rc_viewable.empty() && !(rc_window[0] < rc_window[1])) {
                throw ValidationError("--window needs lo < hi");
            }
            const Sinogram sino = io::load_sinogram(rc_sino);
            const SpectralFilter filt = io::load_filter(rc_filter);
            std::optional<GridSpec> grid = io::load_sinogram_grid(rc_sino);
            if (rc_size) {
                grid = GridSpec(*rc_size, grid ? grid->spacing() : 1.0);
            }
            if (!grid) {
                throw ValidationError("sinogram has no recorded grid; pass --size");
            }
            const Image img = reconstruct(sino, filt, *grid);
            ensure_parent(rc_out);
            io::save_image(rc_out, img);
            if (!rc_viewable.empty()) {
                ensure_parent(rc_viewable);
                io::export_viewable(rc_viewable, img, rc_window[0], rc_window[1]);
            }
        } else if (*trainc) {
            std::optional<double> lr;
            if (tr_lr != "auto") {
                try {
                    std::size_t used = 0;
                    lr = std::stod(tr_lr, &used);
                    if (used != tr_lr.size()) {
                        throw std::invalid_argument("trailing characters");
                    }
                } catch (const std::exception&) {
                    std::cerr << "train: --lr must be a number or 'auto'\n";
                    return kUsage;
                }
                if (!(*lr > 0.0) || !std::isfinite(*lr)) {
                    throw ValidationError("--lr must be positive and finite");
                }
            }
            std::vector<Image> images;
            for (const auto& path : list_images(tr_dir)) {
                images.push_back(io::load_image(path));
                if (!(images.back().grid() == images.front().grid())) {
                    throw ValidationError("training images use different grids: " + path.string());
                }
            }
            const GridSpec grid = images.front().grid();
            const ScanGeometry geom = tr_geom.resolve(grid);
            const ProjectorPair pair = ProjectorPair::unmatched(grid, geom);
            const auto samples = make_samples(images, pair);

            const TrainConfig config{grid, geom, tr_epochs, lr, tr_seed, parse_filter_kind(tr_init)};
            const TrainHistory history = train(config, samples);

            std::cout << "learning rate " << history.learning_rate << '\n';
            std::cout << "epoch 0 objective " << history.initial_objective << '\n';
            for (std::size_t e = 0; e < history.epoch_objective.size(); ++e) {
                std::cout << "epoch " << e + 1 << " objective " << history.epoch_objective[e] << '\n';
            }
            ensure_parent(tr_out);
            io::save_filter(tr_out, history.final_filter);
            if (!tr_history.empty()) {
                ensure_parent(tr_history);
                io::save_history(tr_history, history);
            }
        } else if (*evaluate) {
            const Image gt = io::load_image(ev_gt);
            std::vector<io::NamedStats> rows;
            for (const auto& path : ev_recon) {
                const Image img = io::load_image(path);
                rows.push_back({fs::path(path).stem().string(), abs_diff_stats(img, gt)});
            }
            ensure_parent(ev_out);
            io::save_diff_stats(ev_out, rows);
            for (const auto& r : rows) {
                std::cout << r.name << ": mean " << r.stats.mean << ", std. dev. " << r.stats.std_dev << ", min "
                          << r.stats.min << ", max " << r.stats.max << '\n';
            }
        } else if (*profile) {
            const Image img = io::load_image(pf_image);
            std::size_t row = img.grid().size() / 2;
            if (pf_row != "center") {
                std::size_t used = 0;
                unsigned long parsed = 0;
                try {
                    parsed = std::stoul(pf_row, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != pf_row.size()) {
                    std::cerr << "profile: --row must be an index or 'center'\n";
                    return kUsage;
                }
                row = parsed;
            }
            const auto points = line_profile(img, row);
            ensure_parent(pf_out);
            io::save_profile(pf_out, points);
        } else if (*spectrum) {
            const SpectralFilter filt = io::load_filter(fs_filter);
            std::optional<SpectralFilter> other;
            if (!fs_compare.empty()) {
                other = io::load_filter(fs_compare);
                if (other->pad_length() != filt.pad_length()) {
                    throw ValidationError("--compare filter has a different pad length");
                }
            }
            ensure_parent(fs_out);
            io::save_spectrum(fs_out, filt, other ? &*other : nullptr);
        } else if (*gradcheck) {
            const GridSpec grid(gc_size);
            if (gc_size > kMaxDenseGridSize) {
                throw ValidationError("gradcheck builds a dense system matrix and is limited to --size <= " +
                                      std::to_string(kMaxDenseGridSize));
            }
            const ScanGeometry geom = default_geometry(grid, gc_angles);
            const GradCheckReport report = grad_check(grid, geom, gc_tol, gc_seed, gc_bins);
            std::cout << "bins checked: " << report.bins.size() << '\n';
            std::cout << "max relative error: " << report.max_relative_error << " (tol " << report.tolerance
                      << ")\n";
            std::cout << (report.passed ? "PASS" : "FAIL") << '\n';
            return report.passed ? kOk : kValidation;
        }
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kOk;
}
