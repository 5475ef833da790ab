#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fbpl/core.hpp"
#include "fbpl/io.hpp"
#include "fbpl/learner.hpp"
#include "fbpl/metrics.hpp"
#include "fbpl/phantom.hpp"
#include "fbpl/projector.hpp"
#include "fbpl/spectral.hpp"

namespace py = pybind11;
using namespace fbpl;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> values, std::size_t rows, std::size_t cols) {
    Array out({rows, cols});
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

Array to_array(const Image& img) { return to_array(img.values(), img.grid().size(), img.grid().size()); }

Array to_array(const Sinogram& s) {
    return to_array(s.values(), s.geometry().num_angles(), s.geometry().num_bins());
}

Array to_vector(std::span<const double> values) {
    Array out(values.size());
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

Image to_image(const Array& a, double spacing) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
        throw ValidationError("image must be a square 2-D array");
    }
    const auto n = static_cast<std::size_t>(a.shape(0));
    return Image(GridSpec(n, spacing), std::vector<double>(a.data(), a.data() + n * n));
}

Sinogram to_sinogram(const Array& a, const ScanGeometry& geom) {
    if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != geom.num_angles() ||
        static_cast<std::size_t>(a.shape(1)) != geom.num_bins()) {
        throw ValidationError("sinogram array must have shape (num_angles, num_bins)");
    }
    return Sinogram(geom, std::vector<double>(a.data(), a.data() + geom.num_samples()));
}

std::vector<Array> to_arrays(const std::vector<Image>& images) {
    std::vector<Array> out;
    for (const auto& img : images) {
        out.push_back(to_array(img));
    }
    return out;
}

std::vector<Image> to_images(const std::vector<Array>& arrays, double spacing) {
    std::vector<Image> out;
    for (const auto& a : arrays) {
        out.push_back(to_image(a, spacing));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Filtered back-projection with a learnable frequency-domain filter.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<std::size_t, double>(), py::arg("size"), py::arg("spacing") = 1.0)
        .def_property_readonly("size", &GridSpec::size)
        .def_property_readonly("spacing", &GridSpec::spacing)
        .def_property_readonly("half_extent", &GridSpec::half_extent)
        .def("world_x", &GridSpec::world_x)
        .def("world_y", &GridSpec::world_y)
        .def(py::self == py::self)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(size=" + std::to_string(g.size()) + ", spacing=" + std::to_string(g.spacing()) + ")";
        });

    py::class_<ScanGeometry>(m, "ScanGeometry")
        .def(py::init<std::size_t, std::size_t, double>(), py::arg("num_angles"), py::arg("num_bins"),
             py::arg("bin_spacing") = 1.0)
        .def_property_readonly("num_angles", &ScanGeometry::num_angles)
        .def_property_readonly("num_bins", &ScanGeometry::num_bins)
        .def_property_readonly("bin_spacing", &ScanGeometry::bin_spacing)
        .def_property_readonly("pad_length", &ScanGeometry::pad_length)
        .def("angle", &ScanGeometry::angle)
        .def("bin_offset", &ScanGeometry::bin_offset)
        .def(py::self == py::self)
        .def("__repr__", [](const ScanGeometry& g) {
            return "ScanGeometry(num_angles=" + std::to_string(g.num_angles()) +
                   ", num_bins=" + std::to_string(g.num_bins()) + ", bin_spacing=" + std::to_string(g.bin_spacing()) +
                   ")";
        });

    m.def("default_geometry", &default_geometry, py::arg("grid"), py::arg("num_angles") = kDefaultNumAngles);
    m.def("frequency_of_bin", &frequency_of_bin, py::arg("k"), py::arg("geom"));

    py::class_<SpectralFilter>(m, "SpectralFilter")
        .def(py::init([](std::size_t pad_length, double bin_spacing, const Array& coeffs) {
                 return SpectralFilter(pad_length, bin_spacing,
                                       std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size()));
             }),
             py::arg("pad_length"), py::arg("bin_spacing"), py::arg("coeffs"))
        .def_property_readonly("pad_length", &SpectralFilter::pad_length)
        .def_property_readonly("bin_spacing", &SpectralFilter::bin_spacing)
        .def_property_readonly("coeffs", [](const SpectralFilter& f) { return to_vector(f.coeffs()); })
        .def("__len__", &SpectralFilter::pad_length)
        .def("__getitem__", [](const SpectralFilter& f, std::size_t k) {
            if (k >= f.pad_length()) {
                throw py::index_error();
            }
            return f[k];
        });

    m.def(
        "make_filter", [](const std::string& kind, const ScanGeometry& geom) {
            return make_filter(parse_filter_kind(kind), geom);
        },
        py::arg("kind"), py::arg("geom"), "kind: ramp, modified-ramp, ramlak or shepp-logan");
    m.def("ramlak_kernel", [](const ScanGeometry& geom) { return to_vector(ramlak_kernel(geom)); }, py::arg("geom"));

    m.def(
        "make_disc",
        [](std::size_t size, double radius, double value, double spacing) {
            return to_array(make_disc(GridSpec(size, spacing), radius, value));
        },
        py::arg("size"), py::arg("radius"), py::arg("value") = 1.0, py::arg("spacing") = 1.0);
    m.def(
        "make_training_set",
        [](std::size_t size, std::size_t count, double spacing) {
            return to_arrays(make_training_set(GridSpec(size, spacing), count));
        },
        py::arg("size"), py::arg("count") = 10, py::arg("spacing") = 1.0);
    m.def(
        "training_radius",
        [](std::size_t size, std::size_t i, std::size_t count, double spacing) {
            return training_radius(GridSpec(size, spacing), i, count);
        },
        py::arg("size"), py::arg("i"), py::arg("count"), py::arg("spacing") = 1.0);
    m.def(
        "make_held_out", [](std::size_t size, double spacing) { return to_array(make_held_out(GridSpec(size, spacing))); },
        py::arg("size"), py::arg("spacing") = 1.0);

    m.def(
        "forward_project",
        [](const Array& image, const ScanGeometry& geom, double spacing) {
            const Image img = to_image(image, spacing);
            const Sinogram s = [&] {
                py::gil_scoped_release release;
                return forward_project(img, geom);
            }();
            return to_array(s);
        },
        py::arg("image"), py::arg("geom"), py::arg("spacing") = 1.0);
    m.def(
        "back_project",
        [](const Array& sino, const ScanGeometry& geom, std::size_t size, double spacing) {
            const Sinogram s = to_sinogram(sino, geom);
            const Image img = [&] {
                py::gil_scoped_release release;
                return back_project(s, GridSpec(size, spacing));
            }();
            return to_array(img);
        },
        py::arg("sinogram"), py::arg("geom"), py::arg("size"), py::arg("spacing") = 1.0);
    m.def(
        "apply_filter",
        [](const Array& sino, const ScanGeometry& geom, const SpectralFilter& filt) {
            return to_array(apply_filter(to_sinogram(sino, geom), filt));
        },
        py::arg("sinogram"), py::arg("geom"), py::arg("filter"));
    m.def(
        "reconstruct",
        [](const Array& sino, const ScanGeometry& geom, const SpectralFilter& filt, std::size_t size, double spacing) {
            const Sinogram s = to_sinogram(sino, geom);
            const Image img = [&] {
                py::gil_scoped_release release;
                return reconstruct(s, filt, GridSpec(size, spacing));
            }();
            return to_array(img);
        },
        py::arg("sinogram"), py::arg("geom"), py::arg("filter"), py::arg("size"), py::arg("spacing") = 1.0);

    m.def(
        "objective",
        [](const SpectralFilter& filt, const std::vector<Array>& images, const ScanGeometry& geom, double spacing) {
            const auto imgs = to_images(images, spacing);
            if (imgs.empty()) {
                throw ValidationError("at least one image is required");
            }
            const ProjectorPair pair = ProjectorPair::unmatched(imgs.front().grid(), geom);
            py::gil_scoped_release release;
            return objective(filt, make_samples(imgs, pair), pair);
        },
        py::arg("filter"), py::arg("images"), py::arg("geom"), py::arg("spacing") = 1.0);
    m.def(
        "gradient",
        [](const SpectralFilter& filt, const Array& image, const ScanGeometry& geom, double spacing) {
            const Image img = to_image(image, spacing);
            const ProjectorPair pair = ProjectorPair::unmatched(img.grid(), geom);
            const auto samples = make_samples({img}, pair);
            return to_vector(gradient(filt, samples.front(), pair));
        },
        py::arg("filter"), py::arg("image"), py::arg("geom"), py::arg("spacing") = 1.0);
    m.def(
        "train",
        [](const std::vector<Array>& images, const ScanGeometry& geom, std::size_t epochs,
           std::optional<double> learning_rate, std::uint64_t seed, const std::string& init, double spacing) {
            const auto imgs = to_images(images, spacing);
            if (imgs.empty()) {
                throw ValidationError("at least one image is required");
            }
            const TrainConfig config{imgs.front().grid(), geom, epochs, learning_rate, seed, parse_filter_kind(init)};
            const ProjectorPair pair = ProjectorPair::unmatched(config.grid, geom);
            TrainHistory h = [&] {
                py::gil_scoped_release release;
                return train(config, make_samples(imgs, pair));
            }();
            py::dict out;
            out["initial_objective"] = h.initial_objective;
            out["learning_rate"] = h.learning_rate;
            out["epoch_objective"] = h.epoch_objective;
            out["snapshots"] = h.snapshots;
            out["final_filter"] = h.final_filter;
            return out;
        },
        py::arg("images"), py::arg("geom"), py::arg("epochs") = 20, py::arg("learning_rate") = py::none(),
        py::arg("seed") = 0, py::arg("init") = "modified-ramp", py::arg("spacing") = 1.0,
        "Per-sample SGD on the filter. learning_rate=None selects the automatic step.");
    m.def(
        "grad_check",
        [](std::size_t size, std::size_t angles, double tol, std::uint64_t seed) {
            const GridSpec grid(size);
            const GradCheckReport r = grad_check(grid, default_geometry(grid, angles), tol, seed);
            py::dict out;
            out["bins"] = r.bins;
            out["analytic"] = r.analytic;
            out["numeric"] = r.numeric;
            out["max_relative_error"] = r.max_relative_error;
            out["tolerance"] = r.tolerance;
            out["passed"] = r.passed;
            return out;
        },
        py::arg("size") = 16, py::arg("angles") = 12, py::arg("tol") = 1e-5, py::arg("seed") = 0);

    m.def(
        "abs_diff_stats",
        [](const Array& a, const Array& b) {
            const DiffStats s = abs_diff_stats(to_image(a, 1.0), to_image(b, 1.0));
            py::dict out;
            out["mean"] = s.mean;
            out["std_dev"] = s.std_dev;
            out["min"] = s.min;
            out["max"] = s.max;
            return out;
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "line_profile",
        [](const Array& image, std::optional<std::size_t> row, double spacing) {
            const Image img = to_image(image, spacing);
            const auto p = row ? line_profile(img, *row) : line_profile(img);
            Array out({p.size(), std::size_t{2}});
            auto r = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < p.size(); ++i) {
                r(i, 0) = p[i].x;
                r(i, 1) = p[i].value;
            }
            return out;
        },
        py::arg("image"), py::arg("row") = py::none(), py::arg("spacing") = 1.0,
        "Rows of (world x, value); the center row by default.");
    m.def(
        "cupping_index",
        [](const Array& image, double radius, double spacing) { return cupping_index(to_image(image, spacing), radius); },
        py::arg("image"), py::arg("radius"), py::arg("spacing") = 1.0);
    m.def("spectrum_distance", &spectrum_distance, py::arg("a"), py::arg("b"), py::arg("k_max"));

    m.def(
        "save_image", [](const std::filesystem::path& p, const Array& a, double spacing) {
            io::save_image(p, to_image(a, spacing));
        },
        py::arg("path"), py::arg("image"), py::arg("spacing") = 1.0);
    m.def(
        "load_image", [](const std::filesystem::path& p) { return to_array(io::load_image(p)); }, py::arg("path"));
    m.def(
        "save_sinogram",
        [](const std::filesystem::path& p, const Array& a, const ScanGeometry& geom) {
            io::save_sinogram(p, to_sinogram(a, geom));
        },
        py::arg("path"), py::arg("sinogram"), py::arg("geom"));
    m.def(
        "load_sinogram",
        [](const std::filesystem::path& p) {
            const Sinogram s = io::load_sinogram(p);
            return py::make_tuple(to_array(s), s.geometry());
        },
        py::arg("path"), "Returns (array, geometry).");
    m.def("save_filter", &io::save_filter, py::arg("path"), py::arg("filter"));
    m.def("load_filter", &io::load_filter, py::arg("path"));
}
