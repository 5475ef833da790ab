#include <doctest.h>

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fbpl/phantom.hpp"
#include "fbpl/projector.hpp"
#include "gen.hpp"

using namespace fbpl;

namespace {

Image unit_pixel(const GridSpec& g, std::size_t j) {
    Image e(g);
    e.values()[j] = 1.0;
    return e;
}

}  // namespace

TEST_CASE("zero image projects to zero") {
    const GridSpec g(12);
    const Sinogram s = forward_project(Image(g), default_geometry(g, 9));
    CHECK(gen::max_abs(s.values()) == 0.0);
}

TEST_CASE("disc projection matches the chord length") {
    const GridSpec g(512);
    const ScanGeometry geom = default_geometry(g, 12);
    const Sinogram s = forward_project(make_disc(g, 100.0), geom);
    const std::size_t mid = geom.num_bins() / 2;
    for (std::size_t a = 0; a < geom.num_angles(); ++a) {
        CHECK(std::abs(s.row(a)[mid] - 200.0) <= 2.0);
        for (long off : {-90L, -60L, -25L, 10L, 45L, 80L}) {
            const auto m = static_cast<std::size_t>(static_cast<long>(mid) + off);
            const double sv = geom.bin_offset(m);
            const double chord = 2.0 * std::sqrt(100.0 * 100.0 - sv * sv);
            CHECK(std::abs(s.row(a)[m] - chord) <= 2.0);
        }
        CHECK(s.row(a)[mid + 110] == 0.0);
    }
}

TEST_CASE("chord length scales with pixel spacing") {
    const GridSpec g(128, 0.25);
    const ScanGeometry geom = default_geometry(g, 5);
    const Sinogram s = forward_project(make_disc(g, 10.0), geom);
    CHECK(std::abs(s.row(3)[geom.num_bins() / 2] - 20.0) <= 0.5);
}

TEST_CASE("forward projection is linear") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const GridSpec g(rng.index(4, 40), rng.uniform(0.5, 2.0));
        const ScanGeometry geom = default_geometry(g, rng.index(1, 20));
        const Image x = gen::image(g, rng);
        const Image y = gen::image(g, rng);
        const double alpha = rng.uniform(-3.0, 3.0);
        const double beta = rng.uniform(-3.0, 3.0);
        Image mix(g);
        for (std::size_t i = 0; i < g.num_pixels(); ++i) {
            mix.values()[i] = alpha * x.values()[i] + beta * y.values()[i];
        }
        const Sinogram px = forward_project(x, geom);
        const Sinogram py = forward_project(y, geom);
        const Sinogram pm = forward_project(mix, geom);
        double scale = 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i < geom.num_samples(); ++i) {
            const double expect = alpha * px.values()[i] + beta * py.values()[i];
            scale = std::max(scale, std::abs(expect));
            err = std::max(err, std::abs(pm.values()[i] - expect));
        }
        CHECK(err <= 1e-10 * scale);
    }
}

TEST_CASE("centered disc gives a detector-symmetric sinogram") {
    gen::Rng rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        const GridSpec g(rng.index(8, 120));
        const ScanGeometry geom = default_geometry(g, rng.index(1, 30));
        const Sinogram s = forward_project(make_disc(g, rng.uniform(0.5, g.half_extent())), geom);
        const double tol = 1e-6 * std::max(1.0, gen::max_abs(s.values()));
        const std::size_t m = geom.num_bins();
        for (std::size_t a = 0; a < geom.num_angles(); ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                REQUIRE(std::abs(s.row(a)[b] - s.row(a)[m - 1 - b]) < tol);
            }
        }
    }
}

TEST_CASE("dense system shape and columns") {
    const GridSpec g(2);
    const ScanGeometry geom(2, 5, 1.0);
    const DenseSystem sys = build_dense_system(g, geom);
    CHECK(sys.rows() == 10);
    CHECK(sys.cols() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        const Sinogram col = forward_project(unit_pixel(g, j), geom);
        for (std::size_t r = 0; r < 10; ++r) {
            REQUIRE(sys.at(r, j) == col.values()[r]);
        }
    }
}

TEST_CASE("dense system columns are bitwise unit projections") {
    const GridSpec g(6, 1.5);
    const ScanGeometry geom = default_geometry(g, 7);
    const DenseSystem sys = build_dense_system(g, geom);
    for (std::size_t j = 0; j < sys.cols(); ++j) {
        const Sinogram col = forward_project(unit_pixel(g, j), geom);
        for (std::size_t r = 0; r < sys.rows(); ++r) {
            REQUIRE(sys.at(r, j) == col.values()[r]);
        }
    }
}

TEST_CASE("dense system is refused above the size guard") {
    CHECK_THROWS_AS(build_dense_system(GridSpec(33), ScanGeometry(2, 5, 1.0)), ValidationError);
    CHECK_NOTHROW(build_dense_system(GridSpec(4), ScanGeometry(2, 7, 1.0)));
}

TEST_CASE("dense oracle agrees with the ray-driven projector") {
    for (std::size_t n : {8u, 16u}) {
        gen::Rng rng(n);
        const GridSpec g(n);
        const ScanGeometry geom = default_geometry(g, 12);
        const DenseSystem sys = build_dense_system(g, geom);
        for (int trial = 0; trial < 3; ++trial) {
            const Image x = gen::image(g, rng);
            CHECK(gen::max_abs_diff(forward_project(x, geom).values(), dense_forward(x, sys).values()) < 1e-10);
        }
        Image ones(g, std::vector<double>(g.num_pixels(), 1.0));
        CHECK(gen::max_abs_diff(forward_project(ones, geom).values(), dense_forward(ones, sys).values()) < 1e-12);
    }
}

TEST_CASE("matched back-projection is the exact transpose") {
    gen::Rng rng(31);
    for (std::size_t n : {8u, 16u}) {
        const GridSpec g(n);
        const ScanGeometry geom = default_geometry(g, 10);
        const DenseSystem sys = build_dense_system(g, geom);
        for (int trial = 0; trial < 5; ++trial) {
            const Image x = gen::image(g, rng);
            const Sinogram y = gen::sinogram(geom, rng);
            const double lhs = gen::dot(dense_forward(x, sys).values(), y.values());
            const double rhs = gen::dot(x.values(), matched_back_project(y, sys).values());
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), 1e-300));
        }
    }
    const GridSpec g(8);
    const DenseSystem sys = build_dense_system(g, default_geometry(g, 4));
    CHECK(gen::max_abs(matched_back_project(Sinogram(sys.geom), sys).values()) == 0.0);
}

TEST_CASE("dense operators reject mismatched shapes") {
    const GridSpec g(8);
    const DenseSystem sys = build_dense_system(g, default_geometry(g, 4));
    CHECK_THROWS_AS(dense_forward(Image(GridSpec(9)), sys), ValidationError);
    CHECK_THROWS_AS(matched_back_project(Sinogram(default_geometry(g, 5)), sys), ValidationError);
}

TEST_CASE("zero sinogram back-projects to zero") {
    const GridSpec g(10);
    CHECK(gen::max_abs(back_project(Sinogram(default_geometry(g, 6)), g).values()) == 0.0);
}

TEST_CASE("single-angle constant sinogram back-projects to pi times the constant") {
    for (std::size_t n : {2u, 9u, 64u}) {
        const GridSpec g(n);
        const ScanGeometry geom = default_geometry(g, 1);
        const double c = 0.37;
        const Sinogram s(geom, std::vector<double>(geom.num_samples(), c));
        const Image b = back_project(s, g);
        for (double v : b.values()) {
            REQUIRE(v == doctest::Approx(std::numbers::pi * c).epsilon(1e-14));
        }
    }
}

TEST_CASE("back-projection interpolates linearly between detector bins") {
    // One angle (theta = 0) so s = x; a linear ramp on the detector is reproduced exactly.
    const GridSpec g(8, 0.5);
    const ScanGeometry geom(1, 13, 0.5);
    Sinogram s(geom);
    for (std::size_t m = 0; m < 13; ++m) {
        s.row(0)[m] = 2.0 * geom.bin_offset(m) + 1.0;
    }
    const Image b = back_project(s, g);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            REQUIRE(b(i, j) == doctest::Approx(std::numbers::pi * (2.0 * g.world_x(j) + 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("pixel-driven and matched back-projection differ but correlate") {
    gen::Rng rng(41);
    const GridSpec g(8);
    const ScanGeometry geom = default_geometry(g, 16);
    const DenseSystem sys = build_dense_system(g, geom);
    const Sinogram p = forward_project(gen::image(g, rng, 0.0, 1.0), geom);
    const Image pixel = back_project(p, g);
    const Image matched = matched_back_project(p, sys);
    CHECK(gen::max_abs_diff(pixel.values(), matched.values()) > 1e-6);
    CHECK(gen::correlation(pixel.values(), matched.values()) > 0.99);
}

TEST_CASE("back-projection is linear") {
    gen::Rng rng(43);
    const GridSpec g(20);
    const ScanGeometry geom = default_geometry(g, 11);
    const Sinogram a = gen::sinogram(geom, rng);
    const Sinogram b = gen::sinogram(geom, rng);
    Sinogram sum(geom);
    for (std::size_t i = 0; i < geom.num_samples(); ++i) {
        sum.values()[i] = 2.0 * a.values()[i] - 0.5 * b.values()[i];
    }
    const Image ba = back_project(a, g);
    const Image bb = back_project(b, g);
    const Image bs = back_project(sum, g);
    for (std::size_t i = 0; i < g.num_pixels(); ++i) {
        REQUIRE(bs.values()[i] == doctest::Approx(2.0 * ba.values()[i] - 0.5 * bb.values()[i]).epsilon(1e-10));
    }
}

#ifdef _OPENMP
TEST_CASE("results do not depend on the thread count") {
    gen::Rng rng(47);
    const GridSpec g(48);
    const ScanGeometry geom = default_geometry(g, 30);
    const Image x = gen::image(g, rng);
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    const Sinogram s1 = forward_project(x, geom);
    const Image b1 = back_project(s1, g);
    omp_set_num_threads(std::max(4, before));
    const Sinogram s4 = forward_project(x, geom);
    const Image b4 = back_project(s4, g);
    omp_set_num_threads(before);
    CHECK(std::equal(s1.values().begin(), s1.values().end(), s4.values().begin()));
    CHECK(std::equal(b1.values().begin(), b1.values().end(), b4.values().begin()));
}
#endif
