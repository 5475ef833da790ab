#include <doctest.h>

#include <cmath>

#include "fbpl/metrics.hpp"
#include "fbpl/phantom.hpp"
#include "fbpl/projector.hpp"
#include "gen.hpp"

using namespace fbpl;

TEST_CASE("identical images have zero difference") {
    gen::Rng rng(91);
    const Image a = gen::image(GridSpec(9), rng);
    const DiffStats s = abs_diff_stats(a, a);
    CHECK(s.mean == 0.0);
    CHECK(s.std_dev == 0.0);
    CHECK(s.min == 0.0);
    CHECK(s.max == 0.0);
}

TEST_CASE("constant offset") {
    gen::Rng rng(93);
    const Image a = gen::image(GridSpec(7), rng);
    Image b = a;
    for (double& v : b.values()) {
        v -= 0.125;
    }
    const DiffStats s = abs_diff_stats(a, b);
    CHECK(s.mean == doctest::Approx(0.125));
    CHECK(s.min == doctest::Approx(0.125));
    CHECK(s.max == doctest::Approx(0.125));
    CHECK(s.std_dev == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("population standard deviation") {
    const GridSpec g(2);
    const Image a(g, {0.0, 0.0, 0.0, 0.0});
    const Image b(g, {1.0, -3.0, 0.0, 2.0});
    const DiffStats s = abs_diff_stats(a, b);
    CHECK(s.mean == doctest::Approx(1.5));
    CHECK(s.std_dev == doctest::Approx(std::sqrt(1.25)));
    CHECK(s.min == 0.0);
    CHECK(s.max == 3.0);
}

TEST_CASE("diff stats are symmetric and ordered") {
    gen::Rng rng(95);
    for (int trial = 0; trial < 30; ++trial) {
        const GridSpec g(rng.index(2, 20));
        const Image a = gen::image(g, rng);
        const Image b = gen::image(g, rng);
        const DiffStats ab = abs_diff_stats(a, b);
        const DiffStats ba = abs_diff_stats(b, a);
        CHECK(ab.mean == ba.mean);
        CHECK(ab.std_dev == ba.std_dev);
        CHECK(ab.min == ba.min);
        CHECK(ab.max == ba.max);
        CHECK(0.0 <= ab.min);
        CHECK(ab.min <= ab.mean);
        CHECK(ab.mean <= ab.max);
        CHECK(ab.std_dev >= 0.0);
    }
}

TEST_CASE("diff stats need the same grid") {
    CHECK_THROWS_AS(abs_diff_stats(Image(GridSpec(4)), Image(GridSpec(5))), ValidationError);
    CHECK_THROWS_AS(abs_diff_stats(Image(GridSpec(4)), Image(GridSpec(4, 2.0))), ValidationError);
}

TEST_CASE("line profile of a disc") {
    const GridSpec g(256);
    const Image d = make_disc(g, 100.0);
    const auto p = line_profile(d);
    REQUIRE(p.size() == 256);
    for (const auto& pt : p) {
        if (std::abs(pt.x) <= 100.0) {
            CHECK(pt.value == 1.0);
        }
        if (std::abs(pt.x) >= 101.0) {
            CHECK(pt.value == 0.0);
        }
    }
    CHECK(p.front().x == doctest::Approx(-127.5));
    CHECK_THROWS_AS(line_profile(d, 256), ValidationError);
    CHECK(line_profile(d, 3)[5].value == d(3, 5));
}

TEST_CASE("cupping index") {
    const GridSpec g(64);
    const Image flat(g, std::vector<double>(g.num_pixels(), 2.5));
    CHECK(cupping_index(flat, 20.0) == doctest::Approx(0.0).scale(1.0));

    Image bowl(g);
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = 0; j < 64; ++j) {
            bowl(i, j) = std::hypot(g.world_x(j), g.world_y(i)) <= 4.0 ? 0.5 : 1.0;
        }
    }
    CHECK(cupping_index(bowl, 20.0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(cupping_index(flat, 0.0), ValidationError);
    CHECK_THROWS_AS(cupping_index(flat, 0.5), ValidationError);
    CHECK_THROWS_AS(cupping_index(Image(g), 20.0), ValidationError);
}

TEST_CASE("cupping index of a ram-lak disc reconstruction is small") {
    const GridSpec g(256);
    const ScanGeometry geom = default_geometry(g, 180);
    const Image recon = reconstruct(forward_project(make_disc(g, 100.0), geom), ramlak_filter(geom), g);
    CHECK(std::abs(cupping_index(recon, 100.0)) < 0.02);
}

TEST_CASE("spectrum distance") {
    const ScanGeometry geom(1, 101, 1.0);
    const std::size_t n = geom.pad_length();
    const SpectralFilter r = ramp_filter(geom);
    const SpectralFilter rl = ramlak_filter(geom);
    CHECK(spectrum_distance(r, r, n / 2) == 0.0);
    const double full = spectrum_distance(r, rl, n / 2);
    CHECK(full > 0.0);
    // Most of the difference sits in the lowest bins.
    CHECK(spectrum_distance(r, rl, n / 16) > 0.5 * full);
    CHECK(spectrum_distance(r, rl, 1) == doctest::Approx(std::hypot(rl[0] - r[0], rl[1] - r[1])));

    CHECK_THROWS_AS(spectrum_distance(r, rl, 0), ValidationError);
    CHECK_THROWS_AS(spectrum_distance(r, rl, n / 2 + 1), ValidationError);
    CHECK_THROWS_AS(spectrum_distance(r, ramp_filter(ScanGeometry(1, 40, 1.0)), 4), ValidationError);
    CHECK_THROWS_AS(spectrum_distance(r, ramp_filter(ScanGeometry(1, 101, 0.5)), 4), ValidationError);
}

TEST_CASE("spectrum distance is a metric") {
    gen::Rng rng(97);
    for (int trial = 0; trial < 50; ++trial) {
        const ScanGeometry geom(1, rng.index(2, 200), 1.0);
        const std::size_t kmax = rng.index(1, geom.pad_length() / 2);
        const SpectralFilter a = gen::symmetric_filter(geom, rng);
        const SpectralFilter b = gen::symmetric_filter(geom, rng);
        const SpectralFilter c = gen::symmetric_filter(geom, rng);
        const double ab = spectrum_distance(a, b, kmax);
        CHECK(ab >= 0.0);
        CHECK(spectrum_distance(a, a, kmax) == 0.0);
        CHECK(ab == spectrum_distance(b, a, kmax));
        CHECK(spectrum_distance(a, c, kmax) <= ab + spectrum_distance(b, c, kmax) + 1e-12);
    }
}
