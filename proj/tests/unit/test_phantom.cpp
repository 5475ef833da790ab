#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fbpl/phantom.hpp"
#include "gen.hpp"

using namespace fbpl;

namespace {

// Lattice points (pixel centers) inside a circle, counted row by row from the
// chord half-width rather than by testing every pixel.
std::size_t lattice_count(std::size_t size, double radius) {
    const double c = 0.5 * static_cast<double>(size - 1);
    std::size_t count = 0;
    for (std::size_t i = 0; i < size; ++i) {
        const double y = static_cast<double>(i) - c;
        if (std::abs(y) > radius) {
            continue;
        }
        const double half = std::sqrt(radius * radius - y * y);
        const auto lo = static_cast<long>(std::ceil(c - half));
        const auto hi = static_cast<long>(std::floor(c + half));
        count += static_cast<std::size_t>(std::max(0L, std::min(hi, static_cast<long>(size) - 1) -
                                                           std::max(lo, 0L) + 1));
    }
    return count;
}

double sum(const Image& img) {
    double s = 0.0;
    for (double v : img.values()) {
        s += v;
    }
    return s;
}

}  // namespace

TEST_CASE("disc radius 0 is empty") {
    const Image d = make_disc(GridSpec(16), 0.0);
    CHECK(sum(d) == 0.0);
}

TEST_CASE("disc membership at center and corner") {
    const Image d = make_disc(GridSpec(512), 100.0);
    CHECK(d(256, 256) == 1.0);
    CHECK(d(255, 255) == 1.0);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(511, 511) == 0.0);
}

TEST_CASE("disc pixel sum matches area") {
    const Image d = make_disc(GridSpec(512), 100.0);
    const double area = std::numbers::pi * 100.0 * 100.0;
    CHECK(std::abs(sum(d) - area) < 0.02 * area);
    CHECK(sum(d) == static_cast<double>(lattice_count(512, 100.0)));
}

TEST_CASE("disc pixel count matches the chord-width lattice count") {
    gen::Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = rng.index(2, 200);
        const double r = rng.uniform(0.0, 0.5 * static_cast<double>(n));
        CHECK(sum(make_disc(GridSpec(n), r)) == static_cast<double>(lattice_count(n, r)));
    }
}

TEST_CASE("disc value and spacing") {
    const Image d = make_disc(GridSpec(20, 0.5), 2.0, 0.3);
    CHECK(d(10, 10) == 0.3);
    CHECK(sum(d) == doctest::Approx(0.3 * static_cast<double>(lattice_count(20, 4.0))));
}

TEST_CASE("disc radius beyond the half extent is rejected") {
    CHECK_THROWS_AS(make_disc(GridSpec(16), 8.01), ValidationError);
    CHECK_NOTHROW(make_disc(GridSpec(16), 8.0));
    CHECK_THROWS_AS(make_disc(GridSpec(16), -1.0), ValidationError);
}

TEST_CASE("disc is monotone in radius") {
    gen::Rng rng(7);
    const GridSpec g(64);
    for (int trial = 0; trial < 40; ++trial) {
        double r1 = rng.uniform(0.0, 32.0);
        double r2 = rng.uniform(0.0, 32.0);
        if (r1 > r2) {
            std::swap(r1, r2);
        }
        const Image a = make_disc(g, r1);
        const Image b = make_disc(g, r2);
        for (std::size_t i = 0; i < g.num_pixels(); ++i) {
            REQUIRE(a.values()[i] <= b.values()[i]);
        }
    }
}

TEST_CASE("disc is invariant under a 90 degree index rotation") {
    gen::Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = rng.index(2, 90);
        const GridSpec g(n);
        const Image d = make_disc(g, rng.uniform(0.0, g.half_extent()));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                REQUIRE(d(i, j) == d(j, n - 1 - i));
            }
        }
    }
}

TEST_CASE("training set radii") {
    const GridSpec g(512);
    const auto set = make_training_set(g, 10);
    REQUIRE(set.size() == 10);
    CHECK(training_radius(g, 1, 10) == doctest::Approx(23.27).epsilon(1e-3));
    CHECK(training_radius(g, 10, 10) == doctest::Approx(232.73).epsilon(1e-3));
    double prev = -1.0;
    for (std::size_t i = 1; i <= 10; ++i) {
        const double r = training_radius(g, i, 10);
        CHECK(r > prev);
        prev = r;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(set[i].grid() == g);
        CHECK(sum(set[i]) == static_cast<double>(lattice_count(512, training_radius(g, i + 1, 10))));
    }
}

TEST_CASE("single training disc has radius size/4") {
    const GridSpec g(40, 0.5);
    const auto set = make_training_set(g, 1);
    REQUIRE(set.size() == 1);
    CHECK(training_radius(g, 1, 1) == doctest::Approx(5.0));
    CHECK(sum(set[0]) == sum(make_disc(g, 5.0)));
    CHECK_THROWS_AS(make_training_set(g, 0), ValidationError);
}

TEST_CASE("held-out phantom") {
    const GridSpec g(256);
    const Image h = make_held_out(g);
    double lo = 1e9, hi = -1e9;
    for (double v : h.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(held_out_ellipses().size() >= 4);

    const Image again = make_held_out(g);
    CHECK(std::equal(h.values().begin(), h.values().end(), again.values().begin()));

    for (const Image& disc : make_training_set(g, 10)) {
        CHECK(gen::max_abs_diff(h.values(), disc.values()) > 0.0);
    }
}

TEST_CASE("held-out phantom has several distinct intensities and is not radially symmetric") {
    const GridSpec g(128);
    const Image h = make_held_out(g);
    std::vector<double> levels(h.values().begin(), h.values().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    CHECK(levels.size() >= 5);

    bool differs = false;
    for (std::size_t i = 0; i < 128 && !differs; ++i) {
        for (std::size_t j = 0; j < 128 && !differs; ++j) {
            differs = h(i, j) != h(j, 127 - i);
        }
    }
    CHECK(differs);
}
