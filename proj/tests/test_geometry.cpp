#include <doctest.h>

#include <cmath>
#include <random>

#include "projwarp/errors.hpp"
#include "projwarp/geometry.hpp"
#include "testutil.hpp"

using namespace projwarp;
using testutil::apply_matrix;
using testutil::matmul;
using testutil::max_abs_diff;
using testutil::random_homography;

TEST_CASE("invert identity and pure scaling") {
    CHECK(max_abs_diff(invert(Homography::identity()), Homography::identity()) == 0.0);

    Homography s = Homography::scaling(2, 2);
    Homography si = invert(s);
    CHECK(si(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(si(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(si(2, 2) == 1.0);
}

TEST_CASE("invert random homographies against the matrix-product oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Homography h = random_homography(rng);
        Homography prod = canonicalized(matmul(h, invert(h)));
        CHECK(max_abs_diff(prod, Homography::identity()) < 1e-9);
    }
}

TEST_CASE("invert rejects singular matrices") {
    // Second row is a multiple of the first: det = 0.
    Homography h;
    h.m = {1, 0, 0, 2, 0, 0, 0, 0, 1};
    CHECK_THROWS_AS(invert(h), numeric_error);
}

TEST_CASE("compose identity and inverse cases") {
    std::mt19937_64 rng(11);
    Homography h = random_homography(rng);
    CHECK(max_abs_diff(compose(Homography::identity(), h), canonicalized(h)) < 1e-12);
    CHECK(max_abs_diff(compose(h, invert(h)), Homography::identity()) < 1e-9);
}

TEST_CASE("compose translations matches the point-mapping oracle") {
    Homography a = Homography::translation(2, 3);
    Homography b = Homography::translation(4, -1);
    Homography c = compose(a, b);
    CHECK(c(0, 2) == doctest::Approx(6).epsilon(1e-15));
    CHECK(c(1, 2) == doctest::Approx(2).epsilon(1e-15));

    // Sequential mapping equals mapping through the product.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Homography h1 = random_homography(rng);
        Homography h2 = random_homography(rng);
        Homography prod = compose(h1, h2);
        for (double x : {0.0, 5.5, -3.25}) {
            for (double y : {0.0, 7.75, 2.0}) {
                Vec2 seq = apply_matrix(h2, apply_matrix(h1, x, y).x,
                                        apply_matrix(h1, x, y).y);
                Vec2 dir = project(prod, x, y);
                CHECK(seq.x == doctest::Approx(dir.x).epsilon(1e-9));
                CHECK(seq.y == doctest::Approx(dir.y).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("project examples") {
    CHECK(project(Homography::identity(), 5, 7).x == 5.0);
    CHECK(project(Homography::identity(), 5, 7).y == 7.0);

    Vec2 s = project(Homography::scaling(2, 2), 3, 4);
    CHECK(s.x == doctest::Approx(6).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(8).epsilon(1e-15));

    Homography t;
    t(2, 0) = 0.1;  // denominator 1 + 0.1 x
    Vec2 p = project(t, 10, 0);
    CHECK(p.x == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(p.y == doctest::Approx(0.0));
}

TEST_CASE("project throws on the horizon") {
    Homography t;
    t(2, 0) = 0.1;
    CHECK_THROWS_AS(project(t, -10, 0), numeric_error);
}

TEST_CASE("canonicalization makes scalar multiples equivalent") {
    std::mt19937_64 rng(23);
    Homography h = random_homography(rng);

    // Power-of-two scalings are exact.
    Homography h8 = h;
    for (double& v : h8.m) v *= 8.0;
    for (double x : {0.0, 3.5, 11.0}) {
        for (double y : {1.0, -2.25}) {
            Vec2 a = project(h, x, y);
            Vec2 b = project(h8, x, y);
            CHECK(a.x == b.x);
            CHECK(a.y == b.y);
        }
    }

    // Arbitrary scalars agree to rounding.
    Homography h17 = h;
    for (double& v : h17.m) v *= 1.7;
    for (double x : {0.0, 3.5, 11.0}) {
        Vec2 a = project(h, x, 2.0);
        Vec2 b = project(h17, x, 2.0);
        CHECK(a.x == doctest::Approx(b.x).epsilon(1e-12));
        CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
    }
}

TEST_CASE("decompose identity: unit denominator tables") {
    ScanlineDecomposition d(Homography::identity(), 4, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            Vec2 uv = d.map_grid(x, y);
            CHECK(uv.x == double(x));
            CHECK(uv.y == double(y));
        }
    }
}

TEST_CASE("decompose pure translation") {
    // Forward shift by (-2, -3) gives a backward map u = x + 2, v = y + 3.
    ScanlineDecomposition d(Homography::translation(-2, -3), 8, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            Vec2 uv = d.map_grid(x, y);
            CHECK(uv.x == doctest::Approx(x + 2.0).epsilon(1e-15));
            CHECK(uv.y == doctest::Approx(y + 3.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("map_point agrees with direct inverse projection") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Homography h = random_homography(rng);
        ScanlineDecomposition d(h, 64, 64);
        Homography p = invert(h);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                Vec2 a = d.map(x, y);
                Vec2 b = apply_matrix(p, x, y);
                CHECK(std::abs(a.x - b.x) < 1e-9);
                CHECK(std::abs(a.y - b.y) < 1e-9);
            }
        }
    }
}

TEST_CASE("scanline equivalence over a full 512x512 raster") {
    std::mt19937_64 rng(2024);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Homography h = random_homography(rng);
        ScanlineDecomposition d(h, 512, 512);
        Homography p = invert(h);
        for (int y = 0; y < 512; y += 1) {
            for (int x = 0; x < 512; x += 1) {
                Vec2 a = d.map_grid(x, y);
                Vec2 b = apply_matrix(p, x, y);
                if (std::abs(a.x - b.x) >= 1e-9 || std::abs(a.y - b.y) >= 1e-9) ++bad;
            }
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("map rejects far out-of-extent points") {
    ScanlineDecomposition d(Homography::identity(), 16, 16);
    CHECK_THROWS_AS(d.map(40.0, 2.0), numeric_error);
    CHECK_THROWS_AS(d.map(2.0, -9.0), numeric_error);
    // Sub-pixel positions just outside pixel centers stay legal.
    CHECK(d.map(15.4, 0.0).x == doctest::Approx(15.4));
    CHECK(d.map(-0.5, 0.0).x == doctest::Approx(-0.5));
}

TEST_CASE("construction rejects a horizon crossing the raster") {
    // Backward denominator 1 - 0.05 x vanishes at x = 20 inside a 64-wide raster.
    Homography p;
    p(2, 0) = -0.05;
    Homography forward = invert(p);
    CHECK_THROWS_AS(ScanlineDecomposition(forward, 64, 64), numeric_error);
    // A 16-wide raster stays clear.
    CHECK_NOTHROW(ScanlineDecomposition(forward, 16, 16));
}

TEST_CASE("jacobian on identity and linear maps") {
    ScanlineDecomposition di(Homography::identity(), 8, 8);
    JacobianEstimate j = di.jacobian(3, 4);
    CHECK(j.du_dx == 1.0);
    CHECK(j.du_dy == 0.0);
    CHECK(j.dv_dx == 0.0);
    CHECK(j.dv_dy == 1.0);

    // Forward 0.5x scaling means the backward map stretches by 2.
    ScanlineDecomposition ds(Homography::scaling(0.5, 0.5), 8, 8);
    JacobianEstimate js = ds.jacobian(3, 4);
    CHECK(js.du_dx == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(js.dv_dy == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("jacobian matches central finite differences") {
    // Finite-difference oracle, step 1e-4, on the backward rational map.
    Homography t;
    t(2, 0) = 0.1;
    Homography forward = invert(t);  // decomposition's backward map is t itself
    ScanlineDecomposition d(forward, 32, 32);

    auto check_at = [&](double x, double y) {
        const double eps = 1e-4;
        Vec2 xp = apply_matrix(t, x + eps, y);
        Vec2 xm = apply_matrix(t, x - eps, y);
        Vec2 yp = apply_matrix(t, x, y + eps);
        Vec2 ym = apply_matrix(t, x, y - eps);
        JacobianEstimate j = d.jacobian(x, y);
        CHECK(std::abs(j.du_dx - (xp.x - xm.x) / (2 * eps)) < 1e-5);
        CHECK(std::abs(j.dv_dx - (xp.y - xm.y) / (2 * eps)) < 1e-5);
        CHECK(std::abs(j.du_dy - (yp.x - ym.x) / (2 * eps)) < 1e-5);
        CHECK(std::abs(j.dv_dy - (yp.y - ym.y) / (2 * eps)) < 1e-5);
    };
    check_at(10, 0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(0.0, 31.0);
    for (int i = 0; i < 1000; ++i) check_at(coord(rng), coord(rng));
}

TEST_CASE("round trip through inverse stays put") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        Homography h = random_homography(rng);
        Homography hi = invert(h);
        for (int i = 0; i < 20; ++i) {
            double x = coord(rng), y = coord(rng);
            Vec2 back = project(hi, x, y);
            Vec2 again = project(h, back.x, back.y);
            CHECK(std::abs(again.x - x) < 1e-6);
            CHECK(std::abs(again.y - y) < 1e-6);
        }
    }
}

TEST_CASE("random composed triple multiplies to the identity") {
    auto triple = random_composed_triple(42, 128, 128);
    Homography prod = compose(compose(triple[0], triple[1]), triple[2]);
    CHECK(max_abs_diff(prod, Homography::identity()) < 1e-9);
}

TEST_CASE("random composed triple is deterministic in the seed") {
    auto a = random_composed_triple(7, 128, 128);
    auto b = random_composed_triple(7, 128, 128);
    for (int i = 0; i < 3; ++i) {
        CHECK(max_abs_diff(a[std::size_t(i)], b[std::size_t(i)]) == 0.0);
    }
    auto c = random_composed_triple(8, 128, 128);
    CHECK(max_abs_diff(a[0], c[0]) > 0.0);
}

TEST_CASE("100 seeds all yield admissible triples") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto triple = random_composed_triple(seed, 128, 128);
        Homography prod = compose(compose(triple[0], triple[1]), triple[2]);
        CHECK(max_abs_diff(prod, Homography::identity()) < 1e-9);
        // Factors must support decomposition over their rasters without
        // horizon errors; representative check on the source extent.
        CHECK_NOTHROW(ScanlineDecomposition(triple[0], 128, 128));
    }
}

TEST_CASE("matrix text round trip and parsing") {
    std::mt19937_64 rng(77);
    Homography h = canonicalized(random_homography(rng));
    Homography back = parse_matrix(format_matrix(h));
    CHECK(max_abs_diff(h, back) == 0.0);

    Homography sci = parse_matrix("1e0 0 0\n0 1E0 0\n2.5e-3 0 1\n");
    CHECK(sci(2, 0) == 0.0025);

    CHECK_THROWS_AS(parse_matrix("1 2 3 4"), data_error);
    CHECK_THROWS_AS(parse_matrix("1 2 3 4 5 6 7 8 9 10"), data_error);
    CHECK_THROWS_AS(parse_matrix("1 2 3 4 5 6 7 8 bananas"), data_error);
}
