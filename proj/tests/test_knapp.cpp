#include <catch2/catch_amalgamated.hpp>

#include "rectext/extension.hpp"
#include "rectext/knapp.hpp"
#include "rectext/surface.hpp"

using namespace rectext;

TEST_CASE("unit-scale cap has unit peak and unit-scale dual box") {
    auto kn = knapp(2, Sidelengths::ones(2), 0, 32);
    CHECK(kn.predicted_peak == Catch::Approx(1.0));
    CHECK(kn.dual_box.t_halfwidth == Catch::Approx(kKnappDualC));
    CHECK(kn.dual_box.x_halfwidths[0] == Catch::Approx(kKnappDualC));
    CHECK(kn.dual_box.x_halfwidths[1] == Catch::Approx(kKnappDualC));
    // Unit integral of the bump at reference scale.
    double mass = 0.0;
    for (const Complex& c : kn.cap.gridfn.samples) mass += c.real();
    mass *= kn.cap.gridfn.cell_volume();
    CHECK(mass == Catch::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("anisotropic cap peak follows l_1 ... l_j l_{j+1}^{d-j}") {
    double L = 8.0;
    auto kn = knapp(2, Sidelengths({1.0, L}), 1, 32);
    CHECK(kn.predicted_peak == Catch::Approx(L));
    CHECK(kn.dual_box.t_halfwidth == Catch::Approx(kKnappDualC / (L * L)));
    CHECK(kn.dual_box.x_halfwidths[0] == Catch::Approx(kKnappDualC));
    CHECK(kn.dual_box.x_halfwidths[1] == Catch::Approx(kKnappDualC / L));
    // Dual box volume = 2^{d+1} c^{d+1} (l_1...l_j)^{-1} l_{j+1}^{-(d-j+2)}.
    double vol = 2.0 * kn.dual_box.t_halfwidth;
    for (double h : kn.dual_box.x_halfwidths) vol *= 2.0 * h;
    CHECK(vol == Catch::Approx(std::pow(2.0 * kKnappDualC, 3) / std::pow(L, 3)));
}

TEST_CASE("field exceeds half the peak on the dual box") {
    // Frozen constant c = 1/8; checked for d = 1 and d = 2.
    {
        Surface s = make_paraboloid(1, Sidelengths({1.0}));
        auto kn = knapp(1, Sidelengths({1.0}), 0, 128);
        SpaceTimeBox box = kn.dual_box;
        box.resolution = {9, 9};
        auto field = extend(s, kn.cap.gridfn, box);
        double lo = 1e300;
        for (const Complex& c : field.values) lo = std::min(lo, std::abs(c));
        CHECK(lo >= 0.5 * kn.predicted_peak);
    }
    {
        Surface s = make_paraboloid(2, Sidelengths({1.0, 4.0}));
        for (long long j : {0LL, 1LL}) {
            auto kn = knapp(2, Sidelengths({1.0, 4.0}), j, 48);
            SpaceTimeBox box = kn.dual_box;
            box.resolution = {5, 5, 5};
            auto field = extend(s, kn.cap.gridfn, box);
            double lo = 1e300;
            for (const Complex& c : field.values) lo = std::min(lo, std::abs(c));
            CHECK(lo >= 0.5 * kn.predicted_peak);
        }
    }
}

TEST_CASE("knapp rejects bad inputs") {
    CHECK_THROWS_AS(knapp(2, Sidelengths({1.0, kInf}), 0, 16), InfiniteSidelength);
    CHECK_THROWS_AS(knapp(2, Sidelengths::ones(2), 2, 16), Error);
}

TEST_CASE("three dimensional caps follow the same formulas") {
    Sidelengths ell({0.5, 1.0, 2.0});
    auto kn = knapp(3, ell, 1, 12);
    CHECK(kn.predicted_peak == Catch::Approx(0.5 * 1.0 * 1.0));  // l_1 l_2^{d-j}
    CHECK(kn.dual_box.t_halfwidth == Catch::Approx(kKnappDualC / 1.0));
    CHECK(kn.dual_box.x_halfwidths[0] == Catch::Approx(kKnappDualC / 0.5));
    CHECK(kn.dual_box.x_halfwidths[2] == Catch::Approx(kKnappDualC / 1.0));
    Surface s = make_paraboloid(3);
    auto vals = extend_at(s, kn.cap.gridfn, {SpaceTimePoint{0.0, {0.0, 0.0, 0.0}}});
    CHECK(vals[0].real() == Catch::Approx(kn.predicted_peak).epsilon(1e-3));
}
