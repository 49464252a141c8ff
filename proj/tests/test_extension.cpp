#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rectext/extension.hpp"
#include "rectext/knapp.hpp"
#include "rectext/surface.hpp"

using namespace rectext;

namespace {

GridFunction unit_mass_indicator(const Sidelengths& ell, int res) {
    double vol = ell.volume();
    return GridFunction::from_function(ell, std::vector<int>(ell.dim(), res),
                                       [&](std::span<const double>) {
                                           return Complex(1.0 / vol, 0.0);
                                       });
}

}  // namespace

TEST_CASE("zero phase reproduces the integral") {
    Surface s = make_paraboloid(2, Sidelengths({1.0, 1.0}));
    GridFunction f = unit_mass_indicator(Sidelengths({1.0, 1.0}), 16);
    auto vals = extend_at(s, f, {SpaceTimePoint{0.0, {0.0, 0.0}}});
    CHECK(vals[0].real() == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(vals[0].imag() == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("extension is linear in the density") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    GridFunction f = unit_mass_indicator(Sidelengths({1.0}), 64);
    Complex alpha(0.3, -1.2);
    GridFunction g = f.scaled(alpha);
    std::vector<SpaceTimePoint> pts;
    for (int i = 0; i < 7; ++i) pts.push_back({0.1 * i, {0.2 * i - 0.5}});
    auto a = extend_at(s, f, pts);
    auto b = extend_at(s, g, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(std::abs(b[i] - alpha * a[i]) < 1e-12);
}

TEST_CASE("self-refinement oracle at (t,x) = (1,0)") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    GridFunction coarse = unit_mass_indicator(Sidelengths({1.0}), 256);
    GridFunction fine = unit_mass_indicator(Sidelengths({1.0}), 2560);
    std::vector<SpaceTimePoint> pt{{1.0, {0.0}}};
    Complex a = extend_at(s, coarse, pt)[0];
    Complex b = extend_at(s, fine, pt)[0];
    CHECK(std::abs(a - b) / std::abs(b) < 1e-4);
}

TEST_CASE("norms of simple fields") {
    FieldSamples u;
    u.box.t_halfwidth = 1.0;
    u.box.x_halfwidths = {2.0};
    u.box.resolution = {4, 8};
    u.values.assign(u.box.size(), Complex(1.0, 0.0));
    double vol = 2.0 * 1.0 * 2.0 * 2.0;  // |box| = 8
    CHECK(lq_norm(u, 3.0) == Catch::Approx(std::pow(vol, 1.0 / 3.0)));
    CHECK(lq_norm(u, std::numeric_limits<double>::infinity()) == Catch::Approx(1.0));

    // Indicator of a sub-block: weak norm |A|^{1/q} exactly.
    FieldSamples v = u;
    std::size_t marked = 0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        bool on = i % 4 == 0;
        v.values[i] = on ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        marked += on;
    }
    double measure = static_cast<double>(marked) * v.box.cell_volume();
    CHECK(lq_norm(v, 2.0, NormMode::weak) == Catch::Approx(std::sqrt(measure)));
}

TEST_CASE("weak norm never exceeds the strong norm") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mag(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        FieldSamples u;
        u.box.t_halfwidth = 0.7;
        u.box.x_halfwidths = {1.3};
        u.box.resolution = {5, 11};
        u.values.resize(u.box.size());
        for (auto& c : u.values) c = Complex(mag(rng), mag(rng));
        double q = 1.0 + 5.0 * mag(rng) / 2.0;
        CHECK(lq_norm(u, q, NormMode::weak) <= lq_norm(u, q, NormMode::strong) + 1e-12);
    }
}

TEST_CASE("modulation translates the field") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    int res = 128;
    GridFunction f = GridFunction::from_function(
        Sidelengths({1.0}), {res},
        [&](std::span<const double> xi) { return Complex(bump_profile(xi[0]), 0.0); });
    double t0 = 0.4, x0 = -0.7;
    GridFunction mod = GridFunction::from_function(
        Sidelengths({1.0}), {res}, [&](std::span<const double> xi) {
            double phase = -(t0 * xi[0] * xi[0] + x0 * xi[0]);
            return Complex(bump_profile(xi[0]), 0.0) * Complex(std::cos(phase), std::sin(phase));
        });
    std::vector<SpaceTimePoint> base, shifted;
    for (int i = 0; i < 9; ++i) {
        double t = -0.8 + 0.2 * i, x = 0.5 - 0.1 * i;
        base.push_back({t, {x}});
        shifted.push_back({t + t0, {x + x0}});
    }
    auto a = extend_at(s, f, base);
    auto b = extend_at(s, mod, shifted);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(std::abs(std::abs(a[i]) - std::abs(b[i])) < 1e-6);
}

TEST_CASE("quotients ignore unimodular scaling and respect nesting") {
    Surface s = make_paraboloid(1, Sidelengths({4.0}));
    auto kn = knapp(1, Sidelengths({1.0}), 0, 128);
    SpaceTimeBox box = scaled_box(kn.dual_box, 4.0, 24, 24);
    double q1 = quotient(s, kn.cap.gridfn, box, 2.0, 6.0, QuotientMode::strong);
    Complex phase = std::polar(1.0, 0.83);
    double q2 = quotient(s, kn.cap.gridfn.scaled(phase), box, 2.0, 6.0, QuotientMode::strong);
    CHECK(q1 == Catch::Approx(q2));

    // Same test function viewed inside a larger box: identical quotient, so
    // the best quotient over the larger family can only be at least as big.
    Surface wide = make_paraboloid(1, Sidelengths({8.0}));
    double q3 = quotient(wide, kn.cap.gridfn, box, 2.0, 6.0, QuotientMode::strong);
    CHECK(q3 == Catch::Approx(q1));
}

TEST_CASE("Knapp quotient is stable under refinement") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    auto coarse = knapp(1, Sidelengths({1.0}), 0, 96);
    auto fine = knapp(1, Sidelengths({1.0}), 0, 192);
    SpaceTimeBox box = scaled_box(coarse.dual_box, 4.0, 32, 32);
    SpaceTimeBox box_fine = scaled_box(coarse.dual_box, 4.0, 64, 64);
    double qa = quotient(s, coarse.cap.gridfn, box, 2.0, 6.0, QuotientMode::strong);
    double qb = quotient(s, fine.cap.gridfn, box_fine, 2.0, 6.0, QuotientMode::strong);
    CHECK(qa == Catch::Approx(qb).epsilon(0.02));
    CHECK(qa > 0.0);
}

TEST_CASE("L2 mass keeps growing with the time window") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    GridFunction f = GridFunction::from_function(
        Sidelengths({1.0}), {256},
        [](std::span<const double> xi) { return Complex(bump_profile(xi[0]), 0.0); });
    double prev = 0.0;
    for (double scale : {2.0, 4.0, 8.0}) {
        SpaceTimeBox box;
        box.t_halfwidth = scale;
        box.x_halfwidths = {2.0 * scale};
        box.resolution = {static_cast<int>(32 * scale), static_cast<int>(32 * scale)};
        double m = lq_norm(extend(s, f, box), 2.0);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("phase guard rejects aliasing requests") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    GridFunction f = unit_mass_indicator(Sidelengths({1.0}), 8);
    SpaceTimeBox box;
    box.t_halfwidth = 1.0;
    box.x_halfwidths = {200.0};
    box.resolution = {4, 4};
    CHECK_THROWS_AS(extend(s, f, box), ResolutionTooCoarse);
}

TEST_CASE("doubling the quadrature changes field values below a part in a thousand") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    auto base = knapp(1, Sidelengths({1.0}), 0, 48);
    auto fine = knapp(1, Sidelengths({1.0}), 0, 96);
    std::vector<SpaceTimePoint> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({-0.4 + 0.07 * i, {0.5 - 0.09 * i}});
    auto a = extend_at(s, base.cap.gridfn, pts);
    auto b = extend_at(s, fine.cap.gridfn, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) <= 1e-3 * std::abs(b[i]));
}
