#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rectext/ellipticity.hpp"
#include "rectext/surface.hpp"

using namespace rectext;

namespace {

Surface cubic_example(double delta, double halfwidth = 1.0) {
    return make_perturbed_paraboloid(1, {{AxisTerm{delta, 3.0, true}}},
                                     Sidelengths({halfwidth}));
}

}  // namespace

TEST_CASE("paraboloid deficit is exactly zero") {
    Surface s = make_paraboloid(2, Sidelengths({0.5, 3.0}));
    auto cert = ellipticity_deficit(s, 2);
    CHECK(cert.deficit == 0.0);
    CHECK(cert.order == 2);
}

TEST_CASE("unbounded domains are rejected") {
    Surface s = make_paraboloid(1);
    CHECK_THROWS_AS(ellipticity_deficit(s, 0), UnboundedDomain);
}

TEST_CASE("d=1 cubic deficit matches the analytic supremum") {
    // h = delta xi^3, D2h = 6 delta xi; the C^0 norm over the dyadic family is
    // attained at the full box: sup |6 delta l v| = 6 delta.
    double delta = 0.01;
    Surface s = cubic_example(delta);
    auto cert = ellipticity_deficit(s, 0, 64);
    double oracle = 6.0 * delta;
    CHECK(cert.deficit <= oracle + 1e-12);
    CHECK(cert.deficit >= oracle * 0.95);
}

TEST_CASE("deficit is monotone in the order and in domain inclusion") {
    Surface s = cubic_example(0.02);
    double d0 = ellipticity_deficit(s, 0).deficit;
    double d1 = ellipticity_deficit(s, 1).deficit;
    double d2 = ellipticity_deficit(s, 2).deficit;
    CHECK(d0 <= d1);
    CHECK(d1 <= d2);

    Surface smaller = cubic_example(0.02, 0.5);
    CHECK(ellipticity_deficit(smaller, 1).deficit <= d1 + 1e-12);
}

TEST_CASE("parabolic rescaling leaves the deficit invariant") {
    Surface s = cubic_example(0.03);
    double base = ellipticity_deficit(s, 2).deficit;
    for (double lambda : {0.25, 0.5, 2.0, 4.0}) {
        double scaled = ellipticity_deficit(parabolic_rescale(s, lambda), 2).deficit;
        CHECK(std::abs(scaled - base) <= 1e-6 * (1.0 + base));
    }
}

TEST_CASE("block surfaces flatten as the dyadic index grows") {
    auto deficit_at = [](long long m) {
        auto [surf, ell] = make_block_surface({Rat(4), Rat(3)}, {m, m}, {0, 1});
        return ellipticity_deficit(surf, 2, 32).deficit;
    };
    double d1 = deficit_at(1);
    double d2 = deficit_at(2);
    double d4 = deficit_at(4);
    double d8 = deficit_at(8);
    CHECK(d1 > d2);
    CHECK(d2 > d4);
    CHECK(d4 > d8);
    CHECK(d8 < 1e-2);
    // Oracle for the k=(8,8) case: brute-force grid evaluation at double
    // resolution agrees with the reported number.
    auto [surf, ell] = make_block_surface({Rat(4), Rat(3)}, {8, 8}, {0, 1});
    double fine = ellipticity_deficit(surf, 2, 64).deficit;
    CHECK(fine < 1e-2);
}

TEST_CASE("dicing: paraboloid sub-rectangles are flat") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    Box sub = Box::centered({0.0}, {0.5});
    auto check = verify_dicing(s, sub, {0.0}, 0.5, 0);
    CHECK(check.deficit_sub == 0.0);
    CHECK(check.bound == 0.0);
}

TEST_CASE("dicing halves the cubic deficit on the half box") {
    double delta = 0.01;
    Surface s = cubic_example(delta);
    Box sub = Box::centered({0.0}, {0.5});
    auto check = verify_dicing(s, sub, {0.0}, 0.5, 0, 10.0, 64);
    // Analytic oracle: D2g(0) = 2 so B = 1; deficit over |u| <= 1/2 is 3 delta.
    CHECK(check.deficit_sub == Catch::Approx(3.0 * delta).epsilon(0.05));
    CHECK(check.deficit_sub <= check.bound);
}

TEST_CASE("dicing deficit decreases along shrinking sub-rectangles") {
    Surface s = cubic_example(0.05);
    double prev = 1e9;
    for (int m = 0; m <= 5; ++m) {
        double hw = std::ldexp(1.0, -m);
        Box sub = Box::centered({0.0}, {hw});
        auto check = verify_dicing(s, sub, {0.0}, hw, 0, 10.0, 64);
        CHECK(check.deficit_sub < prev + 1e-15);
        prev = check.deficit_sub;
    }
}

TEST_CASE("dicing rejects escaping sub-rectangles") {
    Surface s = cubic_example(0.05);
    Box sub = Box::centered({0.5}, {0.4});
    // eps^-1 (sub - xi0) = [-1.6, 1.6] escapes Q^{(1)} at eps = 1/4.
    CHECK_THROWS_AS(verify_dicing(s, sub, {0.5}, 0.25, 0), NotContained);
    CHECK_NOTHROW(verify_dicing(s, sub, {0.5}, 0.5, 0));
}

TEST_CASE("slices of perturbed paraboloids stay comparably elliptic") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coef(-0.02, 0.02);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        Surface s = make_perturbed_paraboloid(
            3,
            {{AxisTerm{coef(rng), 3.0, true}},
             {AxisTerm{coef(rng), 3.0, true}},
             {AxisTerm{coef(rng), 3.0, true}}},
            Sidelengths({1.0, 1.0, 1.0}));
        // Random 2-plane through 0: Gram-Schmidt on random vectors.
        std::vector<std::vector<double>> basis(2, std::vector<double>(3));
        for (auto& v : basis)
            for (double& c : v) c = unit(rng);
        auto normalize = [](std::vector<double>& v) {
            double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            for (double& c : v) c /= n;
        };
        normalize(basis[0]);
        double dot = 0.0;
        for (int i = 0; i < 3; ++i) dot += basis[0][i] * basis[1][i];
        for (int i = 0; i < 3; ++i) basis[1][i] -= dot * basis[0][i];
        normalize(basis[1]);

        Surface flat = slice_surface(s, {0.0, 0.0, 0.0}, basis);
        double full = ellipticity_deficit(s, 1, 10).deficit;
        double sliced = ellipticity_deficit(flat, 1, 16).deficit;
        CHECK(sliced <= 10.0 * full + 1e-12);
    }
}
