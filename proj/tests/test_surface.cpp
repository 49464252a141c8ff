#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rectext/surface.hpp"

using namespace rectext;

TEST_CASE("paraboloid evaluates and differentiates exactly") {
    Surface s = make_paraboloid(2);
    std::vector<double> xi{1.0, 1.0};
    CHECK(s.value(xi) == Catch::Approx(2.0));
    auto h = s.hessian(xi);
    CHECK(h[0][0] == Catch::Approx(2.0));
    CHECK(h[1][1] == Catch::Approx(2.0));
    CHECK(h[0][1] == Catch::Approx(0.0));
    std::vector<double> other{-0.3, 0.7};
    auto h2 = s.hessian(other);
    CHECK(h2[0][0] == Catch::Approx(2.0));
    CHECK(h2[1][1] == Catch::Approx(2.0));
}

TEST_CASE("g_beta closed forms") {
    Surface s = make_gbeta({Rat(4), Rat(3)});
    std::vector<double> xi{1.0, 1.0};
    CHECK(s.value(xi) == Catch::Approx(2.0));
    // d/dxi_1 |xi_1|^4 = 4 |xi_1|^3 sgn(xi_1)
    std::vector<double> p{-0.5, 0.7};
    auto grad = s.gradient(p);
    CHECK(grad[0] == Catch::Approx(4.0 * 0.125 * -1.0));
    CHECK(grad[1] == Catch::Approx(3.0 * 0.49));

    CHECK_THROWS_AS(make_gbeta({Rat(1), Rat(3)}), InvalidBeta);
    CHECK_THROWS_AS(make_gbeta({Rat(1, 2)}), InvalidBeta);
}

TEST_CASE("block surface sidelengths match the dyadic formula") {
    auto [surf, ell] = make_block_surface({Rat(4), Rat(3)}, {1, 1}, {0, 1});
    REQUIRE(ell.dim() == 2);
    CHECK(ell[0] == Catch::Approx(std::exp2(-4.0)));
    CHECK(ell[1] == Catch::Approx(std::exp2(-3.0)));
    CHECK(surf.domain()[0] == Catch::Approx(ell[0]));

    // k=(3,4): 3*4 >= 4*3 holds (equality is fine).
    CHECK_NOTHROW(make_block_surface({Rat(4), Rat(3)}, {3, 4}, {0, 1}));
    // k=(1,4): 1*4 < 4*3 violates the ordering.
    CHECK_THROWS_AS(make_block_surface({Rat(4), Rat(3)}, {1, 4}, {0, 1}), RegimeMismatch);
    CHECK_THROWS_AS(make_block_surface({Rat(1, 2), Rat(3)}, {1, 1}, {0, 1}), InvalidBeta);
}

TEST_CASE("parabolic rescale is exact") {
    Surface s = make_perturbed_paraboloid(1, {{AxisTerm{0.05, 3.0, true}}},
                                          Sidelengths({1.0}));
    Surface same = parabolic_rescale(s, 1.0);
    std::vector<double> xi{0.37};
    CHECK(same.value(xi) == Catch::Approx(s.value(xi)));

    Surface para = make_paraboloid(2, Sidelengths({1.0, 2.0}));
    Surface scaled = parabolic_rescale(para, 3.0);
    std::vector<double> p{0.5, -1.2};
    CHECK(scaled.value(p) == Catch::Approx(p[0] * p[0] + p[1] * p[1]));
    CHECK(scaled.domain()[0] == Catch::Approx(3.0));
    CHECK(scaled.domain()[1] == Catch::Approx(6.0));

    // lambda^2 g(xi/lambda) pointwise for the cubic perturbation.
    Surface r2 = parabolic_rescale(s, 2.0);
    std::vector<double> q{0.8};
    std::vector<double> qh{0.4};
    CHECK(r2.value(q) == Catch::Approx(4.0 * s.value(qh)));
}

TEST_CASE("axis-aligned slices compose by substitution") {
    Surface para = make_paraboloid(2, Sidelengths({1.0, 1.0}));
    double c = 0.4;
    Surface flat = slice_surface(para, {0.0, c}, {{1.0, 0.0}});
    std::vector<double> eta{0.3};
    CHECK(flat.value(eta) == Catch::Approx(0.09 + c * c));
    std::vector<double> zero{0.0};
    CHECK(flat.value(zero) == Catch::Approx(para.value(std::vector<double>{0.0, c})));
    CHECK(flat.dim() == 1);
    CHECK(flat.domain()[0] == Catch::Approx(1.0));

    // Coordinate-plane slice of the paraboloid through 0 is the lower
    // dimensional paraboloid (h identically zero).
    Surface p3 = make_paraboloid(3, Sidelengths({1.0, 1.0, 1.0}));
    Surface sl = slice_surface(p3, {0.0, 0.0, 0.0}, {{1, 0, 0}, {0, 1, 0}});
    std::vector<double> e2{0.2, -0.6};
    CHECK(sl.value(e2) == Catch::Approx(0.04 + 0.36));
    MultiIndex a{2, 0};
    CHECK(sl.partial(a, e2) == Catch::Approx(2.0));
}

TEST_CASE("slice rejects bad inputs") {
    Surface para = make_paraboloid(2, Sidelengths({1.0, 1.0}));
    CHECK_THROWS_AS(slice_surface(para, {2.0, 0.0}, {{1.0, 0.0}}), EmptySlice);
    CHECK_THROWS_AS(slice_surface(para, {0.0, 0.0}, {{1.0, 1.0}}), NonOrthonormalBasis);
}

TEST_CASE("general slices use the chain rule") {
    Surface para = make_paraboloid(2, Sidelengths({1.0, 1.0}));
    double r = std::sqrt(0.5);
    Surface diag = slice_surface(para, {0.0, 0.0}, {{r, r}});
    // g(eta u) = |eta|^2 for unit u on the paraboloid.
    std::vector<double> eta{0.31};
    CHECK(diag.value(eta) == Catch::Approx(0.31 * 0.31));
    MultiIndex two{2};
    CHECK(diag.partial(two, eta) == Catch::Approx(2.0));
}

TEST_CASE("finite-difference surface approximates analytic derivatives") {
    Surface exact = make_perturbed_paraboloid(1, {{AxisTerm{0.1, 3.0, true}}},
                                              Sidelengths({1.0}));
    FdSurface fd([](std::span<const double> xi) { return xi[0] * xi[0] + 0.1 * xi[0] * xi[0] * xi[0]; },
                 Sidelengths({1.0}));
    std::vector<double> xi{0.42};
    MultiIndex d2{2};
    CHECK(fd.partial(d2, xi) == Catch::Approx(exact.partial(d2, xi)).margin(1e-5));
    MultiIndex d3{3};
    CHECK(fd.partial(d3, xi) == Catch::Approx(0.6).margin(1e-3));
    CHECK(fd.smoothness_order() == 1);
}
