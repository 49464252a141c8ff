#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "rectext/sweep.hpp"

using namespace rectext;

namespace {

SweepPlan unit_plan() {
    SweepPlan plan;
    plan.surface.kind = "paraboloid";
    plan.surface.d = 1;
    plan.base_ell = {1.0};
    plan.ladder_axis = 0;
    plan.ladder = {1.0, 2.0, 4.0, 8.0};
    plan.pq = {{Rat(2), Rat(6)}};
    plan.cap_resolution = 64;
    plan.box_resolution_t = 16;
    plan.box_resolution_x = 16;
    return plan;
}

}  // namespace

TEST_CASE("synthetic exact power law fits to machine precision") {
    std::vector<SweepRow> table;
    for (double L : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        SweepRow row;
        row.ell = {1.0, L};
        row.p = Rat(2);
        row.q = Rat(6);
        row.mode = "strong";
        row.quotient = 7.0 * std::pow(L, 1.0 / 3.0);
        table.push_back(row);
    }
    PredictedExponents pe;
    pe.per_sidelength = {Rat(0), Rat(1, 3)};
    auto report = fit_exponents(table, pe, 0.05);
    REQUIRE(report.axes.size() == 1);
    CHECK(report.axes[0].axis == 1);
    CHECK(report.axes[0].slope == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(report.residual < 1e-12);
    CHECK(report.all_pass);

    // Constant tables have slope zero.
    for (auto& row : table) row.quotient = 3.25;
    pe.per_sidelength = {Rat(0), Rat(0)};
    auto flat = fit_exponents(table, pe, 0.05);
    CHECK(flat.axes[0].slope == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("short ladders are rejected") {
    std::vector<SweepRow> table;
    for (double L : {1.0, 1.5, 2.0}) {
        SweepRow row;
        row.ell = {L};
        row.p = Rat(2);
        row.q = Rat(6);
        row.quotient = L;
        table.push_back(row);
    }
    PredictedExponents pe;
    pe.per_sidelength = {Rat(1)};
    CHECK_THROWS_AS(fit_exponents(table, pe, 0.05), IllConditioned);
}

TEST_CASE("monotone fits sit between the end-octave secants") {
    // Convex monotone data in log-log coordinates.
    std::vector<SweepRow> table;
    std::vector<double> xs, ys;
    for (int i = 0; i <= 5; ++i) {
        double L = std::pow(2.0, i);
        SweepRow row;
        row.ell = {L};
        row.p = Rat(2);
        row.q = Rat(6);
        row.quotient = std::pow(L, 0.2) * (1.0 + 0.3 * i * i / 25.0);
        table.push_back(row);
        xs.push_back(i);
        ys.push_back(std::log2(row.quotient));
    }
    PredictedExponents pe;
    pe.per_sidelength = {Rat(1, 5)};
    auto report = fit_exponents(table, pe, 1.0);
    double first = ys[1] - ys[0];
    double last = ys[5] - ys[4];
    CHECK(report.axes[0].slope >= std::min(first, last) - 1e-12);
    CHECK(report.axes[0].slope <= std::max(first, last) + 1e-12);
}

TEST_CASE("sweeps are deterministic and survive row failures") {
    SweepPlan plan = unit_plan();
    auto t1 = run_sweep(plan);
    auto t2 = run_sweep(plan);
    REQUIRE(t1.size() == 4);
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].quotient == t2[i].quotient);
        CHECK(t1[i].error_flag.empty());
    }

    // Single-point ladder yields one row.
    SweepPlan tiny = unit_plan();
    tiny.ladder = {2.0};
    CHECK(run_sweep(tiny).size() == 1);

    // A bad row (unsorted sidelengths) is recorded, not fatal.
    SweepPlan bad = unit_plan();
    bad.surface.d = 2;
    bad.base_ell = {4.0, 2.0};
    bad.ladder_axis = 1;
    bad.ladder = {2.0, 8.0};
    auto t3 = run_sweep(bad);
    REQUIRE(t3.size() == 2);
    CHECK_FALSE(t3[0].error_flag.empty());  // (4,2) is not sorted
    CHECK(t3[1].error_flag.empty());        // (4,8) is fine
}

TEST_CASE("d=1 Knapp ladder at (2,6) is flat within five percent") {
    SweepPlan plan = unit_plan();
    plan.ladder = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    auto table = run_sweep(plan);
    double lo = 1e300, hi = 0.0;
    for (const auto& row : table) {
        REQUIRE(row.error_flag.empty());
        lo = std::min(lo, row.quotient);
        hi = std::max(hi, row.quotient);
    }
    CHECK((hi - lo) / hi < 0.05);
}

TEST_CASE("plans round-trip through JSON and CSV with their hash") {
    SweepPlan plan = unit_plan();
    Json j = to_json(plan);
    SweepPlan back = sweep_plan_from_json(j);
    CHECK(plan_hash(back) == plan_hash(plan));

    auto table = run_sweep(plan);
    std::stringstream ss;
    table_to_csv(table, plan, ss);
    CHECK(ss.str().find("plan_hash=" + plan_hash(plan)) != std::string::npos);
    std::optional<SweepPlan> embedded;
    auto parsed = table_from_csv(ss, &embedded);
    REQUIRE(parsed.size() == table.size());
    REQUIRE(embedded.has_value());
    CHECK(plan_hash(*embedded) == plan_hash(plan));
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(parsed[i].quotient == Catch::Approx(table[i].quotient));
        CHECK(parsed[i].p == table[i].p);
    }
}

TEST_CASE("small-axis Knapp ladder reproduces the conjectured one-third slope") {
    // d=2, (p,q)=(2,6): regime (j,theta) = (0,1), so the theta-weight sits on
    // the first axis; sweeping it ties the measured quotient scaling to the
    // conjectured exponent on a nonzero-slope axis.
    SweepPlan plan;
    plan.surface.kind = "paraboloid";
    plan.surface.d = 2;
    plan.base_ell = {1.0, 32.0};
    plan.ladder_axis = 0;
    plan.ladder = {1, 2, 4, 8};
    plan.pq = {{Rat(2), Rat(6)}};
    plan.knapp_j = 0;
    plan.cap_resolution = 40;
    plan.box_resolution_t = 16;
    plan.box_resolution_x = 16;
    auto table = run_sweep(plan);
    auto pe = conjectured_exponents(2, ExponentPair::from_pq(Rat(2), Rat(6)));
    REQUIRE(pe.per_sidelength[0] == Rat(1, 3));
    auto report = fit_exponents(table, pe, 0.05);
    CHECK(report.all_pass);
    CHECK(report.axes[0].slope == Catch::Approx(1.0 / 3.0).margin(0.05));
}
