#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rectext/extension.hpp"
#include "rectext/io.hpp"
#include "rectext/knapp.hpp"

using namespace rectext;

TEST_CASE("surface descriptors round-trip and build") {
    SurfaceDescriptor desc;
    desc.kind = "gbeta";
    desc.beta = {Rat(4), Rat(3)};
    Json j = to_json(desc);
    CHECK(j["beta"][0] == "4/1");
    SurfaceDescriptor back = surface_descriptor_from_json(j);
    Surface s = build_surface(back);
    std::vector<double> xi{1.0, 1.0};
    CHECK(s.value(xi) == Catch::Approx(2.0));

    SurfaceDescriptor para;
    para.kind = "paraboloid";
    para.d = 2;
    para.domain = {1.0, 4.0};
    Surface ps = build_surface(para);
    CHECK(ps.domain()[1] == Catch::Approx(4.0));

    SurfaceDescriptor block;
    block.kind = "block";
    block.beta = {Rat(4), Rat(3)};
    block.k = {2, 2};
    block.sigma = {0, 1};
    CHECK_NOTHROW(build_surface(block));

    SurfaceDescriptor bad;
    bad.kind = "cone";
    CHECK_THROWS_AS(build_surface(bad), Error);
}

TEST_CASE("field samples export as CSV and binary with sidecar") {
    Surface s = make_paraboloid(1, Sidelengths({1.0}));
    auto kn = knapp(1, Sidelengths({1.0}), 0, 32);
    SpaceTimeBox box = kn.dual_box;
    box.resolution = {3, 4};
    auto field = extend(s, kn.cap.gridfn, box);

    std::stringstream csv;
    field_to_csv(field, csv);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x1,re,im");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 12);

    std::string base = "/tmp/rectext_field_test";
    field_to_binary(field, base);
    std::ifstream raw(base + ".bin", std::ios::binary | std::ios::ate);
    REQUIRE(raw.good());
    CHECK(raw.tellg() == static_cast<std::streamoff>(12 * 2 * sizeof(double)));
    std::ifstream meta(base + ".json");
    Json side = Json::parse(meta);
    CHECK(side["dtype"] == "complex128");
    CHECK(side["axes"][0]["count"] == 3);
    std::remove((base + ".bin").c_str());
    std::remove((base + ".json").c_str());
}

TEST_CASE("region JSON serializes rationals as num/den and labels edges") {
    auto bp = make_beta_profile({Rat(4), Rat(4)});
    auto region = region_boundary(bp, 64);
    Json j = region_to_json(bp, region);
    CHECK(j["beta"][0] == "4/1");
    bool vertex_on_boundary = false;
    for (const auto& vx : j["vertices"])
        if (vx["on_boundary"].get<bool>()) {
            vertex_on_boundary = true;
            CHECK(vx["inv_p"] == "1/4");
        }
    CHECK(vertex_on_boundary);
    REQUIRE(!j["edges"].empty());
    CHECK(j["edges"][0].contains("binding_condition"));
    for (const auto& rep : j["line_slopes"])
        if (rep["n"] == 2) CHECK(rep["agree"] == false);
}
