#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rectext/beta.hpp"
#include "rectext/fit.hpp"
#include "rectext/grid.hpp"
#include "rectext/surface.hpp"

namespace rectext {

using Json = nlohmann::json;

// ---- surface descriptors ----------------------------------------------------

struct SurfaceDescriptor {
    std::string kind = "paraboloid";  // paraboloid | gbeta | perturbed | block
    long long d = 1;
    std::vector<Rat> beta;            // gbeta/block
    std::vector<double> cubic;        // perturbed: per-axis cubic coefficients
    std::vector<long long> k;         // block
    std::vector<std::size_t> sigma;   // block
    std::vector<double> domain;       // empty: kind-specific default
};

inline Json to_json(const SurfaceDescriptor& s) {
    Json j;
    j["kind"] = s.kind;
    j["d"] = s.d;
    if (!s.beta.empty()) {
        Json arr = Json::array();
        for (const Rat& b : s.beta) arr.push_back(rat_to_string(b));
        j["beta"] = arr;
    }
    if (!s.cubic.empty()) j["cubic"] = s.cubic;
    if (!s.k.empty()) j["k"] = s.k;
    if (!s.sigma.empty()) j["sigma"] = s.sigma;
    if (!s.domain.empty()) j["domain"] = s.domain;
    return j;
}

inline SurfaceDescriptor surface_descriptor_from_json(const Json& j) {
    SurfaceDescriptor s;
    s.kind = j.value("kind", "paraboloid");
    s.d = j.value("d", 1);
    if (j.contains("beta"))
        for (const auto& b : j["beta"]) s.beta.push_back(rat_from_string(b.get<std::string>()));
    if (j.contains("cubic")) s.cubic = j["cubic"].get<std::vector<double>>();
    if (j.contains("k")) s.k = j["k"].get<std::vector<long long>>();
    if (j.contains("sigma")) s.sigma = j["sigma"].get<std::vector<std::size_t>>();
    if (j.contains("domain")) s.domain = j["domain"].get<std::vector<double>>();
    return s;
}

inline Surface build_surface(const SurfaceDescriptor& s) {
    Sidelengths domain;
    if (!s.domain.empty()) domain = Sidelengths(s.domain);
    if (s.kind == "paraboloid") {
        std::size_t d = s.domain.empty() ? static_cast<std::size_t>(s.d) : domain.dim();
        return make_paraboloid(d, domain);
    }
    if (s.kind == "gbeta") return make_gbeta(s.beta, domain);
    if (s.kind == "perturbed") {
        std::size_t d = s.cubic.size();
        std::vector<AxisSeries> extra(d);
        for (std::size_t i = 0; i < d; ++i)
            extra[i] = {AxisTerm{s.cubic[i], 3.0, true}};
        return make_perturbed_paraboloid(d, extra, domain);
    }
    if (s.kind == "block") {
        auto [surf, ell] = make_block_surface(s.beta, s.k, s.sigma);
        (void)ell;
        return surf;
    }
    throw Error("unknown surface kind: " + s.kind);
}

// ---- field exports ----------------------------------------------------------

inline void field_to_csv(const FieldSamples& u, std::ostream& os) {
    os << "t";
    for (std::size_t i = 0; i < u.box.space_dim(); ++i) os << ",x" << i + 1;
    os << ",re,im\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto p = u.box.cell_center(i);
        for (std::size_t c = 0; c < p.size(); ++c) os << (c ? "," : "") << p[c];
        os << "," << u.values[i].real() << "," << u.values[i].imag() << "\n";
    }
}

/// Row-major binary dump (re, im doubles) plus a JSON sidecar descriptor.
inline void field_to_binary(const FieldSamples& u, const std::string& path_base) {
    std::ofstream raw(path_base + ".bin", std::ios::binary);
    for (const Complex& c : u.values) {
        double re = c.real(), im = c.imag();
        raw.write(reinterpret_cast<const char*>(&re), sizeof(double));
        raw.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    Json side;
    side["dtype"] = "complex128";
    side["order"] = "row-major";
    side["axes"] = Json::array();
    side["axes"].push_back({{"name", "t"},
                            {"halfwidth", u.box.t_halfwidth},
                            {"count", u.box.resolution[0]}});
    for (std::size_t i = 0; i < u.box.space_dim(); ++i)
        side["axes"].push_back({{"name", "x" + std::to_string(i + 1)},
                                {"halfwidth", u.box.x_halfwidths[i]},
                                {"count", u.box.resolution[i + 1]}});
    side["data"] = path_base + ".bin";
    std::ofstream meta(path_base + ".json");
    meta << side.dump(2) << "\n";
}

// ---- region emission ----------------------------------------------------------

inline Json region_to_json(const BetaProfile& bp, const Region& region) {
    Json j;
    Json beta = Json::array();
    for (const Rat& b : bp.beta) beta.push_back(rat_to_string(b));
    j["beta"] = beta;
    j["vertices"] = Json::array();
    for (const auto& vx : region.vertices) {
        j["vertices"].push_back({{"n", vx.n},
                                 {"inv_p", rat_to_string(Rat(1) / vx.p)},
                                 {"inv_q", rat_to_string(Rat(1) / vx.p)},
                                 {"on_boundary", vx.on_boundary}});
    }
    j["edges"] = Json::array();
    const auto& cols = region.columns;
    for (std::size_t i = 0; i + 1 < cols.size(); ++i) {
        if (cols[i].empty || cols[i + 1].empty) continue;
        std::string binding = cols[i].binding == cols[i + 1].binding
                                  ? condition_name(cols[i].binding)
                                  : condition_name(cols[i].binding) + "/" +
                                        condition_name(cols[i + 1].binding);
        j["edges"].push_back(
            {{"from", {{"inv_p", to_double(cols[i].inv_p)}, {"inv_q", to_double(cols[i].inv_q_max)}}},
             {"to",
              {{"inv_p", to_double(cols[i + 1].inv_p)}, {"inv_q", to_double(cols[i + 1].inv_q_max)}}},
             {"binding_condition", binding}});
    }
    j["line_slopes"] = Json::array();
    for (const auto& rep : region.slopes)
        j["line_slopes"].push_back({{"n", rep.n},
                                    {"derived", rat_to_string(rep.derived)},
                                    {"alt_form", rat_to_string(rep.alt_form)},
                                    {"agree", rep.agree}});
    return j;
}

inline void region_to_csv(const Region& region, std::ostream& os) {
    os << "inv_p,inv_q,binding_condition\n";
    os << std::setprecision(17);
    for (const auto& col : region.columns) {
        if (col.empty) continue;
        os << to_double(col.inv_p) << "," << to_double(col.inv_q_max) << ","
           << condition_name(col.binding) << "\n";
    }
}

inline Json fit_report_to_json(const FitReport& report) {
    Json j;
    j["tolerance"] = report.tolerance;
    j["residual"] = report.residual;
    j["all_pass"] = report.all_pass;
    j["axes"] = Json::array();
    for (const auto& ax : report.axes)
        j["axes"].push_back({{"axis", ax.axis},
                             {"slope", ax.slope},
                             {"predicted", ax.predicted},
                             {"pass", ax.pass}});
    return j;
}

}  // namespace rectext
