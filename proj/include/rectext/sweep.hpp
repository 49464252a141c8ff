#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rectext/extension.hpp"
#include "rectext/fit.hpp"
#include "rectext/io.hpp"
#include "rectext/knapp.hpp"

namespace rectext {

/// A reproducible sweep: one surface, a Knapp-cap family, a geometric ladder
/// on one axis, and a list of exponent pairs.  Serialized as JSON with a
/// versioned schema; every emitted artifact embeds the plan and its hash.
struct SweepPlan {
    int schema = 1;
    SurfaceDescriptor surface;
    std::string test_function = "knapp";
    long long knapp_j = 0;
    std::vector<double> base_ell;
    long long ladder_axis = 0;
    std::vector<double> ladder;           // values for the varied axis
    std::vector<std::pair<Rat, Rat>> pq;  // (p, q)
    std::string mode = "strong";          // strong | rwt
    double box_factor = 4.0;
    int cap_resolution = 48;
    int box_resolution_t = 24;
    int box_resolution_x = 24;
    std::uint64_t seed = 0;
    double tolerance = 0.05;
};

inline Json to_json(const SweepPlan& plan) {
    Json j;
    j["schema"] = plan.schema;
    j["surface"] = to_json(plan.surface);
    j["test_function"] = plan.test_function;
    j["knapp_j"] = plan.knapp_j;
    j["base_ell"] = plan.base_ell;
    j["ladder_axis"] = plan.ladder_axis;
    j["ladder"] = plan.ladder;
    Json pqs = Json::array();
    for (const auto& [p, q] : plan.pq)
        pqs.push_back({rat_to_string(p), rat_to_string(q)});
    j["pq"] = pqs;
    j["mode"] = plan.mode;
    j["box_factor"] = plan.box_factor;
    j["cap_resolution"] = plan.cap_resolution;
    j["box_resolution_t"] = plan.box_resolution_t;
    j["box_resolution_x"] = plan.box_resolution_x;
    j["seed"] = plan.seed;
    j["tolerance"] = plan.tolerance;
    return j;
}

inline SweepPlan sweep_plan_from_json(const Json& j) {
    SweepPlan plan;
    plan.schema = j.value("schema", 1);
    if (plan.schema != 1) throw Error("unsupported plan schema");
    if (j.contains("surface")) plan.surface = surface_descriptor_from_json(j["surface"]);
    plan.test_function = j.value("test_function", "knapp");
    plan.knapp_j = j.value("knapp_j", 0);
    plan.base_ell = j.value("base_ell", std::vector<double>{1.0});
    plan.ladder_axis = j.value("ladder_axis", 0);
    plan.ladder = j.value("ladder", std::vector<double>{});
    if (j.contains("pq"))
        for (const auto& pr : j["pq"])
            plan.pq.emplace_back(rat_from_string(pr[0].get<std::string>()),
                                 rat_from_string(pr[1].get<std::string>()));
    plan.mode = j.value("mode", "strong");
    plan.box_factor = j.value("box_factor", 4.0);
    plan.cap_resolution = j.value("cap_resolution", 48);
    plan.box_resolution_t = j.value("box_resolution_t", 24);
    plan.box_resolution_x = j.value("box_resolution_x", 24);
    plan.seed = j.value("seed", 0ull);
    plan.tolerance = j.value("tolerance", 0.05);
    return plan;
}

inline std::string plan_hash(const SweepPlan& plan) {
    std::ostringstream hex;
    hex << std::hex << fnv1a64(to_json(plan).dump());
    return hex.str();
}

/// Runs every (ladder value, exponent pair) cell of the plan.  Rows are
/// dispatched to the worker pool and merged by index; a failing row records
/// its error and never aborts the sweep.
inline std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
    if (plan.ladder.empty()) throw Error("run_sweep: empty ladder");
    if (plan.pq.empty()) throw Error("run_sweep: no exponent pairs");
    if (plan.test_function != "knapp")
        throw Error("run_sweep: unknown test function " + plan.test_function);
    if (plan.ladder_axis < 0 ||
        static_cast<std::size_t>(plan.ladder_axis) >= plan.base_ell.size())
        throw Error("run_sweep: ladder axis out of range");

    const std::size_t rows = plan.ladder.size() * plan.pq.size();
    std::vector<SweepRow> table(rows);
    parallel_for(rows, [&](std::size_t idx) {
        const std::size_t li = idx % plan.ladder.size();
        const std::size_t pi = idx / plan.ladder.size();
        SweepRow& row = table[idx];
        row.p = plan.pq[pi].first;
        row.q = plan.pq[pi].second;
        row.mode = plan.mode;
        row.ell = plan.base_ell;
        row.ell[static_cast<std::size_t>(plan.ladder_axis)] = plan.ladder[li];
        try {
            Sidelengths ell(row.ell);
            SurfaceDescriptor desc = plan.surface;
            if (desc.domain.empty() && desc.kind != "paraboloid")
                desc.domain = row.ell;
            if (desc.kind == "paraboloid")
                desc.d = static_cast<long long>(ell.dim());
            Surface surf = build_surface(desc);
            if (!ell.fits_inside(surf.domain()))
                throw Error("sidelengths escape the surface domain");
            auto kn = knapp(ell.dim(), ell, plan.knapp_j, plan.cap_resolution,
                            plan.mode == "rwt");
            SpaceTimeBox box = scaled_box(kn.dual_box, plan.box_factor,
                                          plan.box_resolution_t, plan.box_resolution_x);
            QuotientMode mode =
                plan.mode == "rwt" ? QuotientMode::restricted_weak : QuotientMode::strong;
            row.quotient = quotient(surf, kn.cap.gridfn, box, to_double(row.p),
                                    to_double(row.q), mode);
        } catch (const std::exception& e) {
            row.error_flag = e.what();
        }
    });
    return table;
}

// ---- CSV I/O: columns are frozen as (ell..., p, q, mode, quotient, error_flag).

inline void table_to_csv(const std::vector<SweepRow>& table, const SweepPlan& plan,
                         std::ostream& os) {
    os << "# schema=" << plan.schema << "\n";
    os << "# plan_hash=" << plan_hash(plan) << "\n";
    os << "# plan=" << to_json(plan).dump() << "\n";
    const std::size_t d = table.empty() ? 0 : table.front().ell.size();
    for (std::size_t i = 0; i < d; ++i) os << "ell_" << i << ",";
    os << "p,q,mode,quotient,error_flag\n";
    os << std::setprecision(17);
    for (const auto& row : table) {
        for (double l : row.ell) os << l << ",";
        os << rat_to_string(row.p) << "," << rat_to_string(row.q) << "," << row.mode << ","
           << row.quotient << "," << row.error_flag << "\n";
    }
}

inline std::vector<SweepRow> table_from_csv(std::istream& is,
                                            std::optional<SweepPlan>* plan_out = nullptr) {
    std::vector<SweepRow> table;
    std::string line;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string key = "# plan=";
            if (plan_out && line.rfind(key, 0) == 0)
                *plan_out = sweep_plan_from_json(Json::parse(line.substr(key.size())));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            continue;
        }
        if (cells.size() + 1 == header.size()) cells.push_back("");  // empty error flag
        if (cells.size() != header.size()) throw Error("malformed table row: " + line);
        SweepRow row;
        std::size_t d = header.size() - 5;
        for (std::size_t i = 0; i < d; ++i) row.ell.push_back(std::stod(cells[i]));
        row.p = rat_from_string(cells[d]);
        row.q = rat_from_string(cells[d + 1]);
        row.mode = cells[d + 2];
        row.quotient = std::stod(cells[d + 3]);
        row.error_flag = cells[d + 4];
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace rectext
