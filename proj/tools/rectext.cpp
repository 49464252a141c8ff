// Command-line harness: region emission, Knapp sweeps, exponent fits, and the
// individual constructions, all reproducible from JSON configs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "rectext/rectext.hpp"

using namespace rectext;

namespace {

std::vector<Rat> parse_rats(const std::string& csv) {
    std::vector<Rat> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(rat_from_string(cell));
    return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

void emit(const Json& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload.dump(2) << std::endl;
        return;
    }
    std::ofstream os(out_path);
    os << payload.dump(2) << "\n";
    std::cout << "wrote " << out_path << std::endl;
}

// Every artifact embeds its parameters and their hash so rows are re-derivable.
Json with_params(Json params, Json result) {
    Json j;
    std::ostringstream hex;
    hex << std::hex << fnv1a64(params.dump());
    j["params"] = std::move(params);
    j["params_hash"] = hex.str();
    j["result"] = std::move(result);
    return j;
}

// JSON config overlay for a subcommand: values fill in any option the user
// did not pass on the command line (flags override config).
class ConfigOverlay {
  public:
    ConfigOverlay(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
        if (path.empty()) return;
        std::ifstream is(path);
        if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
        cfg_ = Json::parse(is);
        if (cfg_.contains("schema") && cfg_["schema"] != 1)
            throw CLI::ValidationError("--config", "unsupported schema");
    }

    template <typename T>
    void apply(const std::string& flag, const std::string& key, T& target) const {
        if (cfg_.is_null() || !cfg_.contains(key)) return;
        if (cmd_->count("--" + flag) > 0) return;
        target = cfg_[key].get<T>();
    }

  private:
    CLI::App* cmd_;
    Json cfg_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extension operators over rectangles: sweeps, regions, constructions"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "output file (default: stdout)")->capture_default_str();

    bool all_verdicts_pass = true;

    // ---- region ---------------------------------------------------------
    auto* region_cmd = app.add_subcommand("region", "Riesz-diagram boundary for g_beta");
    region_cmd->fallthrough();
    std::string region_beta = "4,4";
    int region_res = 128;
    bool region_csv = false;
    region_cmd->add_option("--beta", region_beta, "profile, e.g. 4,3 or 3/2,4/3");
    region_cmd->add_option("--resolution", region_res, "columns per edge (>= 64)");
    region_cmd->add_flag("--csv", region_csv, "emit the polyline as CSV instead of JSON");
    region_cmd->callback([&] {
        auto bp = make_beta_profile(parse_rats(region_beta));
        auto region = region_boundary(bp, region_res);
        if (region_csv) {
            if (out_path.empty()) {
                region_to_csv(region, std::cout);
            } else {
                std::ofstream os(out_path);
                region_to_csv(region, os);
            }
            return;
        }
        Json params{{"beta", region_beta}, {"resolution", region_res}};
        emit(with_params(params, region_to_json(bp, region)), out_path);
    });

    // ---- sweep ----------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "run a Knapp quotient sweep plan");
    sweep_cmd->fallthrough();
    std::string sweep_config;
    std::uint64_t seed_override = 0;
    CLI::Option* seed_opt =
        sweep_cmd->add_option("--seed", seed_override, "override the plan seed");
    sweep_cmd->add_option("--config", sweep_config, "plan JSON file")->required();
    sweep_cmd->callback([&] {
        std::ifstream is(sweep_config);
        if (!is) throw CLI::ValidationError("--config", "cannot open " + sweep_config);
        SweepPlan plan = sweep_plan_from_json(Json::parse(is));
        if (seed_opt->count() > 0) plan.seed = seed_override;
        auto table = run_sweep(plan);
        for (const auto& row : table)
            if (!row.error_flag.empty()) all_verdicts_pass = false;
        if (out_path.empty()) {
            table_to_csv(table, plan, std::cout);
        } else {
            std::ofstream os(out_path);
            table_to_csv(table, plan, os);
            std::cout << "wrote " << out_path << std::endl;
        }
    });

    // ---- fit ------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "fit log-log slopes of a sweep table");
    fit_cmd->fallthrough();
    std::string fit_table;
    double fit_tol = 0.05;
    fit_cmd->add_option("--table", fit_table, "CSV produced by `sweep`")->required();
    fit_cmd->add_option("--tol", fit_tol, "slope tolerance");
    fit_cmd->callback([&] {
        std::ifstream is(fit_table);
        if (!is) throw CLI::ValidationError("--table", "cannot open " + fit_table);
        std::optional<SweepPlan> plan;
        auto table = table_from_csv(is, &plan);
        if (!plan) throw CLI::ValidationError("--table", "table lacks an embedded plan");
        Json fits = Json::array();
        const long long d = static_cast<long long>(plan->base_ell.size());
        for (const auto& [p, q] : plan->pq) {
            std::vector<SweepRow> group;
            for (const auto& row : table)
                if (row.p == p && row.q == q) group.push_back(row);
            auto predicted = conjectured_exponents(d, ExponentPair::from_pq(p, q));
            auto report = fit_exponents(group, predicted, fit_tol);
            if (!report.all_pass) all_verdicts_pass = false;
            Json entry = fit_report_to_json(report);
            entry["p"] = rat_to_string(p);
            entry["q"] = rat_to_string(q);
            fits.push_back(entry);
        }
        Json params{{"table", fit_table}, {"tol", fit_tol}, {"plan", to_json(*plan)}};
        emit(with_params(params, fits), out_path);
    });

    // ---- knapp ----------------------------------------------------------
    auto* knapp_cmd = app.add_subcommand("knapp", "single Knapp-cap quotient");
    knapp_cmd->fallthrough();
    std::string kn_ell = "1";
    long long kn_j = 0;
    std::string kn_p = "2", kn_q = "6", kn_mode = "strong";
    int kn_res = 64, kn_box_res = 24;
    double kn_box_factor = 4.0;
    std::string kn_field_dump;
    knapp_cmd->add_option("--ell", kn_ell, "sidelengths, e.g. 1,8");
    knapp_cmd->add_option("--j", kn_j, "cap index j");
    knapp_cmd->add_option("--p", kn_p);
    knapp_cmd->add_option("--q", kn_q);
    knapp_cmd->add_option("--mode", kn_mode, "strong | rwt");
    knapp_cmd->add_option("--resolution", kn_res);
    knapp_cmd->add_option("--box-resolution", kn_box_res);
    knapp_cmd->add_option("--box-factor", kn_box_factor);
    knapp_cmd->add_option("--dump-field", kn_field_dump,
                          "write the field samples (CSV + binary beside it)");
    knapp_cmd->callback([&] {
        Sidelengths ell(parse_doubles(kn_ell));
        Surface surf = make_paraboloid(ell.dim());
        auto kn = knapp(ell.dim(), ell, kn_j, kn_res, kn_mode == "rwt");
        SpaceTimeBox box = scaled_box(kn.dual_box, kn_box_factor, kn_box_res, kn_box_res);
        QuotientMode mode = kn_mode == "rwt" ? QuotientMode::restricted_weak : QuotientMode::strong;
        double quot = quotient(surf, kn.cap.gridfn, box,
                               to_double(rat_from_string(kn_p)),
                               to_double(rat_from_string(kn_q)), mode);
        if (!kn_field_dump.empty()) {
            auto field = extend(surf, kn.cap.gridfn, box);
            std::ofstream cs(kn_field_dump + ".csv");
            field_to_csv(field, cs);
            field_to_binary(field, kn_field_dump);
        }
        Json params{{"ell", kn_ell}, {"j", kn_j},       {"p", kn_p},
                    {"q", kn_q},     {"mode", kn_mode}, {"resolution", kn_res},
                    {"box_factor", kn_box_factor}};
        Json result{{"quotient", quot}, {"predicted_peak", kn.predicted_peak}};
        emit(with_params(params, result), out_path);
    });

    // ---- kakeya ---------------------------------------------------------
    auto* kak_cmd = app.add_subcommand("kakeya", "Kakeya/Khintchine field quotient");
    kak_cmd->fallthrough();
    std::string kak_ell = "1,700";
    long long kak_j = 0, kak_N = 8;
    double kak_theta = 1.0;
    std::uint64_t kak_seed = 1;
    std::string kak_p = "4";
    int kak_trials = 8;
    kak_cmd->add_option("--ell", kak_ell);
    kak_cmd->add_option("--j", kak_j);
    kak_cmd->add_option("--theta", kak_theta);
    kak_cmd->add_option("--N", kak_N);
    kak_cmd->add_option("--seed", kak_seed);
    kak_cmd->add_option("--p", kak_p);
    kak_cmd->add_option("--trials", kak_trials);
    kak_cmd->callback([&] {
        Sidelengths ell(parse_doubles(kak_ell));
        Surface surf = make_paraboloid(ell.dim());
        KakeyaOptions opts;
        opts.trial_count = kak_trials;
        RandomField F = kakeya_field(surf, ell, kak_j, kak_theta, kak_N, kak_seed, opts);
        double p = to_double(rat_from_string(kak_p));
        auto quot = kakeya_quotient(F, p, F.q_regime);
        auto ref = kakeya_knapp_reference(F, p, F.q_regime);
        double gain = quot.quotient / ref.quotient;
        if (!(gain > 1.0)) all_verdicts_pass = false;
        Json tubes = Json::array();
        for (std::size_t b = 0; b < F.blocks.size(); ++b)
            for (const auto& tube : F.blocks[b].tubes)
                tubes.push_back({{"block", b},
                                 {"n", tube.n_kappa},
                                 {"t_shift", tube.t_shift},
                                 {"x_shift", tube.x_shift}});
        Json params{{"ell", kak_ell}, {"j", kak_j},       {"theta", kak_theta},
                    {"N", kak_N},     {"seed", kak_seed}, {"p", kak_p},
                    {"trials", kak_trials}};
        Json result{{"q_regime", F.q_regime},
                    {"quotient", quot.quotient},
                    {"knapp_reference", ref.quotient},
                    {"gain", gain},
                    {"max_err_budget", quot.max_err_budget},
                    {"seed", kak_seed},
                    {"tubes", tubes}};
        emit(with_params(params, result), out_path);
    });

    // ---- besicovitch ----------------------------------------------------
    auto* bes_cmd = app.add_subcommand("besicovitch", "Perron-tree translation scheme");
    bes_cmd->fallthrough();
    long long bes_N = 16;
    int bes_raster = 2048;
    bes_cmd->add_option("--N", bes_N, "number of tubes (power of two)");
    bes_cmd->add_option("--raster", bes_raster);
    bes_cmd->callback([&] {
        auto res = besicovitch_translations(bes_N, bes_raster);
        Json shifts = Json::array();
        for (std::size_t m = 0; m < res.shifts.size(); ++m)
            shifts.push_back({{"slope", res.family.slopes[m]},
                              {"t", res.shifts[m].first},
                              {"sigma", res.shifts[m].second}});
        Json params{{"N", bes_N}, {"raster", bes_raster}};
        Json result{{"overlap_ratio", res.overlap_ratio}, {"shifts", shifts}};
        emit(with_params(params, result), out_path);
    });

    // ---- ellipticity ----------------------------------------------------
    auto* ell_cmd = app.add_subcommand("ellipticity", "sampled ellipticity deficit");
    ell_cmd->fallthrough();
    std::string ell_surface = R"({"kind":"gbeta","beta":["4/1","3/1"]})";
    int ell_order = 2, ell_res = 32;
    ell_cmd->add_option("--surface", ell_surface, "surface descriptor JSON");
    ell_cmd->add_option("--order", ell_order, "C^N order");
    ell_cmd->add_option("--resolution", ell_res);
    ell_cmd->callback([&] {
        SurfaceDescriptor desc = surface_descriptor_from_json(Json::parse(ell_surface));
        Surface surf = build_surface(desc);
        auto cert = ellipticity_deficit(surf, ell_order, ell_res);
        Json params{{"surface", Json::parse(ell_surface)},
                    {"order", ell_order},
                    {"resolution", ell_res}};
        Json result{{"deficit", cert.deficit}, {"order", cert.order}, {"grid", cert.grid}};
        emit(with_params(params, result), out_path);
    });

    // ---- dyadic-sum -----------------------------------------------------
    auto* dy_cmd = app.add_subcommand("dyadic-sum", "sum the dyadic block bounds");
    dy_cmd->fallthrough();
    std::string dy_beta = "4,3", dy_p = "8", dy_q = "6", dy_eps = "1/100";
    long long dy_kmax = 200;
    dy_cmd->add_option("--beta", dy_beta);
    dy_cmd->add_option("--p", dy_p);
    dy_cmd->add_option("--q", dy_q);
    dy_cmd->add_option("--eps", dy_eps);
    dy_cmd->add_option("--kmax", dy_kmax);
    dy_cmd->callback([&] {
        auto bp = make_beta_profile(parse_rats(dy_beta));
        ExponentPair pair = ExponentPair::from_pq(rat_from_string(dy_p), rat_from_string(dy_q));
        std::vector<std::size_t> sigma(bp.beta.size());
        for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
        auto res = dyadic_sum(bp, pair, sigma, rat_from_string(dy_eps), dy_kmax);
        auto all = dyadic_sum_all_permutations(bp, pair, rat_from_string(dy_eps), dy_kmax);
        auto cv = condition_check(bp, pair);
        auto verdict_name = [](SumVerdict v) {
            return v == SumVerdict::converged ? "converged"
                                              : v == SumVerdict::diverged ? "diverged"
                                                                          : "inconclusive";
        };
        if (all.truncated_to_identity)
            std::cerr << "warning: d > 4, only the sorted permutation was summed\n";
        Json per_sigma = Json::array();
        for (const auto& entry : all.per_sigma)
            per_sigma.push_back({{"sigma", entry.sigma},
                                 {"verdict", verdict_name(entry.sum.verdict)},
                                 {"total_log2", entry.sum.total_log2}});
        Json params{{"beta", dy_beta}, {"p", dy_p},          {"q", dy_q},
                    {"eps", dy_eps},   {"kmax", dy_kmax}};
        Json result{{"verdict", verdict_name(res.verdict)},
                    {"combined_verdict", verdict_name(all.combined)},
                    {"per_sigma", per_sigma},
                    {"upper_bound_status", "conditional"},
                    {"condition", condition_name(cv.verdict)},
                    {"total_log2", res.total_log2},
                    {"partial_log2", res.partial_log2}};
        emit(with_params(params, result), out_path);
    });

    // ---- train ----------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "dyadic bump train quotient");
    train_cmd->fallthrough();
    std::string tr_beta = "4,4", tr_p = "6", tr_q = "18/5";
    long long tr_M = 401, tr_N = 3;
    int tr_res = 48;
    train_cmd->add_option("--beta", tr_beta);
    train_cmd->add_option("--M", tr_M);
    train_cmd->add_option("--N", tr_N);
    train_cmd->add_option("--p", tr_p);
    train_cmd->add_option("--q", tr_q);
    train_cmd->add_option("--resolution", tr_res);
    train_cmd->callback([&] {
        auto train = schwartz_train(parse_rats(tr_beta), tr_M, tr_N, rat_from_string(tr_p),
                                    tr_res);
        double p = to_double(rat_from_string(tr_p));
        double q = to_double(rat_from_string(tr_q));
        auto tq = train_quotient(train, p, q);
        Json params{{"beta", tr_beta}, {"M", tr_M}, {"N", tr_N},
                    {"p", tr_p},       {"q", tr_q}, {"resolution", tr_res}};
        Json result{{"quotient", tq.quotient},
                    {"lq_lower", tq.lq_lower},
                    {"lp", tq.lp},
                    {"lp_closed_form", train_lp_norm_closed_form(train, p)},
                    {"blocks_disjoint", train_blocks_disjoint(train)}};
        emit(with_params(params, result), out_path);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return all_verdicts_pass ? 0 : 1;
}
