#pragma once

#include <cmath>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/extension.hpp"
#include "rectext/grid.hpp"
#include "rectext/rational.hpp"
#include "rectext/surface.hpp"

namespace rectext {

/// One car of the train: a modulated bump on the nested dyadic block
/// R^{k_m} = { xi_i ~ 2^{-2 k_i} }, k_i = M m / beta_i.  All scale factors are
/// powers of two kept as exact exponents; the block scales are far below any
/// representable double for realistic M, so nothing here materializes them.
struct TrainBlock {
    long long m = 1;
    std::vector<Rat> k;
    Rat log2_coeff;          // + 2 M m J_d / p
    Rat log2_measure;        // -2 M m J_d  (measure of R^{k_m})
    double log2_xshift = 0;  // separation of the dual rectangle along x_1
};

struct SchwartzTrain {
    std::vector<Rat> beta;
    long long M = 0;
    long long N = 0;
    Rat inv_p;
    Rat Jd;
    std::vector<TrainBlock> blocks;
    // Every block is the same picture at unit scale: a bump on [1,2]^d under
    // g_beta, by the exact anisotropic rescaling of the dyadic blocks.
    Surface unit_surface;
    GridFunction unit_bump;

    SchwartzTrain() : unit_surface(make_paraboloid(1)) {}
};

namespace detail {

inline double unit_block_bump(std::span<const double> eta) {
    double v = 1.0;
    for (double e : eta) {
        double u = 2.0 * (e - 1.5);
        if (std::abs(u) >= 1.0) return 0.0;
        double w = 1.0 - u * u;
        v *= w * w * w * w;
    }
    return v;
}

inline double log2_sum_exp(const std::vector<double>& log2_terms) {
    double m = -1e300;
    for (double t : log2_terms) m = std::max(m, t);
    if (m == -1e300) return m;
    double acc = 0.0;
    for (double t : log2_terms) acc += std::exp2(t - m);
    return m + std::log2(acc);
}

}  // namespace detail

/// Builds the train of modulated bumps on nested dyadic blocks with dual
/// rectangles separated by a factor 10 along x_1.  The L^p coefficients make
/// each block contribute unit L^p mass.
inline SchwartzTrain schwartz_train(const std::vector<Rat>& beta, long long M, long long N,
                                    const Rat& p, int resolution = 32) {
    if (beta.empty()) throw InvalidBeta("empty profile");
    Rat max_beta(0);
    for (const Rat& b : beta) {
        if (b <= Rat(1)) throw InvalidBeta("all beta entries must exceed 1");
        max_beta = std::max(max_beta, b);
    }
    if (Rat(M) <= Rat(100) * max_beta) throw Error("train: M must exceed 100 max beta");
    if (N < 1) throw Error("train: N must be >= 1");
    if (p < Rat(1)) throw Error("train: p must be >= 1");
    if (resolution < 8) throw GridTooCoarse("train bump needs >= 8 cells per axis");

    SchwartzTrain out;
    out.beta = beta;
    out.M = M;
    out.N = N;
    out.inv_p = Rat(1) / p;
    Rat Jd(0);
    for (const Rat& b : beta) Jd += Rat(1) / b;
    out.Jd = Jd;

    const std::size_t d = beta.size();
    for (long long m = 1; m <= N; ++m) {
        TrainBlock blk;
        blk.m = m;
        blk.k.resize(d);
        for (std::size_t i = 0; i < d; ++i) blk.k[i] = Rat(M * m) / beta[i];
        blk.log2_measure = Rat(-2 * M * m) * Jd;
        blk.log2_coeff = Rat(2 * M * m) * Jd * out.inv_p;
        // Dual rectangles have x_1 extent 2^{2 M m / beta_1}; place block m at
        // 10 m times the largest of them so they are disjoint by a wide margin.
        blk.log2_xshift = to_double(Rat(2 * M * N) / beta[0]) + std::log2(10.0 * m);
        out.blocks.push_back(std::move(blk));
    }

    out.unit_surface = make_gbeta(beta, Sidelengths(std::vector<double>(d, 2.0)));
    out.unit_bump = GridFunction::from_function(
        Sidelengths(std::vector<double>(d, 2.0)), std::vector<int>(d, resolution),
        [](std::span<const double> eta) { return Complex(detail::unit_block_bump(eta), 0.0); });
    return out;
}

/// Supports really are pairwise disjoint dyadic shells (exact arithmetic).
inline bool train_blocks_disjoint(const SchwartzTrain& train) {
    for (std::size_t a = 0; a + 1 < train.blocks.size(); ++a) {
        for (std::size_t i = 0; i < train.beta.size(); ++i) {
            // block a: xi_i <= 2^{-2k_i(a)+1}; block a+1: xi_i >= ... larger k
            Rat hi_next = Rat(-2) * train.blocks[a + 1].k[i] + Rat(1);
            Rat lo_this = Rat(-2) * train.blocks[a].k[i];
            if (!(hi_next <= lo_this)) return false;
        }
    }
    return true;
}

/// ||f||_p via per-block quadrature (exact power-of-two bookkeeping, bump
/// integral from the unit grid).
inline double train_lp_norm(const SchwartzTrain& train, double p) {
    double c_p_log2;
    {
        double acc = 0.0;
        for (const Complex& c : train.unit_bump.samples) acc += std::pow(std::abs(c), p);
        acc *= train.unit_bump.cell_volume();
        c_p_log2 = std::log2(acc);
    }
    std::vector<double> terms;
    for (const auto& blk : train.blocks) {
        // integral of |coeff phi_m|^p = 2^{p coeff + measure} * c_p
        terms.push_back(p * to_double(blk.log2_coeff) + to_double(blk.log2_measure) + c_p_log2);
    }
    return std::exp2(detail::log2_sum_exp(terms) / p);
}

/// Closed form N^{1/p} (bump constant), the constant taken from a reference
/// resolution. Used as the oracle against train_lp_norm.
inline double train_lp_norm_closed_form(const SchwartzTrain& train, double p,
                                        int oracle_resolution = 96) {
    const std::size_t d = train.beta.size();
    GridFunction fine = GridFunction::from_function(
        Sidelengths(std::vector<double>(d, 2.0)), std::vector<int>(d, oracle_resolution),
        [](std::span<const double> eta) { return Complex(detail::unit_block_bump(eta), 0.0); });
    double acc = 0.0;
    for (const Complex& c : fine.samples) acc += std::pow(std::abs(c), p);
    acc *= fine.cell_volume();
    return std::pow(static_cast<double>(train.N), 1.0 / p) * std::pow(acc, 1.0 / p);
}

struct TrainQuotient {
    double lq_lower = 0.0;   // certified lower bound on ||E f||_q
    double lp = 0.0;         // ||f||_p
    double quotient = 0.0;
    double unit_mass_q = 0.0;  // window integral of |E phi|^q at unit scale
};

/// Certified lower bound for ||E_beta f||_q / ||f||_p.  Each block's field is
/// the exact anisotropic rescaling of the unit-scale field, and the dual
/// windows are separated so far (powers of two recorded in log2_xshift) that
/// cross terms vanish below double precision; the window integral is computed
/// once at unit scale and recombined with exact exponents.
inline TrainQuotient train_quotient(const SchwartzTrain& train, double p, double q,
                                    int window_res = 16) {
    const std::size_t d = train.beta.size();
    // Window where the unit-scale phase stays below 1 radian.
    double gmax = 0.0;
    {
        std::vector<double> corner(d, 2.0);
        gmax = train.unit_surface.value(corner);
    }
    SpaceTimeBox window;
    window.t_halfwidth = 0.5 / gmax;
    window.x_halfwidths.assign(d, 0.25 / static_cast<double>(d));
    window.resolution.assign(d + 1, window_res);
    FieldSamples unit = extend(train.unit_surface, train.unit_bump, window);
    double mass_q = 0.0;
    for (const Complex& c : unit.values) mass_q += std::pow(std::abs(c), q);
    mass_q *= window.cell_volume();

    const double Jd = to_double(train.Jd);
    std::vector<double> terms;
    for (const auto& blk : train.blocks) {
        double Mm = static_cast<double>(2 * train.M * blk.m);
        // coeff^q * |R|^q * dual-volume scaling * unit mass
        double w = q * to_double(blk.log2_coeff) + q * to_double(blk.log2_measure) +
                   Mm * (1.0 + Jd);
        terms.push_back(w + std::log2(mass_q));
    }
    TrainQuotient out;
    out.unit_mass_q = mass_q;
    out.lq_lower = std::exp2(detail::log2_sum_exp(terms) / q);
    out.lp = train_lp_norm(train, p);
    out.quotient = out.lq_lower / out.lp;
    return out;
}

}  // namespace rectext
