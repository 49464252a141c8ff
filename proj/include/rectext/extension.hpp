#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/grid.hpp"
#include "rectext/surface.hpp"

namespace rectext {

struct SpaceTimePoint {
    double t = 0.0;
    std::vector<double> x;
};

namespace detail {

struct QuadratureNodes {
    std::vector<std::vector<double>> xi;  // nonzero-sample nodes
    std::vector<double> gval;
    std::vector<Complex> weight;          // f(xi) * cell volume
    std::vector<double> max_abs_grad;     // per axis, over all nodes
    std::vector<double> cell_width;       // per axis
};

inline QuadratureNodes prepare_nodes(const SurfaceBase& s, const GridFunction& f) {
    if (f.dim() != s.dim()) throw Error("extend: dimension mismatch");
    if (!f.domain.finite() || !s.domain().finite()) {
        // An infinite surface domain is fine as long as f is bounded.
        if (!f.domain.finite()) throw InfiniteSidelength("extend: density domain must be bounded");
    }
    if (!f.domain.fits_inside(s.domain())) throw Error("extend: density domain escapes the surface domain");
    QuadratureNodes n;
    const double vol = f.cell_volume();
    n.max_abs_grad.assign(f.dim(), 0.0);
    n.cell_width.resize(f.dim());
    for (std::size_t i = 0; i < f.dim(); ++i)
        n.cell_width[i] = 2.0 * f.domain[i] / f.resolution[i];
    for (std::size_t c = 0; c < f.samples.size(); ++c) {
        if (std::abs(f.samples[c]) == 0.0) continue;
        auto xi = f.cell_center(c);
        auto grad = s.gradient(xi);
        for (std::size_t i = 0; i < f.dim(); ++i)
            n.max_abs_grad[i] = std::max(n.max_abs_grad[i], std::abs(grad[i]));
        n.gval.push_back(s.value(xi));
        n.weight.push_back(f.samples[c] * vol);
        n.xi.push_back(std::move(xi));
    }
    return n;
}

// Nyquist-style guard: the phase t g(xi) + x . xi must not swing by more than
// pi across a quadrature cell at the extreme corner of the target set.
inline void check_phase_resolution(const QuadratureNodes& n, double t_max,
                                   const std::vector<double>& x_max) {
    for (std::size_t i = 0; i < n.cell_width.size(); ++i) {
        double swing = n.cell_width[i] * (t_max * n.max_abs_grad[i] + x_max[i]);
        if (swing > std::numbers::pi)
            throw ResolutionTooCoarse("cell phase swing " + std::to_string(swing) +
                                      " rad on axis " + std::to_string(i));
    }
}

inline Complex eval_target(const QuadratureNodes& n, double t, std::span<const double> x) {
    double re = 0.0, im = 0.0;
    const std::size_t d = x.size();
    for (std::size_t c = 0; c < n.gval.size(); ++c) {
        double phase = t * n.gval[c];
        const auto& xi = n.xi[c];
        for (std::size_t i = 0; i < d; ++i) phase += x[i] * xi[i];
        double cs = std::cos(phase), sn = std::sin(phase);
        const Complex& w = n.weight[c];
        re += cs * w.real() - sn * w.imag();
        im += sn * w.real() + cs * w.imag();
    }
    return {re, im};
}

}  // namespace detail

/// Midpoint-rule evaluation of the extension field over a space-time grid.
/// Linear in f; embarrassingly parallel over targets.
inline FieldSamples extend(const SurfaceBase& s, const GridFunction& f, const SpaceTimeBox& box) {
    box.validate();
    if (box.space_dim() != f.dim()) throw Error("extend: box dimension mismatch");
    auto nodes = detail::prepare_nodes(s, f);
    detail::check_phase_resolution(nodes, box.t_halfwidth, box.x_halfwidths);
    FieldSamples out;
    out.box = box;
    out.values.resize(box.size());
    parallel_for(out.values.size(), [&](std::size_t i) {
        auto p = box.cell_center(i);
        out.values[i] = detail::eval_target(nodes, p[0], std::span<const double>(p).subspan(1));
    });
    return out;
}

inline std::vector<Complex> extend_at(const SurfaceBase& s, const GridFunction& f,
                                      const std::vector<SpaceTimePoint>& points) {
    auto nodes = detail::prepare_nodes(s, f);
    double t_max = 0.0;
    std::vector<double> x_max(f.dim(), 0.0);
    for (const auto& p : points) {
        t_max = std::max(t_max, std::abs(p.t));
        for (std::size_t i = 0; i < f.dim(); ++i)
            x_max[i] = std::max(x_max[i], std::abs(p.x[i]));
    }
    detail::check_phase_resolution(nodes, t_max, x_max);
    std::vector<Complex> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        out[i] = detail::eval_target(nodes, points[i].t, points[i].x);
    });
    return out;
}

enum class NormMode { strong, weak };

/// L^q norm of sampled field values: Riemann sum in strong mode, and the
/// weak-type sup_lambda lambda |{|u| >= lambda}|^{1/q} with levels at the
/// sample magnitudes in weak mode (exact for step functions).
inline double lq_norm(const FieldSamples& u, double q, NormMode mode = NormMode::strong) {
    if (!(q >= 1.0)) throw Error("lq_norm: q must be >= 1 (or infinity)");
    const double vol = u.box.cell_volume();
    if (std::isinf(q)) {
        double m = 0.0;
        for (const Complex& c : u.values) m = std::max(m, std::abs(c));
        return m;
    }
    if (mode == NormMode::strong) {
        double acc = 0.0;
        for (const Complex& c : u.values) acc += std::pow(std::abs(c), q);
        return std::pow(acc * vol, 1.0 / q);
    }
    std::vector<double> mags(u.values.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(u.values[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double best = 0.0;
    for (std::size_t r = 0; r < mags.size(); ++r) {
        if (mags[r] == 0.0) break;
        if (r + 1 < mags.size() && mags[r + 1] == mags[r]) continue;  // take the full tie block
        double measure = static_cast<double>(r + 1) * vol;
        best = std::max(best, mags[r] * std::pow(measure, 1.0 / q));
    }
    return best;
}

enum class QuotientMode { strong, restricted_weak };

/// Operator-norm quotient certified from below (up to quadrature error):
/// strong mode is ||E f||_q / ||f||_p; restricted-weak mode pairs E f with
/// the best sub-level receiver, which for the optimal modulus choice equals
/// ||E f||_{q,inf} / |supp f|^{1/p}; an explicit receiver box may be supplied
/// instead.
inline double quotient(const SurfaceBase& s, const GridFunction& f, const SpaceTimeBox& box,
                       double p, double q, QuotientMode mode,
                       const std::optional<Box>& receiver = std::nullopt) {
    FieldSamples u = extend(s, f, box);
    if (mode == QuotientMode::strong) {
        double denom = f.lp_norm(p);
        if (denom == 0.0) throw Error("quotient: zero density");
        return lq_norm(u, q, NormMode::strong) / denom;
    }
    double supp = f.support_measure();
    if (supp == 0.0) throw Error("quotient: zero support");
    if (!receiver.has_value())
        return lq_norm(u, q, NormMode::weak) / std::pow(supp, 1.0 / p);
    // |<E f, g_F>| with the optimal unimodular g_F on F.
    double pairing = 0.0;
    double fmeas = 0.0;
    const double vol = u.box.cell_volume();
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto c = u.box.cell_center(i);
        if (!receiver->contains(c)) continue;
        pairing += std::abs(u.values[i]) * vol;
        fmeas += vol;
    }
    if (fmeas == 0.0) throw Error("quotient: receiver box contains no samples");
    double inv_q_dual = 1.0 - 1.0 / q;
    return pairing / (std::pow(supp, 1.0 / p) * std::pow(fmeas, inv_q_dual));
}

}  // namespace rectext
