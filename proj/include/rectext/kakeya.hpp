#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "rectext/besicovitch.hpp"
#include "rectext/common.hpp"
#include "rectext/grid.hpp"
#include "rectext/surface.hpp"

namespace rectext {

struct KakeyaOptions {
    int trial_count = 8;        // Khintchine sign draws; the best is kept
    double c = 0.125;           // tube constant
    int nodes_per_axis = 6;     // quadrature nodes per kappa axis
    int targets_t = 16;         // target grid over the sheared tube frame
    int targets_s = 32;
    int targets_y = 6;
    double far_tol = 5e-3;      // relative bound below which a tube is budgeted
    double spacing_factor = 100.0;
    int grid_cells_per_kappa = 6;  // for the materialized density grid
    bool zero_all_shifts = false;  // degenerate configuration (tests)
};

struct KakeyaTube {
    std::vector<double> xi_kappa;
    int n_kappa = 0;
    double t_shift = 0.0;          // t_kappa
    std::vector<double> x_shift;   // x_kappa
    Box kappa;
};

struct KakeyaBlock {
    std::vector<double> xi_R;
    double t_R = 0.0;
    std::vector<double> x_R;
    std::vector<KakeyaTube> tubes;
};

namespace detail {
struct KakeyaEvaluation;
}

/// The Kakeya/Khintchine test field: sign-weighted modulated indicators of
/// the cells kappa, with tube translations from the Perron scheme mapped
/// through each block frame, and widely spaced block translations.
struct RandomField {
    Surface surface;     // after the internal parabolic rescale
    Sidelengths ell;     // rescaled sidelengths (l_{j+1} = 1/N)
    double lambda = 1.0;
    long long j = 0;
    double theta = 1.0;
    long long N = 1;
    double q_regime = 4.0;  // 2(d-j-theta+1)/(d-j-theta)
    std::uint64_t seed = 0;
    double c = 0.125;
    std::vector<KakeyaBlock> blocks;
    std::vector<int> signs;  // flattened block-major, +-1
    GridFunction gridfn;
    KakeyaOptions options;
    std::shared_ptr<const detail::KakeyaEvaluation> cache;

    RandomField() : surface(make_paraboloid(2)), ell(Sidelengths::ones(2)) {}

    double kappa_measure() const {
        if (blocks.empty() || blocks.front().tubes.empty()) return 0.0;
        const Box& k = blocks.front().tubes.front().kappa;
        double v = 1.0;
        for (std::size_t i = 0; i < k.dim(); ++i) v *= k.hi[i] - k.lo[i];
        return v;
    }

    double support_measure() const {
        double tubes = 0.0;
        for (const auto& b : blocks) tubes += static_cast<double>(b.tubes.size());
        return tubes * kappa_measure();
    }
};

struct WeakQuotient {
    double weak_norm = 0.0;
    double quotient = 0.0;
    double max_err_budget = 0.0;
};

namespace detail {

struct BlockFrame {
    double t_hw = 0.0;
    double s_lo = 0.0, s_hi = 0.0;
    std::vector<double> y_hw;  // d-1 entries
    std::vector<double> grad_R;
    std::vector<double> hess_col_d;
    double det = 1.0;  // |d_d^2 g(xi_R)|
    double t_min = 0.0, t_max = 0.0;
    std::vector<double> x_min, x_max;
};

inline void frame_to_x(const BlockFrame& f, double t, double s, std::span<const double> y,
                       std::vector<double>& x) {
    const std::size_t d = f.grad_R.size();
    x.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        x[i] = -t * f.grad_R[i] - s * f.hess_col_d[i];
        if (i + 1 < d) x[i] += y[i];
    }
}

inline BlockFrame make_frame(const Surface& s, long long j, long long N, double c,
                             const Sidelengths& ell, const KakeyaBlock& blk) {
    const std::size_t d = s.dim();
    BlockFrame f;
    f.grad_R = s.gradient(blk.xi_R);
    auto H = s.hessian(blk.xi_R);
    f.hess_col_d.resize(d);
    for (std::size_t i = 0; i < d; ++i) f.hess_col_d[i] = H[i][d - 1];
    f.det = std::abs(f.hess_col_d[d - 1]);
    const double Nf = static_cast<double>(N);
    f.t_hw = c * Nf * Nf;
    f.s_lo = 1e300;
    f.s_hi = -1e300;
    for (const auto& tube : blk.tubes) {
        double s_shift = 0.0;
        if (f.hess_col_d[d - 1] != 0.0)
            s_shift = -tube.x_shift[d - 1] / f.hess_col_d[d - 1];
        double slope = static_cast<double>(tube.n_kappa) / Nf;
        for (double t : {-f.t_hw, f.t_hw}) {
            f.s_lo = std::min(f.s_lo, t * slope + s_shift - c * Nf);
            f.s_hi = std::max(f.s_hi, t * slope + s_shift + c * Nf);
        }
    }
    f.y_hw.resize(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        double L = i < static_cast<std::size_t>(j) ? 1.0 / ell[i] : Nf;
        f.y_hw[i] = c * L;
    }
    f.t_min = -f.t_hw;
    f.t_max = f.t_hw;
    f.x_min.assign(d, 1e300);
    f.x_max.assign(d, -1e300);
    std::vector<double> y(d - 1);
    std::vector<double> x;
    const std::size_t corners = std::size_t{1} << (2 + (d - 1));
    for (std::size_t corner = 0; corner < corners; ++corner) {
        double t = (corner & 1) ? f.t_hw : -f.t_hw;
        double sv = (corner & 2) ? f.s_hi : f.s_lo;
        for (std::size_t i = 0; i + 1 < d; ++i)
            y[i] = (corner & (std::size_t{4} << i)) ? f.y_hw[i] : -f.y_hw[i];
        frame_to_x(f, t, sv, y, x);
        for (std::size_t i = 0; i < d; ++i) {
            f.x_min[i] = std::min(f.x_min[i], x[i]);
            f.x_max[i] = std::max(f.x_max[i], x[i]);
        }
    }
    return f;
}

struct TubeDerivRanges {
    std::vector<double> glo, ghi;  // range of d_i g over kappa
    std::vector<double> curv_min;  // min |d_i^2 g| over kappa
};

inline TubeDerivRanges tube_ranges(const Surface& s, const KakeyaTube& tube) {
    const std::size_t d = s.dim();
    TubeDerivRanges r;
    r.glo.resize(d);
    r.ghi.resize(d);
    r.curv_min.resize(d);
    MultiIndex alpha(d, 0);
    std::vector<double> pt = tube.xi_kappa;
    for (std::size_t i = 0; i < d; ++i) {
        alpha[i] = 1;
        pt[i] = tube.kappa.lo[i];
        double a = s.partial(alpha, pt);
        pt[i] = tube.kappa.hi[i];
        double b = s.partial(alpha, pt);
        r.glo[i] = std::min(a, b);
        r.ghi[i] = std::max(a, b);
        alpha[i] = 2;
        pt[i] = tube.kappa.lo[i];
        double c1 = std::abs(s.partial(alpha, pt));
        pt[i] = tube.kappa.hi[i];
        double c2 = std::abs(s.partial(alpha, pt));
        r.curv_min[i] = std::min(c1, c2);
        alpha[i] = 0;
        pt[i] = tube.xi_kappa[i];
    }
    return r;
}

// Certified bound on |int_kappa e^{i phi}| over a whole block window via
// per-axis first/second derivative tests with interval arithmetic in
// (Delta t, Delta x).  The separable phase factorizes across axes.
inline double far_tube_bound(const TubeDerivRanges& ranges, const Box& kappa, double dt_lo,
                             double dt_hi, const std::vector<double>& dx_lo,
                             const std::vector<double>& dx_hi) {
    double bound = 1.0;
    for (std::size_t i = 0; i < kappa.dim(); ++i) {
        double w = kappa.hi[i] - kappa.lo[i];
        double axis = w;
        double lo = 1e300, hi = -1e300;
        for (double dt : {dt_lo, dt_hi}) {
            for (double gg : {ranges.glo[i], ranges.ghi[i]}) {
                for (double dx : {dx_lo[i], dx_hi[i]}) {
                    double v = dt * gg + dx;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        double lambda1 = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
        if (lambda1 > 0.0) axis = std::min(axis, 4.0 / lambda1);
        double dt_min_abs = dt_lo > 0.0 ? dt_lo : (dt_hi < 0.0 ? -dt_hi : 0.0);
        double lambda2 = dt_min_abs * ranges.curv_min[i];
        if (lambda2 > 0.0) axis = std::min(axis, 8.0 / std::sqrt(lambda2));
        bound *= axis;
    }
    return bound;
}

struct TubeQuadrature {
    std::vector<std::vector<double>> xi;
    std::vector<double> gval;
    double weight = 0.0;
};

inline TubeQuadrature tube_quadrature(const Surface& s, const KakeyaTube& tube, int nodes) {
    TubeQuadrature q;
    const std::size_t d = tube.kappa.dim();
    std::vector<std::size_t> idx(d, 0);
    q.weight = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        q.weight *= (tube.kappa.hi[i] - tube.kappa.lo[i]) / nodes;
    bool done = false;
    std::vector<double> x(d);
    while (!done) {
        for (std::size_t i = 0; i < d; ++i) {
            double t = (2.0 * idx[i] + 1.0) / (2.0 * nodes);
            x[i] = tube.kappa.lo[i] + t * (tube.kappa.hi[i] - tube.kappa.lo[i]);
        }
        q.xi.push_back(x);
        q.gval.push_back(s.value(x));
        done = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (++idx[i] < static_cast<std::size_t>(nodes)) {
                done = false;
                break;
            }
            idx[i] = 0;
        }
    }
    return q;
}

inline Complex tube_field_at(const TubeQuadrature& q, double rel_t, std::span<const double> rel_x) {
    double re = 0.0, im = 0.0;
    for (std::size_t c = 0; c < q.gval.size(); ++c) {
        double phase = rel_t * q.gval[c];
        const auto& xi = q.xi[c];
        for (std::size_t i = 0; i < rel_x.size(); ++i) phase += rel_x[i] * xi[i];
        re += std::cos(phase);
        im += std::sin(phase);
    }
    return Complex(re * q.weight, im * q.weight);
}

struct KakeyaEvaluation {
    std::size_t samples_per_block = 0;
    std::vector<double> cell_volume;                    // per block
    std::vector<double> budget;                         // per block
    std::vector<std::vector<std::uint32_t>> near_tubes; // per block, global tube ids
    // contribs[b][sample * near_count + k]
    std::vector<std::vector<Complex>> contribs;
};

inline KakeyaEvaluation evaluate_tubes(const RandomField& F) {
    const Surface& s = F.surface;
    const std::size_t d = s.dim();
    const KakeyaOptions& o = F.options;
    KakeyaEvaluation ev;

    struct GlobalTube {
        double T = 0.0;
        std::vector<double> X;
        const KakeyaTube* tube = nullptr;
        TubeDerivRanges ranges;
        TubeQuadrature quad;
    };
    std::vector<GlobalTube> tubes;
    for (const auto& blk : F.blocks) {
        for (const auto& tube : blk.tubes) {
            GlobalTube g;
            g.tube = &tube;
            g.T = blk.t_R + tube.t_shift;
            g.X.resize(d);
            for (std::size_t i = 0; i < d; ++i) g.X[i] = blk.x_R[i] + tube.x_shift[i];
            g.ranges = tube_ranges(s, tube);
            g.quad = tube_quadrature(s, tube, o.nodes_per_axis);
            tubes.push_back(std::move(g));
        }
    }
    const double kappa_vol = F.kappa_measure();

    const std::size_t B = F.blocks.size();
    std::size_t y_cells = 1;
    for (std::size_t i = 0; i + 1 < d; ++i) y_cells *= static_cast<std::size_t>(o.targets_y);
    ev.samples_per_block = static_cast<std::size_t>(o.targets_t) *
                           static_cast<std::size_t>(o.targets_s) * y_cells;
    ev.cell_volume.assign(B, 0.0);
    ev.budget.assign(B, 0.0);
    ev.near_tubes.assign(B, {});
    ev.contribs.assign(B, {});

    parallel_for(B, [&](std::size_t b) {
        const KakeyaBlock& blk = F.blocks[b];
        BlockFrame f = make_frame(s, F.j, F.N, F.c, F.ell, blk);
        ev.cell_volume[b] = f.det * (2.0 * f.t_hw / o.targets_t) *
                            ((f.s_hi - f.s_lo) / o.targets_s);
        for (std::size_t i = 0; i + 1 < d; ++i)
            ev.cell_volume[b] *= 2.0 * f.y_hw[i] / o.targets_y;

        // Classify globally: far tubes go to the budget, near ones are
        // integrated per target.
        std::vector<double> dx_lo(d), dx_hi(d);
        for (std::size_t g = 0; g < tubes.size(); ++g) {
            double dt_lo = f.t_min + blk.t_R - tubes[g].T;
            double dt_hi = f.t_max + blk.t_R - tubes[g].T;
            for (std::size_t i = 0; i < d; ++i) {
                dx_lo[i] = f.x_min[i] + blk.x_R[i] - tubes[g].X[i];
                dx_hi[i] = f.x_max[i] + blk.x_R[i] - tubes[g].X[i];
            }
            double bound = far_tube_bound(tubes[g].ranges, tubes[g].tube->kappa, dt_lo, dt_hi,
                                          dx_lo, dx_hi);
            if (bound < o.far_tol * kappa_vol) {
                ev.budget[b] += bound;
            } else {
                ev.near_tubes[b].push_back(static_cast<std::uint32_t>(g));
            }
        }

        const std::size_t near = ev.near_tubes[b].size();
        ev.contribs[b].resize(ev.samples_per_block * near);
        std::vector<double> y(d - 1), x, xabs(d);
        std::size_t sample = 0;
        for (int it = 0; it < o.targets_t; ++it) {
            double t = -f.t_hw + (2.0 * it + 1.0) * f.t_hw / o.targets_t;
            for (int is = 0; is < o.targets_s; ++is) {
                double sv = f.s_lo + (is + 0.5) * (f.s_hi - f.s_lo) / o.targets_s;
                std::vector<int> yi(d - 1, 0);
                bool ydone = false;
                while (!ydone) {
                    for (std::size_t i = 0; i + 1 < d; ++i)
                        y[i] = -f.y_hw[i] + (2.0 * yi[i] + 1.0) * f.y_hw[i] / o.targets_y;
                    frame_to_x(f, t, sv, y, x);
                    double tabs = t + blk.t_R;
                    for (std::size_t i = 0; i < d; ++i) xabs[i] = x[i] + blk.x_R[i];
                    std::vector<double> rel(d);
                    for (std::size_t k = 0; k < near; ++k) {
                        const GlobalTube& g = tubes[ev.near_tubes[b][k]];
                        double rel_t = tabs - g.T;
                        for (std::size_t i = 0; i < d; ++i) {
                            rel[i] = xabs[i] - g.X[i];
                            // Honest integration needs the phase resolved per
                            // quadrature cell; phi_i' spans rel_t d_i g + rel_x_i.
                            double m = std::max(std::abs(rel_t * g.ranges.glo[i] + rel[i]),
                                                std::abs(rel_t * g.ranges.ghi[i] + rel[i]));
                            double w = (g.tube->kappa.hi[i] - g.tube->kappa.lo[i]) /
                                       o.nodes_per_axis;
                            if (m * w > std::numbers::pi)
                                throw ResolutionTooCoarse("kakeya near-tube cell swing " +
                                                          std::to_string(m * w));
                        }
                        ev.contribs[b][sample * near + k] = tube_field_at(g.quad, rel_t, rel);
                    }
                    ++sample;
                    ydone = true;
                    for (std::size_t i = 0; i + 1 < d; ++i) {
                        if (++yi[i] < o.targets_y) {
                            ydone = false;
                            break;
                        }
                        yi[i] = 0;
                    }
                    if (d == 1) ydone = true;
                }
            }
        }
    });
    return ev;
}

inline WeakQuotient weak_quotient_for_signs(const RandomField& F, const KakeyaEvaluation& ev,
                                            const std::vector<int>& signs, double p, double q) {
    std::vector<std::pair<double, double>> vals;  // (certified |E F|, cell volume)
    vals.reserve(F.blocks.size() * ev.samples_per_block);
    double max_budget = 0.0;
    for (std::size_t b = 0; b < F.blocks.size(); ++b) {
        const std::size_t near = ev.near_tubes[b].size();
        max_budget = std::max(max_budget, ev.budget[b]);
        for (std::size_t smp = 0; smp < ev.samples_per_block; ++smp) {
            Complex acc(0.0, 0.0);
            for (std::size_t k = 0; k < near; ++k) {
                int w = signs[ev.near_tubes[b][k]];
                const Complex& c = ev.contribs[b][smp * near + k];
                acc += w > 0 ? c : -c;
            }
            double v = std::abs(acc) - ev.budget[b];
            if (v > 0.0) vals.emplace_back(v, ev.cell_volume[b]);
        }
    }
    WeakQuotient out;
    out.max_err_budget = max_budget;
    if (vals.empty()) return out;
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double cum = 0.0;
    for (std::size_t r = 0; r < vals.size(); ++r) {
        cum += vals[r].second;
        if (r + 1 < vals.size() && vals[r + 1].first == vals[r].first) continue;
        out.weak_norm = std::max(out.weak_norm, vals[r].first * std::pow(cum, 1.0 / q));
    }
    out.quotient = out.weak_norm / std::pow(F.support_measure(), 1.0 / p);
    return out;
}

}  // namespace detail

/// Assembles the random field on the internally rescaled problem
/// (l_{j+1} = 1/N), keeping the best of trial_count sign draws as measured by
/// the weak-L^q norm at the construction's own q = 2(d-j-theta+1)/(d-j-theta).
inline RandomField kakeya_field(const Surface& s, const Sidelengths& ell, long long j,
                                double theta, long long N, std::uint64_t seed,
                                const KakeyaOptions& opts = {}) {
    const std::size_t d = ell.dim();
    if (d < 2) throw Error("kakeya_field needs d >= 2");
    if (s.dim() != d) throw Error("kakeya_field: surface dimension mismatch");
    if (j < 0 || static_cast<std::size_t>(j) > d - 2) throw Error("kakeya_field: j out of range");
    if (!is_power_of_two(N)) throw Error("kakeya_field: N must be a power of two");
    if (!ell.finite()) throw InfiniteSidelength("kakeya_field needs finite sidelengths");
    const double lj1 = ell[static_cast<std::size_t>(j)];
    const double Nf = static_cast<double>(N);
    if (!(ell[d - 1] / lj1 > Nf * Nf * Nf))
        throw AspectTooSmall("need l_d / l_{j+1} > N^3");

    RandomField F;
    F.options = opts;
    F.c = opts.c;
    F.j = j;
    F.theta = theta;
    F.N = N;
    F.seed = seed;
    F.lambda = 1.0 / (Nf * lj1);
    F.surface = parabolic_rescale(s, F.lambda);
    F.ell = ell.scaled(F.lambda);
    double sden = static_cast<double>(d - j) - theta;
    F.q_regime = 2.0 * (sden + 1.0) / sden;

    // Block tiling: axes < j span the whole box; axes j..d-2 have halfwidth
    // 1/N; axis d-1 has halfwidth 1.
    std::vector<double> block_hw(d), kappa_hw(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (i < static_cast<std::size_t>(j)) {
            block_hw[i] = F.ell[i];
            kappa_hw[i] = F.ell[i];
        } else if (i + 1 < d) {
            block_hw[i] = 1.0 / Nf;
            kappa_hw[i] = 1.0 / Nf;
        } else {
            block_hw[i] = 1.0;
            kappa_hw[i] = 1.0 / Nf;
        }
    }
    std::vector<long long> counts(d, 1);
    for (std::size_t i = static_cast<std::size_t>(j); i < d; ++i) {
        counts[i] = std::max<long long>(1, static_cast<long long>(F.ell[i] / block_hw[i]));
    }

    auto bes = besicovitch_translations(N, 512);
    auto shifts = bes.family.shifts;
    if (opts.zero_all_shifts) std::fill(shifts.begin(), shifts.end(), 0.0);

    // Enumerate blocks (product over tiled axes).
    std::vector<long long> bi(d, 0);
    bool done = false;
    while (!done) {
        KakeyaBlock blk;
        blk.xi_R.resize(d);
        for (std::size_t i = 0; i < d; ++i)
            blk.xi_R[i] = (-counts[i] + 1 + 2 * bi[i]) * block_hw[i];
        blk.x_R.assign(d, 0.0);
        auto H = F.surface.hessian(blk.xi_R);
        for (long long m = 0; m < N; ++m) {
            KakeyaTube tube;
            tube.n_kappa = static_cast<int>(2 * m + 1 - N);
            tube.xi_kappa = blk.xi_R;
            tube.xi_kappa[d - 1] += static_cast<double>(tube.n_kappa) / Nf;
            tube.kappa = Box::centered(tube.xi_kappa, kappa_hw);
            double s_kappa = opts.zero_all_shifts
                                 ? 0.0
                                 : shifts[static_cast<std::size_t>(m)] * opts.c * Nf;
            tube.t_shift = 0.0;
            tube.x_shift.assign(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) tube.x_shift[i] = -s_kappa * H[i][d - 1];
            blk.tubes.push_back(std::move(tube));
        }
        F.blocks.push_back(std::move(blk));
        done = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (++bi[i] < counts[i]) {
                done = false;
                break;
            }
            bi[i] = 0;
        }
    }

    // Widely spaced block translations.  Spacing is along the last spatial
    // axis: an x shift translates every tube field exactly, whereas a t shift
    // disperses it, which would leak stationary-phase tails into every
    // window.  The spacing multiple is taken of the largest frame extent.
    if (!opts.zero_all_shifts && F.blocks.size() > 1) {
        double diam = 0.0;
        for (const auto& blk : F.blocks) {
            auto f = detail::make_frame(F.surface, F.j, F.N, F.c, F.ell, blk);
            diam = std::max(diam, f.t_max - f.t_min);
            for (std::size_t i = 0; i < d; ++i) diam = std::max(diam, f.x_max[i] - f.x_min[i]);
        }
        double spacing = opts.spacing_factor * diam;
        for (std::size_t b = 0; b < F.blocks.size(); ++b)
            F.blocks[b].x_R[d - 1] = static_cast<double>(b) * spacing;
    }

    // Sign selection: the identity draw plus random draws, keeping the best
    // weak-L^q norm (the construction only promises good signs exist).
    auto eval = std::make_shared<detail::KakeyaEvaluation>(detail::evaluate_tubes(F));
    std::size_t total_tubes = F.blocks.size() * static_cast<std::size_t>(N);
    std::mt19937_64 rng(seed);
    std::vector<int> best(total_tubes, 1), trial(total_tubes, 1);
    double best_norm = detail::weak_quotient_for_signs(F, *eval, best, 2.0, F.q_regime).weak_norm;
    for (int t = 1; t < opts.trial_count; ++t) {
        for (auto& w : trial) w = (rng() & 1) ? 1 : -1;
        double norm = detail::weak_quotient_for_signs(F, *eval, trial, 2.0, F.q_regime).weak_norm;
        if (norm > best_norm) {
            best_norm = norm;
            best = trial;
        }
    }
    F.signs = best;
    F.cache = eval;

    // Materialize the density on a kappa-resolving grid.
    std::vector<int> res(d);
    for (std::size_t i = 0; i < d; ++i) {
        double cells = 2.0 * F.ell[i] / (2.0 * kappa_hw[i] / opts.grid_cells_per_kappa);
        res[i] = std::max(2, static_cast<int>(std::ceil(cells)));
    }
    const Surface& surf = F.surface;
    const auto& blocks = F.blocks;
    const auto& signs = F.signs;
    F.gridfn = GridFunction::from_function(
        F.ell, res, [&](std::span<const double> xi) -> Complex {
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                for (std::size_t m = 0; m < blocks[b].tubes.size(); ++m) {
                    const KakeyaTube& tube = blocks[b].tubes[m];
                    bool inside = true;
                    for (std::size_t i = 0; i < xi.size(); ++i)
                        if (xi[i] < tube.kappa.lo[i] || xi[i] >= tube.kappa.hi[i]) {
                            inside = false;
                            break;
                        }
                    if (!inside) continue;
                    double T = blocks[b].t_R + tube.t_shift;
                    double phase = -T * surf.value(xi);
                    for (std::size_t i = 0; i < xi.size(); ++i)
                        phase -= (blocks[b].x_R[i] + tube.x_shift[i]) * xi[i];
                    int w = signs[b * blocks[b].tubes.size() + m];
                    return Complex(std::cos(phase), std::sin(phase)) * static_cast<double>(w);
                }
            }
            return Complex(0.0, 0.0);
        });
    return F;
}

/// Certified-from-below restricted weak type quotient of the assembled field.
inline WeakQuotient kakeya_quotient(const RandomField& F, double p, double q) {
    if (F.cache) return detail::weak_quotient_for_signs(F, *F.cache, F.signs, p, q);
    auto ev = detail::evaluate_tubes(F);
    return detail::weak_quotient_for_signs(F, ev, F.signs, p, q);
}

/// The same estimator run on a single centered cell: the plain Knapp example
/// at identical (p, q, l).
inline WeakQuotient kakeya_knapp_reference(const RandomField& F, double p, double q) {
    RandomField ref;
    ref.options = F.options;
    ref.options.zero_all_shifts = true;
    ref.c = F.c;
    ref.j = F.j;
    ref.theta = F.theta;
    ref.N = F.N;
    ref.q_regime = F.q_regime;
    ref.surface = F.surface;
    ref.ell = F.ell;
    ref.lambda = F.lambda;
    const std::size_t d = ref.ell.dim();
    KakeyaBlock blk;
    blk.xi_R.assign(d, 0.0);
    blk.x_R.assign(d, 0.0);
    KakeyaTube tube;
    tube.n_kappa = 0;
    tube.xi_kappa.assign(d, 0.0);
    std::vector<double> kappa_hw(d);
    for (std::size_t i = 0; i < d; ++i)
        kappa_hw[i] = i < static_cast<std::size_t>(F.j) ? ref.ell[i]
                                                        : 1.0 / static_cast<double>(F.N);
    tube.kappa = Box::centered(tube.xi_kappa, kappa_hw);
    tube.t_shift = 0.0;
    tube.x_shift.assign(d, 0.0);
    blk.tubes.push_back(std::move(tube));
    ref.blocks.push_back(std::move(blk));
    ref.signs.assign(1, 1);
    auto ev = detail::evaluate_tubes(ref);
    return detail::weak_quotient_for_signs(ref, ev, ref.signs, p, q);
}

}  // namespace rectext
