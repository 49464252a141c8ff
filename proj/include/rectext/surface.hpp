#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/rational.hpp"
#include "rectext/sidelengths.hpp"

namespace rectext {

/// One summand of a univariate series: coef * |s|^power, optionally odd
/// (multiplied by sgn s).  s^3 is {coef, 3, odd=true}; s^2 is {coef, 2, false}.
struct AxisTerm {
    double coef;
    double power;
    bool odd = false;
};

using AxisSeries = std::vector<AxisTerm>;

// m-th derivative of coef*|s|^power*(odd ? sgn s : 1).  Exact for integer
// powers (the falling factorial hits zero); grids are arranged to avoid s = 0
// where fractional powers lose smoothness.
inline double axis_series_derivative(const AxisSeries& series, int m, double s) {
    double out = 0.0;
    for (const AxisTerm& t : series) {
        double c = t.coef;
        for (int k = 0; k < m; ++k) c *= (t.power - k);
        if (c == 0.0) continue;
        double pw = t.power - m;
        bool odd = t.odd ^ (m % 2 != 0);
        double mag;
        if (s == 0.0) {
            if (pw > 0.0) continue;
            if (pw == 0.0) {
                if (!odd) out += c;
                continue;
            }
            out += std::numeric_limits<double>::infinity();
            continue;
        }
        mag = std::pow(std::abs(s), pw);
        out += c * mag * (odd ? (s < 0 ? -1.0 : 1.0) : 1.0);
    }
    return out;
}

/// Abstract surface: an evaluator for g and its partial derivatives over a
/// rectangular domain.  Implementations must be safe for concurrent reads.
class SurfaceBase {
  public:
    virtual ~SurfaceBase() = default;
    virtual std::size_t dim() const = 0;
    virtual const Sidelengths& domain() const = 0;
    /// Largest C^N order the derivative oracle supports in deficit norms.
    virtual int smoothness_order() const = 0;
    /// Partial derivative of g of multi-index alpha (alpha = 0 gives g).
    virtual double partial(const MultiIndex& alpha, std::span<const double> xi) const = 0;

    double value(std::span<const double> xi) const {
        MultiIndex zero(dim(), 0);
        return partial(zero, xi);
    }

    std::vector<double> gradient(std::span<const double> xi) const {
        MultiIndex alpha(dim(), 0);
        std::vector<double> g(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            alpha[i] = 1;
            g[i] = partial(alpha, xi);
            alpha[i] = 0;
        }
        return g;
    }

    std::vector<std::vector<double>> hessian(std::span<const double> xi) const {
        MultiIndex alpha(dim(), 0);
        std::vector<std::vector<double>> h(dim(), std::vector<double>(dim()));
        for (std::size_t a = 0; a < dim(); ++a)
            for (std::size_t b = a; b < dim(); ++b) {
                alpha[a] += 1;
                alpha[b] += 1;
                h[a][b] = h[b][a] = partial(alpha, xi);
                alpha[a] = 0;
                alpha[b] = 0;
            }
        return h;
    }

    /// Partial of the perturbation h = g - |xi|^2.
    double h_partial(const MultiIndex& alpha, std::span<const double> xi) const {
        double v = partial(alpha, xi);
        int order = multi_index_order(alpha);
        if (order == 0) {
            double sq = 0.0;
            for (double x : xi) sq += x * x;
            return v - sq;
        }
        if (order == 1) {
            for (std::size_t i = 0; i < alpha.size(); ++i)
                if (alpha[i] == 1) return v - 2.0 * xi[i];
        }
        if (order == 2) {
            for (std::size_t i = 0; i < alpha.size(); ++i)
                if (alpha[i] == 2) return v - 2.0;
        }
        return v;
    }
};

/// Concrete analytic surface:
///   g(xi) = mult * sum_i G_i(b_i + M_i . xi) + lin . xi + cst.
/// The family is closed under parabolic rescaling, affine slicing, and the
/// recentering used by dicing, so those operations return exact results.
class Surface final : public SurfaceBase {
  public:
    Surface(std::vector<AxisSeries> series, Sidelengths domain)
        : G_(std::move(series)), domain_(std::move(domain)) {
        const std::size_t d = domain_.dim();
        if (G_.size() != d) throw Error("Surface: series count must match dimension");
        b_.assign(G_.size(), 0.0);
        M_.assign(G_.size(), std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i) M_[i][i] = 1.0;
        lin_.assign(d, 0.0);
    }

    std::size_t dim() const override { return lin_.size(); }
    const Sidelengths& domain() const override { return domain_; }
    int smoothness_order() const override { return 64; }

    double partial(const MultiIndex& alpha, std::span<const double> xi) const override {
        const int m = multi_index_order(alpha);
        double acc = 0.0;
        for (std::size_t i = 0; i < G_.size(); ++i) {
            double weight = 1.0;
            double s = b_[i];
            const auto& row = M_[i];
            for (std::size_t j = 0; j < row.size(); ++j) {
                s += row[j] * xi[j];
                for (int a = 0; a < alpha[j]; ++a) weight *= row[j];
                if (weight == 0.0) break;
            }
            if (weight == 0.0 && m > 0) continue;
            double der = axis_series_derivative(G_[i], m, s);
            if (der != 0.0) acc += weight * der;
        }
        acc *= mult_;
        if (m == 0) {
            for (std::size_t j = 0; j < lin_.size(); ++j) acc += lin_[j] * xi[j];
            acc += cst_;
        } else if (m == 1) {
            for (std::size_t j = 0; j < alpha.size(); ++j)
                if (alpha[j] == 1) acc += lin_[j];
        }
        return acc;
    }

    Surface with_domain(Sidelengths domain) const {
        Surface out = *this;
        if (domain.dim() != dim()) throw Error("with_domain: dimension mismatch");
        out.domain_ = std::move(domain);
        return out;
    }

    /// xi |-> lambda^2 g(xi / lambda) over Q^{lambda l}; exact.
    friend Surface parabolic_rescale(const Surface& s, double lambda);
    friend Surface slice_surface(const Surface& s, const std::vector<double>& basepoint,
                                 const std::vector<std::vector<double>>& basis);
    friend Surface recenter_normalize(const Surface& s, const std::vector<double>& xi0);

  private:
    std::vector<AxisSeries> G_;
    std::vector<double> b_;
    std::vector<std::vector<double>> M_;
    double mult_ = 1.0;
    std::vector<double> lin_;
    double cst_ = 0.0;
    Sidelengths domain_;
};

inline Surface make_paraboloid(std::size_t d, Sidelengths domain = {}) {
    if (domain.dim() == 0) domain = Sidelengths(std::vector<double>(d, kInf));
    std::vector<AxisSeries> series(d, AxisSeries{{1.0, 2.0, false}});
    return Surface(std::move(series), std::move(domain));
}

/// g_beta(xi) = sum_i |xi_i|^{beta_i} over Q^1 (by default).
inline Surface make_gbeta(const std::vector<Rat>& beta, Sidelengths domain = {}) {
    for (const Rat& b : beta)
        if (b <= Rat(1)) throw InvalidBeta("all beta entries must exceed 1");
    if (domain.dim() == 0) domain = Sidelengths::ones(beta.size());
    std::vector<AxisSeries> series;
    series.reserve(beta.size());
    for (const Rat& b : beta) series.push_back(AxisSeries{{1.0, to_double(b), false}});
    return Surface(std::move(series), std::move(domain));
}

/// Paraboloid with per-axis polynomial perturbation terms appended.
inline Surface make_perturbed_paraboloid(std::size_t d, const std::vector<AxisSeries>& extra,
                                         Sidelengths domain = {}) {
    if (extra.size() != d) throw Error("perturbation terms must match dimension");
    if (domain.dim() == 0) domain = Sidelengths::ones(d);
    std::vector<AxisSeries> series(d, AxisSeries{{1.0, 2.0, false}});
    for (std::size_t i = 0; i < d; ++i)
        for (const AxisTerm& t : extra[i]) series[i].push_back(t);
    return Surface(std::move(series), std::move(domain));
}

/// Model surface of one dyadic block of g_beta, in block-normalized
/// coordinates: the paraboloid plus the pure power profile, over the
/// rectangle with sidelengths l_i = 2^{-k_{sigma(i)} beta_{sigma(i)}}.
/// The returned Sidelengths are exactly those block sidelengths.
inline std::pair<Surface, Sidelengths> make_block_surface(const std::vector<Rat>& beta,
                                                          const std::vector<long long>& k,
                                                          const std::vector<std::size_t>& sigma) {
    const std::size_t d = beta.size();
    if (k.size() != d || sigma.size() != d) throw Error("block surface: size mismatch");
    for (const Rat& b : beta)
        if (b <= Rat(1)) throw InvalidBeta("all beta entries must exceed 1");
    for (std::size_t i = 0; i + 1 < d; ++i) {
        if (Rat(k[sigma[i]]) * beta[sigma[i]] < Rat(k[sigma[i + 1]]) * beta[sigma[i + 1]])
            throw RegimeMismatch("k is not ordered for this permutation");
    }
    std::vector<double> lengths(d);
    std::vector<AxisSeries> series(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Rat kb = Rat(k[sigma[i]]) * beta[sigma[i]];
        lengths[i] = std::exp2(-to_double(kb));
        series[i] = AxisSeries{{1.0, 2.0, false}, {1.0, to_double(beta[sigma[i]]), false}};
    }
    Sidelengths ell(lengths);
    return {Surface(std::move(series), ell), ell};
}

inline Surface parabolic_rescale(const Surface& s, double lambda) {
    if (!(lambda > 0.0)) throw Error("parabolic_rescale: lambda must be positive");
    Surface out = s;
    out.mult_ = s.mult_ * lambda * lambda;
    for (auto& row : out.M_)
        for (double& v : row) v /= lambda;
    for (double& v : out.lin_) v *= lambda;
    out.cst_ = s.cst_ * lambda * lambda;
    std::vector<double> lengths = s.domain_.values();
    for (double& l : lengths) l *= lambda;
    out.domain_ = Sidelengths(std::move(lengths));
    return out;
}

/// g_flat(eta) = g(basepoint + sum_j eta_j u_j) over the inscribed box of the
/// affine slice.  Basis vectors are reordered so the box is sorted.
inline Surface slice_surface(const Surface& s, const std::vector<double>& basepoint,
                             const std::vector<std::vector<double>>& basis) {
    const std::size_t D = s.dim();
    const std::size_t kdim = basis.size();
    if (basepoint.size() != D || kdim == 0 || kdim > D)
        throw Error("slice_surface: bad basepoint/basis sizes");
    if (!s.domain().contains(basepoint)) throw EmptySlice("basepoint outside the open box");
    for (std::size_t a = 0; a < kdim; ++a) {
        if (basis[a].size() != D) throw Error("slice_surface: basis vector size mismatch");
        for (std::size_t b = a; b < kdim; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < D; ++i) dot += basis[a][i] * basis[b][i];
            double target = (a == b) ? 1.0 : 0.0;
            if (std::abs(dot - target) > 1e-12)
                throw NonOrthonormalBasis("Gram matrix deviates by more than 1e-12");
        }
    }

    // Inscribed box half-widths.  Axis-aligned bases get the exact per-axis
    // slack; otherwise a uniform half-width that keeps the box inside Q^l.
    std::vector<double> rho(kdim);
    bool axis_aligned = true;
    std::vector<std::size_t> hit_axis(kdim);
    for (std::size_t a = 0; a < kdim && axis_aligned; ++a) {
        std::size_t nonzero = D;
        for (std::size_t i = 0; i < D; ++i) {
            if (std::abs(basis[a][i]) > 1e-12) {
                if (nonzero != D || std::abs(std::abs(basis[a][i]) - 1.0) > 1e-12) {
                    axis_aligned = false;
                    break;
                }
                nonzero = i;
            }
        }
        if (axis_aligned) hit_axis[a] = nonzero;
    }
    if (axis_aligned) {
        for (std::size_t a = 0; a < kdim; ++a)
            rho[a] = s.domain()[hit_axis[a]] - std::abs(basepoint[hit_axis[a]]);
    } else {
        double budget = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            double slack = s.domain()[i] - std::abs(basepoint[i]);
            if (std::isinf(slack)) continue;
            double load = 0.0;
            for (std::size_t a = 0; a < kdim; ++a) load += std::abs(basis[a][i]);
            if (load > 0.0) budget = std::max(budget, load / slack);
        }
        double r = budget > 0.0 ? 1.0 / budget : kInf;
        for (std::size_t a = 0; a < kdim; ++a) rho[a] = r;
    }

    std::vector<std::size_t> order(kdim);
    for (std::size_t a = 0; a < kdim; ++a) order[a] = a;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rho[a] < rho[b]; });

    Surface out = s;
    out.b_.resize(s.G_.size());
    for (std::size_t i = 0; i < s.G_.size(); ++i) {
        double shift = s.b_[i];
        for (std::size_t j = 0; j < D; ++j) shift += s.M_[i][j] * basepoint[j];
        out.b_[i] = shift;
    }
    out.M_.assign(s.G_.size(), std::vector<double>(kdim, 0.0));
    for (std::size_t i = 0; i < s.G_.size(); ++i)
        for (std::size_t a = 0; a < kdim; ++a) {
            double v = 0.0;
            for (std::size_t j = 0; j < D; ++j) v += s.M_[i][j] * basis[order[a]][j];
            out.M_[i][a] = v;
        }
    double base_lin = 0.0;
    for (std::size_t j = 0; j < D; ++j) base_lin += s.lin_[j] * basepoint[j];
    out.cst_ = s.cst_ + base_lin;
    out.lin_.assign(kdim, 0.0);
    for (std::size_t a = 0; a < kdim; ++a)
        for (std::size_t j = 0; j < D; ++j) out.lin_[a] += s.lin_[j] * basis[order[a]][j];
    std::vector<double> lengths(kdim);
    for (std::size_t a = 0; a < kdim; ++a) lengths[a] = rho[order[a]];
    out.domain_ = Sidelengths(std::move(lengths));
    return out;
}

/// The affine renormalization at xi0 with diagonal Hessian:
///   g~(u) = g(xi0 + B u) - g(xi0) - (B u) . grad g(xi0),  B = sqrt(2) D2g(xi0)^{-1/2},
/// so that D2 g~(0) = 2 I.  Domain is left to the caller.
inline Surface recenter_normalize(const Surface& s, const std::vector<double>& xi0) {
    const std::size_t d = s.dim();
    if (xi0.size() != d) throw Error("recenter_normalize: basepoint size mismatch");
    auto hess = s.hessian(xi0);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            if (a != b && std::abs(hess[a][b]) > 1e-10 * std::abs(hess[a][a]))
                throw Error("recenter_normalize: Hessian not diagonal at basepoint");
        }
        if (!(hess[a][a] > 0.0))
            throw Error("recenter_normalize: Hessian not positive at basepoint");
    }
    std::vector<double> Bdiag(d);
    for (std::size_t a = 0; a < d; ++a) Bdiag[a] = std::sqrt(2.0 / hess[a][a]);
    auto grad = s.gradient(xi0);
    const double g0 = s.value(xi0);

    Surface out = s;
    out.b_.resize(s.G_.size());
    for (std::size_t i = 0; i < s.G_.size(); ++i) {
        double shift = s.b_[i];
        for (std::size_t j = 0; j < d; ++j) shift += s.M_[i][j] * xi0[j];
        out.b_[i] = shift;
        for (std::size_t j = 0; j < d; ++j) out.M_[i][j] = s.M_[i][j] * Bdiag[j];
    }
    double base_lin = 0.0;
    for (std::size_t j = 0; j < d; ++j) base_lin += s.lin_[j] * xi0[j];
    for (std::size_t j = 0; j < d; ++j)
        out.lin_[j] = (s.lin_[j] - grad[j]) * Bdiag[j];
    out.cst_ = s.cst_ + base_lin - g0;
    // cst_ currently double-counts the series value at xi0; fix by removing
    // the series contribution so that g~(0) = 0 exactly.
    MultiIndex zero(d, 0);
    std::vector<double> origin(d, 0.0);
    double at0 = out.partial(zero, origin);
    out.cst_ -= at0;
    return out;
}

/// Surface backed by a plain evaluator; derivatives via second-order central
/// differences with per-axis step l_i * 1e-4.  Deficits above C^1 are too
/// noisy with differences, so smoothness_order is 1.
class FdSurface final : public SurfaceBase {
  public:
    FdSurface(std::function<double(std::span<const double>)> fn, Sidelengths domain)
        : fn_(std::move(fn)), domain_(std::move(domain)) {
        steps_.resize(domain_.dim());
        for (std::size_t i = 0; i < domain_.dim(); ++i) {
            double l = domain_[i];
            steps_[i] = (std::isinf(l) ? 1.0 : l) * 1e-4;
        }
    }

    std::size_t dim() const override { return domain_.dim(); }
    const Sidelengths& domain() const override { return domain_; }
    int smoothness_order() const override { return 1; }

    double partial(const MultiIndex& alpha, std::span<const double> xi) const override {
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] > 0) {
                MultiIndex lower = alpha;
                lower[i] -= 1;
                std::vector<double> xp(xi.begin(), xi.end());
                std::vector<double> xm(xi.begin(), xi.end());
                xp[i] += steps_[i];
                xm[i] -= steps_[i];
                return (partial(lower, xp) - partial(lower, xm)) / (2.0 * steps_[i]);
            }
        return fn_(xi);
    }

  private:
    std::function<double(std::span<const double>)> fn_;
    Sidelengths domain_;
    std::vector<double> steps_;
};

}  // namespace rectext
