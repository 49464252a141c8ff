#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/sidelengths.hpp"
#include "rectext/surface.hpp"

namespace rectext {

/// Result of a sampled ellipticity measurement: the estimated deficit
/// (epsilon_0), the C^N order used, and the grid it was sampled on.
struct EllipticityCertificate {
    double deficit = 0.0;
    int order = 0;
    std::string grid;
};

namespace detail {

// max over a midpoint grid on `box`, multi-indices |alpha| <= order and
// Hessian entries of |w^alpha * d^alpha D2h|.
inline double sampled_cn_norm_of_d2h(const SurfaceBase& s, const Box& box,
                                     const std::vector<double>& weights, int order,
                                     int resolution) {
    const std::size_t d = s.dim();
    const auto alphas = multi_indices_up_to(static_cast<int>(d), order);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    double worst = 0.0;
    MultiIndex probe(d, 0);
    bool done = false;
    while (!done) {
        for (std::size_t i = 0; i < d; ++i) {
            double t = (2.0 * static_cast<double>(idx[i]) + 1.0) / (2.0 * resolution);
            x[i] = box.lo[i] + t * (box.hi[i] - box.lo[i]);
        }
        for (const MultiIndex& alpha : alphas) {
            double w = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                for (int a = 0; a < alpha[i]; ++a) w *= weights[i];
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = a; b < d; ++b) {
                    probe = alpha;
                    probe[a] += 1;
                    probe[b] += 1;
                    double v = s.partial(probe, x);
                    if (multi_index_order(alpha) == 0 && a == b) v -= 2.0;
                    double entry = std::abs(w * v);
                    if (entry > worst) worst = entry;
                }
            }
        }
        done = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (++idx[i] < static_cast<std::size_t>(resolution)) {
                done = false;
                break;
            }
            idx[i] = 0;
        }
    }
    return worst;
}

}  // namespace detail

/// Deficit of s over its domain: the sampled C^N norm of (D2h) o A^l~ over
/// Q^1, maximized over the dyadic sub-rectangles l~ = 2^-m l, m = 0..6.
inline EllipticityCertificate ellipticity_deficit(const SurfaceBase& s, int order,
                                                  int resolution = 0) {
    if (!s.domain().finite())
        throw UnboundedDomain("ellipticity_deficit needs a truncated domain");
    if (order < 0 || order > s.smoothness_order())
        throw Error("requested C^N order exceeds the surface's derivative support");
    const std::size_t d = s.dim();
    if (resolution <= 0) resolution = d <= 2 ? 32 : 12;
    if (resolution % 2 != 0) ++resolution;  // midpoints must avoid 0

    double deficit = 0.0;
    for (int m = 0; m <= 6; ++m) {
        std::vector<double> lt(d);
        for (std::size_t i = 0; i < d; ++i) lt[i] = std::ldexp(s.domain()[i], -m);
        Box box = Box::centered(std::vector<double>(d, 0.0), lt);
        deficit = std::max(deficit, detail::sampled_cn_norm_of_d2h(s, box, lt, order, resolution));
    }
    EllipticityCertificate cert;
    cert.deficit = deficit;
    cert.order = order;
    cert.grid = "midpoint " + std::to_string(resolution) + "^" + std::to_string(d) +
                ", dyadic m=0..6";
    return cert;
}

struct DicingCheck {
    double deficit_sub = 0.0;
    double bound = 0.0;  // C * eps * eps0
};

/// Measures the deficit of s restricted to the sub-rectangle `sub` after the
/// affine renormalization at xi0, and compares with C * eps * eps0 where eps0
/// is the measured deficit of s over its full domain.  The constant C is a
/// harness parameter (the sharp value is not pinned down); callers assert
/// deficit_sub <= bound.
inline DicingCheck verify_dicing(const Surface& s, const Box& sub, const std::vector<double>& xi0,
                                 double eps, int order, double constant = 10.0,
                                 int resolution = 0) {
    const std::size_t d = s.dim();
    if (sub.dim() != d || xi0.size() != d) throw Error("verify_dicing: size mismatch");
    if (!(eps > 0.0) || eps > 1.0) throw Error("verify_dicing: eps must lie in (0, 1]");
    if (!sub.contains(xi0)) throw Error("verify_dicing: xi0 must lie in the sub-rectangle");
    for (std::size_t i = 0; i < d; ++i) {
        double lo = (sub.lo[i] - xi0[i]) / eps;
        double hi = (sub.hi[i] - xi0[i]) / eps;
        if (!(lo >= -s.domain()[i]) || !(hi <= s.domain()[i]))
            throw NotContained("eps^-1 (sub - xi0) escapes the domain box");
    }
    if (resolution <= 0) resolution = d <= 2 ? 32 : 12;
    if (resolution % 2 != 0) ++resolution;

    Surface normalized = recenter_normalize(s, xi0);
    // K~ = B^{-1}(sub - xi0); recover B from the normalization at 0.
    auto hess = s.hessian(xi0);
    Box ktilde;
    ktilde.lo.resize(d);
    ktilde.hi.resize(d);
    std::vector<double> lt(d);
    for (std::size_t i = 0; i < d; ++i) {
        double B = std::sqrt(2.0 / hess[i][i]);
        ktilde.lo[i] = (sub.lo[i] - xi0[i]) / B;
        ktilde.hi[i] = (sub.hi[i] - xi0[i]) / B;
        lt[i] = std::max(std::abs(ktilde.lo[i]), std::abs(ktilde.hi[i]));
    }
    DicingCheck out;
    out.deficit_sub = detail::sampled_cn_norm_of_d2h(normalized, ktilde, lt, order, resolution);
    out.bound = constant * eps * ellipticity_deficit(s, order, resolution).deficit;
    return out;
}

}  // namespace rectext
