#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/extension.hpp"
#include "rectext/grid.hpp"

namespace rectext {

// Dual-box constant: calibrated once at d=1, l=1 so the field exceeds half
// its peak throughout the dual box, then frozen for all runs.
inline constexpr double kKnappDualC = 0.125;

/// Smooth compactly supported profile with exact unit integral:
/// (315/256) (1-u^2)^4 on |u| <= 1, tensorized per axis.
inline double bump_profile(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    double w = 1.0 - u * u;
    double w2 = w * w;
    return (315.0 / 256.0) * w2 * w2;
}

struct KnappCap {
    long long j = 0;
    Sidelengths ell;
    std::string bump = "poly4";
    GridFunction gridfn;
};

struct KnappResult {
    KnappCap cap;
    SpaceTimeBox dual_box;
    double predicted_peak = 0.0;
};

/// The cap phi^{j,l}(xi) = phi(xi_1/l_1, ..., xi_j/l_j, xi_{j+1}/l_{j+1}, ...,
/// xi_d/l_{j+1}) with integral l_1...l_j l_{j+1}^{d-j}, which is the exact
/// field peak at the space-time origin.  The dual box has halfwidths c/l_i
/// (i <= j), c/l_{j+1} (i > j) and c/l_{j+1}^2 in t.
inline KnappResult knapp(std::size_t d, const Sidelengths& ell, long long j,
                         int resolution_per_axis = 48, bool indicator = false) {
    if (ell.dim() != d) throw Error("knapp: sidelength rank mismatch");
    if (!ell.finite()) throw InfiniteSidelength("knapp caps need finite sidelengths");
    if (j < 0 || static_cast<std::size_t>(j) >= d) throw Error("knapp: j must lie in [0, d)");

    std::vector<double> scale(d);
    for (std::size_t i = 0; i < d; ++i)
        scale[i] = i < static_cast<std::size_t>(j) ? ell[i] : ell[static_cast<std::size_t>(j)];
    Sidelengths support(scale);

    KnappResult out;
    out.cap.j = j;
    out.cap.ell = ell;
    if (indicator) out.cap.bump = "indicator";
    out.cap.gridfn = GridFunction::from_function(
        support, std::vector<int>(d, resolution_per_axis), [&](std::span<const double> xi) {
            double v = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                v *= indicator ? 1.0 : bump_profile(xi[i] / scale[i]);
            return Complex(v, 0.0);
        });

    double peak = 1.0;  // exact field value at the space-time origin
    for (std::size_t i = 0; i < d; ++i) peak *= indicator ? 2.0 * scale[i] : scale[i];
    out.predicted_peak = peak;  // = l_1...l_j l_{j+1}^{d-j} for the unit-integral bump

    const double lj1 = ell[static_cast<std::size_t>(j)];
    out.dual_box.t_halfwidth = kKnappDualC / (lj1 * lj1);
    out.dual_box.x_halfwidths.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        out.dual_box.x_halfwidths[i] =
            i < static_cast<std::size_t>(j) ? kKnappDualC / ell[i] : kKnappDualC / lj1;
    out.dual_box.resolution.assign(d + 1, 8);
    return out;
}

/// Evaluation box for Knapp quotient runs: a factor-scaled copy of the dual
/// box with its own resolution.
inline SpaceTimeBox scaled_box(const SpaceTimeBox& dual, double factor, int res_t,
                               int res_x) {
    SpaceTimeBox b = dual;
    b.t_halfwidth *= factor;
    for (double& h : b.x_halfwidths) h *= factor;
    b.resolution.assign(b.x_halfwidths.size() + 1, res_x);
    b.resolution[0] = res_t;
    return b;
}

}  // namespace rectext
