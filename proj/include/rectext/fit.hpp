#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/exponents.hpp"

namespace rectext {

/// One measured row of a sweep: sidelengths, exponents, mode, quotient, and
/// an error flag (empty when the row completed).
struct SweepRow {
    std::vector<double> ell;
    Rat p;
    Rat q;
    std::string mode;
    double quotient = 0.0;
    std::string error_flag;
};

struct AxisFit {
    long long axis = -1;
    double slope = 0.0;
    double predicted = 0.0;
    bool pass = false;
};

struct FitReport {
    std::vector<AxisFit> axes;
    double residual = 0.0;  // max |log2 deviation| from the fitted line
    double tolerance = 0.05;
    bool all_pass = false;
};

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw IllConditioned("all abscissae coincide");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace detail

/// Least-squares slope of log2(quotient) against log2(l_axis) for every axis
/// the ladder varies, compared with the conjectured per-sidelength exponents.
/// The ladder must vary one axis at a time and span at least two octaves.
inline FitReport fit_exponents(const std::vector<SweepRow>& table,
                               const PredictedExponents& predicted, double tol = 0.05) {
    if (table.empty()) throw Error("fit_exponents: empty table");
    const std::size_t d = table.front().ell.size();

    // Identify varied axes across rows that completed.
    std::vector<const SweepRow*> rows;
    for (const auto& r : table)
        if (r.error_flag.empty()) rows.push_back(&r);
    if (rows.size() < 4) throw IllConditioned("fitting needs a ladder of at least 4 rows");

    FitReport report;
    report.tolerance = tol;
    std::vector<bool> varies(d, false);
    for (std::size_t i = 0; i < d; ++i)
        for (const auto* r : rows)
            if (r->ell[i] != rows.front()->ell[i]) varies[i] = true;
    std::size_t varied_count = 0;
    for (std::size_t i = 0; i < d; ++i) varied_count += varies[i];
    if (varied_count != 1)
        throw Error("fit_exponents: the ladder must vary exactly one axis");

    report.all_pass = true;
    for (std::size_t i = 0; i < d; ++i) {
        if (!varies[i]) continue;
        std::vector<double> xs, ys;
        for (const auto* r : rows) {
            if (!(r->quotient > 0.0)) throw Error("fit_exponents: nonpositive quotient");
            xs.push_back(std::log2(r->ell[i]));
            ys.push_back(std::log2(r->quotient));
        }
        double span = *std::max_element(xs.begin(), xs.end()) -
                      *std::min_element(xs.begin(), xs.end());
        if (span < 2.0) throw IllConditioned("ladder spans fewer than two octaves");
        auto line = detail::least_squares(xs, ys);
        AxisFit fit;
        fit.axis = static_cast<long long>(i);
        fit.slope = line.slope;
        fit.predicted = to_double(predicted.per_sidelength[i]);
        fit.pass = std::abs(fit.slope - fit.predicted) <= tol;
        for (std::size_t r = 0; r < xs.size(); ++r)
            report.residual =
                std::max(report.residual, std::abs(ys[r] - (line.intercept + line.slope * xs[r])));
        report.all_pass = report.all_pass && fit.pass;
        report.axes.push_back(fit);
    }
    return report;
}

}  // namespace rectext
