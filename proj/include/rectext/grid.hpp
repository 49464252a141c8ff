#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/sidelengths.hpp"

namespace rectext {

using Complex = std::complex<double>;

/// A complex density sampled at the cell centers of a uniform grid on Q^l.
struct GridFunction {
    Sidelengths domain;
    std::vector<int> resolution;  // per-axis cell counts, each >= 2
    std::vector<Complex> samples;  // row-major

    std::size_t dim() const { return domain.dim(); }

    std::size_t size() const {
        std::size_t n = 1;
        for (int r : resolution) n *= static_cast<std::size_t>(r);
        return n;
    }

    double cell_volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < dim(); ++i)
            v *= 2.0 * domain[i] / resolution[i];
        return v;
    }

    std::vector<double> cell_center(std::size_t flat) const {
        std::vector<double> x(dim());
        for (std::size_t i = dim(); i-- > 0;) {
            std::size_t r = static_cast<std::size_t>(resolution[i]);
            std::size_t k = flat % r;
            flat /= r;
            x[i] = -domain[i] + (2.0 * static_cast<double>(k) + 1.0) * domain[i] / resolution[i];
        }
        return x;
    }

    static GridFunction from_function(Sidelengths domain, std::vector<int> resolution,
                                      const std::function<Complex(std::span<const double>)>& fn) {
        if (!domain.finite()) throw InfiniteSidelength("grid functions need a bounded box");
        for (int r : resolution)
            if (r < 2) throw Error("GridFunction resolution must be >= 2 per axis");
        if (resolution.size() != domain.dim()) throw Error("GridFunction: resolution rank mismatch");
        GridFunction g{std::move(domain), std::move(resolution), {}};
        g.samples.resize(g.size());
        for (std::size_t i = 0; i < g.samples.size(); ++i) g.samples[i] = fn(g.cell_center(i));
        return g;
    }

    double lp_norm(double p) const {
        const double vol = cell_volume();
        if (std::isinf(p)) {
            double m = 0.0;
            for (const Complex& c : samples) m = std::max(m, std::abs(c));
            return m;
        }
        double acc = 0.0;
        for (const Complex& c : samples) acc += std::pow(std::abs(c), p);
        return std::pow(acc * vol, 1.0 / p);
    }

    double support_measure() const {
        std::size_t n = 0;
        for (const Complex& c : samples)
            if (std::abs(c) > 0.0) ++n;
        return static_cast<double>(n) * cell_volume();
    }

    GridFunction scaled(Complex factor) const {
        GridFunction g = *this;
        for (Complex& c : g.samples) c *= factor;
        return g;
    }
};

/// Truncated evaluation window in (t, x) in R^{1+d}.
struct SpaceTimeBox {
    double t_halfwidth = 1.0;
    std::vector<double> x_halfwidths;
    std::vector<int> resolution;  // size 1 + d: t axis first

    std::size_t space_dim() const { return x_halfwidths.size(); }

    std::size_t size() const {
        std::size_t n = 1;
        for (int r : resolution) n *= static_cast<std::size_t>(r);
        return n;
    }

    void validate() const {
        if (resolution.size() != space_dim() + 1) throw Error("SpaceTimeBox: resolution rank mismatch");
        if (!(t_halfwidth > 0.0)) throw Error("SpaceTimeBox: t halfwidth must be positive");
        for (double h : x_halfwidths)
            if (!(h > 0.0)) throw Error("SpaceTimeBox: x halfwidths must be positive");
        for (int r : resolution)
            if (r < 1) throw Error("SpaceTimeBox: resolution must be >= 1 per axis");
    }

    double cell_volume() const {
        double v = 2.0 * t_halfwidth / resolution[0];
        for (std::size_t i = 0; i < space_dim(); ++i)
            v *= 2.0 * x_halfwidths[i] / resolution[i + 1];
        return v;
    }

    // (t, x_1, ..., x_d) of the flat-index cell center.
    std::vector<double> cell_center(std::size_t flat) const {
        std::vector<double> p(space_dim() + 1);
        for (std::size_t i = space_dim() + 1; i-- > 0;) {
            std::size_t r = static_cast<std::size_t>(resolution[i]);
            std::size_t k = flat % r;
            flat /= r;
            double hw = i == 0 ? t_halfwidth : x_halfwidths[i - 1];
            p[i] = -hw + (2.0 * static_cast<double>(k) + 1.0) * hw / static_cast<double>(r);
        }
        return p;
    }
};

/// Extension-field samples over a space-time box.
struct FieldSamples {
    SpaceTimeBox box;
    std::vector<Complex> values;
};

}  // namespace rectext
