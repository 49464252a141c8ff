#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rectext/common.hpp"

namespace rectext {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sidelengths l of the open box Q^l = prod_j (-l_j, l_j), sorted
/// nondecreasing.  Entries may be +infinity; numeric operations that need a
/// bounded box must be handed an explicitly truncated copy.
class Sidelengths {
  public:
    Sidelengths() = default;
    explicit Sidelengths(std::vector<double> lengths) : lengths_(std::move(lengths)) {
        for (double l : lengths_)
            if (!(l > 0.0)) throw Error("Sidelengths entries must be positive");
        if (!std::is_sorted(lengths_.begin(), lengths_.end()))
            throw Error("Sidelengths must be sorted nondecreasing");
    }

    static Sidelengths ones(std::size_t d) {
        return Sidelengths(std::vector<double>(d, 1.0));
    }

    std::size_t dim() const { return lengths_.size(); }
    double operator[](std::size_t i) const { return lengths_[i]; }
    const std::vector<double>& values() const { return lengths_; }

    bool finite() const {
        for (double l : lengths_)
            if (std::isinf(l)) return false;
        return true;
    }

    double volume() const {
        double v = 1.0;
        for (double l : lengths_) v *= 2.0 * l;
        return v;
    }

    Sidelengths scaled(double lambda) const {
        std::vector<double> out(lengths_);
        for (double& l : out) l *= lambda;
        return Sidelengths(std::move(out));
    }

    bool contains(const std::vector<double>& xi) const {
        if (xi.size() != lengths_.size()) return false;
        for (std::size_t i = 0; i < xi.size(); ++i)
            if (!(std::abs(xi[i]) < lengths_[i])) return false;
        return true;
    }

    bool fits_inside(const Sidelengths& outer) const {
        if (outer.dim() != dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (lengths_[i] > outer[i]) return false;
        return true;
    }

  private:
    std::vector<double> lengths_;
};

/// Axis-aligned box [lo, hi] (not necessarily centered), used for dicing.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }

    static Box centered(const std::vector<double>& center, const std::vector<double>& halfwidth) {
        Box b;
        b.lo.resize(center.size());
        b.hi.resize(center.size());
        for (std::size_t i = 0; i < center.size(); ++i) {
            b.lo[i] = center[i] - halfwidth[i];
            b.hi[i] = center[i] + halfwidth[i];
        }
        return b;
    }

    bool contains(const std::vector<double>& x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
};

}  // namespace rectext
