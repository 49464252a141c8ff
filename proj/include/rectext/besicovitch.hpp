#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rectext/common.hpp"

namespace rectext {

/// Sheared-slab family in normalized coordinates: slab m is
///   {(tau, sigma) : |tau| < 1, |sigma - n_m tau - b_m| < 1},
/// with slopes n_m = 2m + 1 - N, m = 0..N-1.  The shifts b_m come from a
/// Perron-tree bisection: blocks of 2^k consecutive slopes are translated so
/// that adjacent blocks' extreme tube lines cross at a per-level height,
/// alternating sides so both halves of the two-sided slabs share overlap.
struct TubeFamily {
    long long N = 1;
    std::vector<int> slopes;      // n_m
    std::vector<double> shifts;   // b_m (sigma offsets of the slab centers)
};

namespace detail {

// Collapse heights per merge level (blocks of size 2^level merge at
// alphas[level]); tuned once against the rasterized overlap measure and
// frozen.  Signs alternate so consecutive levels overlap opposite halves.
inline constexpr std::array<double, 8> kPerronCollapse = {
    0.3, -1.0, 1.0, -1.0, 0.9, -0.9, 0.9, -0.9};

inline void perron_merge(std::vector<double>& b, const std::vector<int>& n, std::size_t lo,
                         std::size_t hi, int level) {
    if (hi - lo <= 1) return;
    std::size_t mid = lo + (hi - lo) / 2;
    perron_merge(b, n, lo, mid, level - 1);
    perron_merge(b, n, mid, hi, level - 1);
    double tau = kPerronCollapse[static_cast<std::size_t>(level) % kPerronCollapse.size()];
    // Right block slides so its leftmost tube line meets the left block's
    // rightmost tube line at height tau.
    double delta = (n[mid - 1] - n[mid]) * tau + b[mid - 1] - b[mid];
    for (std::size_t m = mid; m < hi; ++m) b[m] += delta;
}

}  // namespace detail

inline bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

inline TubeFamily perron_tube_family(long long N) {
    if (!is_power_of_two(N)) throw Error("tube family size must be a power of two");
    TubeFamily fam;
    fam.N = N;
    fam.slopes.resize(static_cast<std::size_t>(N));
    for (long long m = 0; m < N; ++m)
        fam.slopes[static_cast<std::size_t>(m)] = static_cast<int>(2 * m + 1 - N);
    fam.shifts.assign(static_cast<std::size_t>(N), 0.0);
    int levels = 0;
    while ((1LL << levels) < N) ++levels;
    detail::perron_merge(fam.shifts, fam.slopes, 0, static_cast<std::size_t>(N), levels - 1);
    // Recenter shifts around zero to keep coordinates small.
    double mean = 0.0;
    for (double s : fam.shifts) mean += s;
    mean /= static_cast<double>(N);
    for (double& s : fam.shifts) s -= mean;
    return fam;
}

/// Rasterized |union| / sum |T_m| of the translated family at a fixed pixel
/// budget (raster x raster).  Both numerator and denominator are counted on
/// the same raster so the ratio is exactly 1 for a single tube.
inline double rasterized_overlap_ratio(const TubeFamily& fam, int raster = 2048) {
    double sigma_lo = 1e300, sigma_hi = -1e300;
    for (std::size_t m = 0; m < fam.shifts.size(); ++m) {
        for (double tau : {-1.0, 1.0}) {
            double c = fam.slopes[m] * tau + fam.shifts[m];
            sigma_lo = std::min(sigma_lo, c - 1.0);
            sigma_hi = std::max(sigma_hi, c + 1.0);
        }
    }
    const int W = raster, H = raster;
    std::uint64_t covered = 0, multiplicity = 0;
    for (int iy = 0; iy < H; ++iy) {
        double sigma = sigma_lo + (sigma_hi - sigma_lo) * (iy + 0.5) / H;
        for (int ix = 0; ix < W; ++ix) {
            double tau = -1.0 + 2.0 * (ix + 0.5) / W;
            int hits = 0;
            for (std::size_t m = 0; m < fam.shifts.size(); ++m) {
                double dev = sigma - fam.slopes[m] * tau - fam.shifts[m];
                if (dev > -1.0 && dev < 1.0) ++hits;
            }
            covered += hits > 0;
            multiplicity += static_cast<std::uint64_t>(hits);
        }
    }
    if (multiplicity == 0) throw Error("raster too coarse: no tube pixels");
    return static_cast<double>(covered) / static_cast<double>(multiplicity);
}

struct BesicovitchResult {
    TubeFamily family;
    double overlap_ratio = 1.0;
    // Shifts of the sheared boxes as (t_kappa, s_kappa) pairs in the
    // normalized geometry; t shifts are identically zero in this scheme.
    std::vector<std::pair<double, double>> shifts;
};

inline BesicovitchResult besicovitch_translations(long long N, int raster = 2048) {
    BesicovitchResult out;
    out.family = perron_tube_family(N);
    out.overlap_ratio = rasterized_overlap_ratio(out.family, raster);
    out.shifts.reserve(out.family.shifts.size());
    for (double s : out.family.shifts) out.shifts.emplace_back(0.0, s);
    return out;
}

}  // namespace rectext
