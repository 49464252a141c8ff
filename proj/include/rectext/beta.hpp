#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/exponents.hpp"
#include "rectext/rational.hpp"

namespace rectext {

/// The profile of g_beta(xi) = sum |xi_i|^{beta_i}: partial heights
/// J_n = 1/beta_1 + ... + 1/beta_n, the height h with 1/h = J_d, and the
/// index n0 past which every exponent is subquadratic.
struct BetaProfile {
    std::vector<Rat> beta;  // sorted nonincreasing, all > 1
    std::vector<Rat> J;     // J[0..d]
    Rat height;
    long long n0 = 0;

    long long dim() const { return static_cast<long long>(beta.size()); }
};

inline BetaProfile make_beta_profile(std::vector<Rat> beta) {
    if (beta.empty()) throw InvalidBeta("empty profile");
    for (const Rat& b : beta)
        if (b <= Rat(1)) throw InvalidBeta("all beta entries must exceed 1");
    std::sort(beta.begin(), beta.end(), [](const Rat& a, const Rat& b) { return a > b; });
    BetaProfile p;
    p.beta = std::move(beta);
    p.J.resize(p.beta.size() + 1);
    p.J[0] = Rat(0);
    for (std::size_t i = 0; i < p.beta.size(); ++i) p.J[i + 1] = p.J[i] + Rat(1) / p.beta[i];
    p.height = Rat(1) / p.J.back();
    p.n0 = 0;
    for (std::size_t i = 0; i < p.beta.size(); ++i)
        if (p.beta[i] >= Rat(2)) p.n0 = static_cast<long long>(i) + 1;
    return p;
}

enum class Condition { none, i, ii, iii, iv };

inline std::string condition_name(Condition c) {
    switch (c) {
        case Condition::i: return "i";
        case Condition::ii: return "ii";
        case Condition::iii: return "iii";
        case Condition::iv: return "iv";
        default: return "none";
    }
}

struct ConditionDetail {
    bool holds = false;
    long long witness_n = -1;  // binding n when it holds, first failing n else
};

struct ConditionVerdict {
    Condition verdict = Condition::none;
    long long witness_n = -1;
    std::array<ConditionDetail, 4> details;  // indexed i..iv
};

/// Evaluates the four boundedness conditions verbatim, in exact arithmetic.
/// All n-quantifiers run over 0..d (0..d-1 where stated); strictness is as
/// printed.  Returns the first condition that holds, in the order i..iv.
inline ConditionVerdict condition_check(const BetaProfile& bp, const ExponentPair& pq) {
    const long long d = bp.dim();
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    ConditionVerdict out;

    // (i): q > p and q/p' >= 1 + 1/(J_n + (d-n)/2) for all n.  The binding n
    // minimizes J_n + (d-n)/2; the witness is the first failing n otherwise.
    {
        ConditionDetail det;
        det.holds = v < pq.inv_p;
        long long first_fail = -1, binding = 0;
        Rat best_denom = bp.J[0] + Rat(d, 2);
        for (long long n = 0; n <= d; ++n) {
            Rat denom = bp.J[n] + Rat(d - n, 2);
            if (denom < best_denom) {
                best_denom = denom;
                binding = n;
            }
            if (!(u >= (Rat(1) + Rat(1) / denom) * v) && first_fail < 0) first_fail = n;
        }
        if (first_fail >= 0) det.holds = false;
        det.witness_n = det.holds ? binding : first_fail;
        out.details[0] = det;
    }
    // (ii): q <= p and (1 + J_n + d - n)/q < J_n/p' + (d-n)/2 for all n.
    auto line_margin = [&](long long n) {
        return bp.J[n] * u + Rat(d - n, 2) - (Rat(1) + bp.J[n] + Rat(d - n)) * v;
    };
    {
        ConditionDetail det;
        det.holds = v >= pq.inv_p;
        long long first_fail = -1, binding = 0;
        Rat best = line_margin(0);
        for (long long n = 0; n <= d; ++n) {
            Rat m = line_margin(n);
            if (m < best) {
                best = m;
                binding = n;
            }
            if (!(m > Rat(0)) && first_fail < 0) first_fail = n;
        }
        if (first_fail >= 0) det.holds = false;
        det.witness_n = det.holds ? binding : first_fail;
        out.details[1] = det;
    }
    const bool on_height_line = (Rat(1) + bp.J[d]) * v == bp.J[d] * u;
    auto strict_below_d = [&]() {
        for (long long n = 0; n < d; ++n)
            if (!(line_margin(n) > Rat(0))) return n;
        return d;
    };
    // (iii): q = p, (1+J_d)/q = J_d/p', strict inequalities for n < d.
    {
        ConditionDetail det;
        long long first_fail = strict_below_d();
        det.holds = (v == pq.inv_p) && on_height_line && first_fail == d;
        det.witness_n = det.holds ? d : first_fail;
        out.details[2] = det;
    }
    // (iv): q <= p <= inf, (1+J_d)/q = J_d/p', strict inequalities for n < d.
    {
        ConditionDetail det;
        long long first_fail = strict_below_d();
        det.holds = (v >= pq.inv_p) && on_height_line && first_fail == d;
        det.witness_n = det.holds ? d : first_fail;
        out.details[3] = det;
    }

    static constexpr std::array<Condition, 4> order = {Condition::i, Condition::ii,
                                                       Condition::iii, Condition::iv};
    for (std::size_t idx = 0; idx < 4; ++idx) {
        if (out.details[idx].holds) {
            out.verdict = order[idx];
            out.witness_n = out.details[idx].witness_n;
            return out;
        }
    }
    return out;
}

/// Reformulation (ii'): q <= p < inf and
///   sum_i [(1-2/q) - (2/beta_i)(1/p'-1/q)]_+ < d(1-2/q) - 2/q.
inline bool condition_ii_prime(const BetaProfile& bp, const ExponentPair& pq) {
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    if (!(v >= pq.inv_p) || pq.inv_p == Rat(0)) return false;
    const Rat A = Rat(1) - Rat(2) * v;
    const Rat B = u - v;
    Rat lhs(0);
    for (const Rat& b : bp.beta) {
        Rat term = A - Rat(2) / b * B;
        if (term > Rat(0)) lhs += term;
    }
    return lhs < Rat(bp.dim()) * A - Rat(2) * v;
}

/// Reformulation (iv'): q <= p <= inf, every bracket positive, and the
/// height-line equation (1+J_d)/q = J_d/p'.
inline bool condition_iv_prime(const BetaProfile& bp, const ExponentPair& pq) {
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    if (!(v >= pq.inv_p)) return false;
    const Rat A = Rat(1) - Rat(2) * v;
    const Rat B = u - v;
    for (const Rat& b : bp.beta)
        if (!(A - Rat(2) / b * B > Rat(0))) return false;
    return (Rat(1) + bp.J[bp.dim()]) * v == bp.J[bp.dim()] * u;
}

// Both sides of the prefix-max identity
//   max_{0<=n<=N} [n(1-2/q) - 2 J_n (1/p'-1/q)] = sum_{i<=N} [(1-2/q) - (2/beta_i)(1/p'-1/q)]_+.
inline std::pair<Rat, Rat> prefix_max_identity(const BetaProfile& bp, const ExponentPair& pq,
                                               long long N) {
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    const Rat A = Rat(1) - Rat(2) * v;
    const Rat B = u - v;
    Rat lhs(0);
    for (long long n = 0; n <= N; ++n) {
        Rat val = Rat(n) * A - Rat(2) * bp.J[n] * B;
        if (val > lhs) lhs = val;
    }
    Rat rhs(0);
    for (long long i = 0; i < N; ++i) {
        Rat term = A - Rat(2) / bp.beta[i] * B;
        if (term > Rat(0)) rhs += term;
    }
    return {lhs, rhs};
}

struct BlockIndex {
    std::vector<long long> k;
    std::vector<std::size_t> sigma;  // permutation of 0..d-1
};

inline void validate_block_index(const BetaProfile& bp, const BlockIndex& bi) {
    const std::size_t d = bp.beta.size();
    if (bi.k.size() != d || bi.sigma.size() != d)
        throw Error("block index rank mismatch");
    for (long long kk : bi.k)
        if (kk < 1) throw Error("block index entries must be >= 1");
    for (std::size_t i = 0; i + 1 < d; ++i) {
        if (Rat(bi.k[bi.sigma[i]]) * bp.beta[bi.sigma[i]] <
            Rat(bi.k[bi.sigma[i + 1]]) * bp.beta[bi.sigma[i + 1]])
            throw RegimeMismatch("k is not ordered for this permutation");
    }
}

namespace detail {

// log2 of the dyadic-block operator norm bound; eps = 0 gives the matching
// lower-bound exponent (the unquantified gain factor is reported as 1).
inline Rat block_exponent(const BetaProfile& bp, const std::vector<long long>& k,
                          const std::vector<std::size_t>& sigma, const ExponentPair& pq,
                          const ScalingRegime& regime, const Rat& eps) {
    const long long d = bp.dim();
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    const Rat B = u - v;
    const Rat A = Rat(1) - Rat(2) * v;
    const long long j = regime.j;
    const Rat theta = regime.theta;
    auto kb = [&](long long i) {
        return Rat(k[sigma[static_cast<std::size_t>(i)]]) *
               bp.beta[sigma[static_cast<std::size_t>(i)]];
    };
    auto inv_beta = [&](long long i) {
        return Rat(1) / bp.beta[sigma[static_cast<std::size_t>(i)]];
    };
    const bool q_gt_p_form =
        regime.branch == Branch::q_gt_p || (regime.branch == Branch::q_gt_4 && v < pq.inv_p);
    Rat val(0);
    if (q_gt_p_form) {
        for (long long i = 0; i < j; ++i)
            val += Rat(-2) * Rat(k[sigma[static_cast<std::size_t>(i)]]);
        val += kb(j) * ((Rat(1) - theta) - Rat(2) * inv_beta(j));
        for (long long i = j + 1; i < d; ++i)
            val += kb(i) * (Rat(1) - Rat(2) * inv_beta(i));
        return B * val;
    }
    for (long long i = 0; i < j; ++i)
        val += Rat(-2) * Rat(k[sigma[static_cast<std::size_t>(i)]]) * B;
    val += kb(j) * ((Rat(1) - theta) * A - Rat(2) * inv_beta(j) * B + eps);
    for (long long i = j + 1; i < d; ++i)
        val += kb(i) * (A - Rat(2) * inv_beta(i) * B);
    val -= kb(d - 1) * eps;
    return val;
}

}  // namespace detail

inline Rat block_upper_exponent(const BetaProfile& bp, const BlockIndex& bi,
                                const ExponentPair& pq, const ScalingRegime& regime,
                                const Rat& eps) {
    validate_block_index(bp, bi);
    auto expected = scaling_regime(bp.dim(), pq);
    if (expected.j != regime.j || expected.theta != regime.theta ||
        expected.branch != regime.branch)
        throw RegimeMismatch("regime does not match the exponent pair");
    return detail::block_exponent(bp, bi.k, bi.sigma, pq, regime, eps);
}

inline Rat block_lower_exponent(const BetaProfile& bp, const BlockIndex& bi,
                                const ExponentPair& pq, const ScalingRegime& regime) {
    validate_block_index(bp, bi);
    auto expected = scaling_regime(bp.dim(), pq);
    if (expected.j != regime.j || expected.theta != regime.theta ||
        expected.branch != regime.branch)
        throw RegimeMismatch("regime does not match the exponent pair");
    return detail::block_exponent(bp, bi.k, bi.sigma, pq, regime, Rat(0));
}

enum class SumVerdict { converged, diverged, inconclusive };

struct DyadicSumResult {
    std::vector<double> partial_log2;  // cumulative log2 sums per outer shell
    SumVerdict verdict = SumVerdict::inconclusive;
    double total_log2 = 0.0;
};

/// Sums 2^{upper exponent} over k in K_beta^sigma with k_{sigma(1)} beta_{sigma(1)}
/// <= K_max, in the nested order (outer index first).  Coordinates with
/// beta_i = 2 are pinned to k_i = 1, matching the Galilean reduction.  All
/// accumulation is in log2 space.  Convergence: the tail over the last
/// doubling of K_max is < 1e-6 of the total; divergence: the total more than
/// doubles over the last doubling.
inline DyadicSumResult dyadic_sum(const BetaProfile& bp, const ExponentPair& pq,
                                  const std::vector<std::size_t>& sigma, const Rat& eps,
                                  long long K_max) {
    if (K_max > 200) throw Error("dyadic_sum: K_max capped at 200");
    const long long d = bp.dim();
    if (sigma.size() != static_cast<std::size_t>(d)) throw Error("dyadic_sum: sigma rank");
    ScalingRegime regime = scaling_regime(d, pq);

    std::vector<long long> k(static_cast<std::size_t>(d), 1);
    double running_max = -1e300;
    double running_sum = 0.0;  // sum of 2^{e - running_max}
    double half_log2 = -1e300;

    auto add_term = [&](double e) {
        if (e > running_max) {
            running_sum = running_sum * std::exp2(running_max - e) + 1.0;
            running_max = e;
        } else {
            running_sum += std::exp2(e - running_max);
        }
    };
    auto current_log2 = [&]() {
        return running_sum > 0.0 ? running_max + std::log2(running_sum) : -1e300;
    };

    std::function<void(long long)> recurse = [&](long long axis) {
        if (axis == d) {
            add_term(to_double(detail::block_exponent(bp, k, sigma, pq, regime, eps)));
            return;
        }
        const std::size_t ax = sigma[static_cast<std::size_t>(axis)];
        if (bp.beta[ax] == Rat(2)) {
            // pinned coordinate
            k[ax] = 1;
            if (axis > 0) {
                const std::size_t prev = sigma[static_cast<std::size_t>(axis - 1)];
                if (Rat(k[prev]) * bp.beta[prev] < Rat(2)) return;
            }
            recurse(axis + 1);
            return;
        }
        Rat cap = axis == 0 ? Rat(K_max)
                            : Rat(k[sigma[static_cast<std::size_t>(axis - 1)]]) *
                                  bp.beta[sigma[static_cast<std::size_t>(axis - 1)]];
        long long hi = rat_floor(cap / bp.beta[ax]);
        for (long long kk = 1; kk <= hi; ++kk) {
            k[ax] = kk;
            recurse(axis + 1);
        }
        k[ax] = 1;
    };

    DyadicSumResult out;
    const std::size_t ax0 = sigma[0];
    long long outer_hi = bp.beta[ax0] == Rat(2) ? 1 : rat_floor(Rat(K_max) / bp.beta[ax0]);
    if (outer_hi < 1) throw Error("dyadic_sum: K_max below the first shell");
    for (long long k1 = 1; k1 <= outer_hi; ++k1) {
        k[ax0] = k1;
        recurse(1);
        out.partial_log2.push_back(current_log2());
        if (Rat(k1) * bp.beta[ax0] <= Rat(K_max, 2)) half_log2 = current_log2();
    }
    out.total_log2 = current_log2();
    if (half_log2 > -1e299) {
        double ratio = std::exp2(half_log2 - out.total_log2);  // S(K/2)/S(K)
        if (1.0 - ratio < 1e-6)
            out.verdict = SumVerdict::converged;
        else if (out.total_log2 - half_log2 > 1.0)
            out.verdict = SumVerdict::diverged;
        else
            out.verdict = SumVerdict::inconclusive;
    }
    return out;
}

struct SigmaSum {
    std::vector<std::size_t> sigma;
    DyadicSumResult sum;
};

struct AllSigmaSums {
    std::vector<SigmaSum> per_sigma;
    bool truncated_to_identity = false;  // d > 4: only sorted order runs
    SumVerdict combined = SumVerdict::inconclusive;
};

/// Runs dyadic_sum for every permutation (exhaustively for d <= 4; beyond
/// that only the identity order runs and the result is flagged).  The
/// combined verdict is converged only if every wedge converges, diverged if
/// any wedge diverges.
inline AllSigmaSums dyadic_sum_all_permutations(const BetaProfile& bp, const ExponentPair& pq,
                                                const Rat& eps, long long K_max) {
    const std::size_t d = bp.beta.size();
    AllSigmaSums out;
    std::vector<std::size_t> sigma(d);
    for (std::size_t i = 0; i < d; ++i) sigma[i] = i;
    if (d > 4) {
        out.truncated_to_identity = true;
        out.per_sigma.push_back({sigma, dyadic_sum(bp, pq, sigma, eps, K_max)});
    } else {
        std::sort(sigma.begin(), sigma.end());
        do {
            out.per_sigma.push_back({sigma, dyadic_sum(bp, pq, sigma, eps, K_max)});
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    bool all_converged = true, any_diverged = false;
    for (const auto& s : out.per_sigma) {
        all_converged = all_converged && s.sum.verdict == SumVerdict::converged;
        any_diverged = any_diverged || s.sum.verdict == SumVerdict::diverged;
    }
    out.combined = any_diverged ? SumVerdict::diverged
                                : all_converged ? SumVerdict::converged
                                                : SumVerdict::inconclusive;
    return out;
}

namespace detail {

struct FailureWitness {
    long long n = 0;
    long long j = 0;
    Rat theta;
    bool q_gt_p = false;
};

inline FailureWitness failure_witness(const BetaProfile& bp, const ExponentPair& pq) {
    const long long d = bp.dim();
    if (condition_check(bp, pq).verdict != Condition::none)
        throw NoFailureWitness("a boundedness condition holds at this pair");
    if (!in_Td(d, pq))
        throw NoRegime("counterexample family targets pairs inside T_d");
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    FailureWitness w;
    w.q_gt_p = v < pq.inv_p;
    Rat j_plus_theta;
    if (w.q_gt_p) {
        Rat s = Rat(2) * v / (u - v);
        j_plus_theta = Rat(d) - s;
    } else {
        Rat q = Rat(1) / v;
        Rat s = Rat(2) / (q - Rat(2));
        j_plus_theta = Rat(d) - s;
    }
    if (j_plus_theta == Rat(0)) {
        w.j = 0;
        w.theta = Rat(0);
    } else {
        w.j = rat_ceil(j_plus_theta) - 1;
        w.theta = j_plus_theta - Rat(w.j);
    }
    const Rat A = Rat(1) - Rat(2) * v;
    const Rat B = u - v;
    bool found = false;
    Rat best_slope;
    if (w.q_gt_p) {
        for (long long n = 1; n <= d; ++n) {
            // q/p' < 1 + 1/(J_n + (d-n)/2)
            Rat denom = bp.J[n] + Rat(d - n, 2);
            if (!(u < (Rat(1) + Rat(1) / denom) * v)) continue;
            Rat slope = -(Rat(2) * bp.J[n] - (Rat(n) - j_plus_theta)) * B;
            if (!found || slope > best_slope) {
                found = true;
                best_slope = slope;
                w.n = n;
            }
        }
    } else {
        if ((Rat(1) + bp.J[d]) * v > bp.J[d] * u) {
            w.n = d;
            found = true;
        } else {
            for (long long n = 0; n < d; ++n) {
                Rat margin = bp.J[n] * u + Rat(d - n, 2) -
                             (Rat(1) + bp.J[n] + Rat(d - n)) * v;
                if (margin > Rat(0)) continue;  // (ii) strict holds at n
                Rat slope = -(Rat(2) * bp.J[n] * B - (Rat(n) - j_plus_theta) * A);
                if (!found || slope > best_slope) {
                    found = true;
                    best_slope = slope;
                    w.n = n;
                }
            }
        }
    }
    if (!found) throw NoFailureWitness("no failing index n");
    return w;
}

}  // namespace detail

/// Exact growth slope (per unit N) of the lower bound along the k~ family.
inline Rat counterexample_slope(const BetaProfile& bp, const ExponentPair& pq) {
    auto w = detail::failure_witness(bp, pq);
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    const Rat B = u - v;
    const Rat A = Rat(1) - Rat(2) * v;
    Rat jt = Rat(w.j) + w.theta;
    if (w.q_gt_p) return -(Rat(2) * bp.J[w.n] - (Rat(w.n) - jt)) * B;
    return -(Rat(2) * bp.J[w.n] * B - (Rat(w.n) - jt) * A);
}

/// log2 of the lower bound at k~(N) = (floor(N/beta_1), ..., floor(N/beta_n),
/// 1, ..., 1); a positive slope in N certifies unboundedness.
inline double counterexample_growth(const BetaProfile& bp, const ExponentPair& pq, long long N) {
    auto w = detail::failure_witness(bp, pq);
    const long long d = bp.dim();
    if (Rat(N) <= bp.beta[0]) throw Error("counterexample_growth: N must exceed beta_1");
    std::vector<long long> k(static_cast<std::size_t>(d), 1);
    for (long long i = 0; i < w.n; ++i)
        k[static_cast<std::size_t>(i)] = std::max<long long>(
            1, rat_floor(Rat(N) / bp.beta[static_cast<std::size_t>(i)]));
    std::vector<std::size_t> sigma(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
    ScalingRegime regime;
    regime.j = w.j;
    regime.theta = w.theta;
    regime.branch = w.q_gt_p ? Branch::q_gt_p : Branch::q_le_p;
    return to_double(detail::block_exponent(bp, k, sigma, pq, regime, Rat(0)));
}

// ---- Riesz diagram boundary -------------------------------------------------

struct RegionColumn {
    Rat inv_p;
    Rat inv_q_max;
    Condition binding = Condition::none;
    bool empty = false;
};

struct RegionVertex {
    long long n = 0;
    Rat p;
    bool on_boundary = false;
};

struct LineSlopeReport {
    long long n = 0;
    Rat derived;   // from the line equation in (1/p, 1/q) coordinates
    Rat alt_form;  // the alternative closed form; reported, not assumed
    bool agree = false;
};

struct Region {
    std::vector<RegionColumn> columns;
    std::vector<RegionVertex> vertices;
    std::vector<LineSlopeReport> slopes;
};

/// sup of 1/q over the strong-type region {(i) or (ii) or (iii)} in the
/// column 1/p = x, together with the binding condition; exact.
inline RegionColumn region_column(const BetaProfile& bp, const Rat& x) {
    const long long d = bp.dim();
    const Rat u = Rat(1) - x;
    RegionColumn col;
    col.inv_p = x;

    bool have = false;
    Rat vmax;
    Condition binding = Condition::none;

    // (i)-part: v <= u / r_n for all n, v < x strictly.
    {
        Rat cap;
        bool first = true;
        for (long long n = 0; n <= d; ++n) {
            Rat r = Rat(1) + Rat(1) / (bp.J[n] + Rat(d - n, 2));
            Rat bound = u / r;
            if (first || bound < cap) {
                cap = bound;
                first = false;
            }
        }
        Rat sup = std::min(cap, x);
        if (sup > Rat(0)) {
            vmax = sup;
            binding = Condition::i;
            have = true;
        }
    }
    // (ii)-part: v in [x, min_n w_n).
    {
        Rat wmin;
        bool first = true;
        for (long long n = 0; n <= d; ++n) {
            Rat w = (bp.J[n] * u + Rat(d - n, 2)) / (Rat(1) + bp.J[n] + Rat(d - n));
            if (first || w < wmin) {
                wmin = w;
                first = false;
            }
        }
        if (wmin > x && (!have || wmin > vmax)) {
            vmax = wmin;
            binding = Condition::ii;
            have = true;
        }
    }
    // (iii)-point at v = x.
    {
        ExponentPair diag(Rat(1) - u, x);
        auto cv = condition_check(bp, diag);
        if (cv.details[2].holds && (!have || x > vmax)) {
            vmax = x;
            binding = Condition::iii;
            have = true;
        }
    }
    if (!have) {
        col.empty = true;
        return col;
    }
    col.inv_q_max = vmax;
    col.binding = binding;
    return col;
}

inline Region region_boundary(const BetaProfile& bp, int resolution = 64) {
    if (resolution < 64) throw Error("region_boundary: resolution must be >= 64");
    const long long d = bp.dim();
    Region out;
    for (long long i = 1; i < resolution; ++i)
        out.columns.push_back(region_column(bp, Rat(i, resolution)));

    for (long long n = 0; n <= bp.n0; ++n) {
        RegionVertex vx;
        vx.n = n;
        vx.p = Rat(2) + Rat(1) / (bp.J[n] + Rat(d - n, 2));
        Rat x = Rat(1) / vx.p;
        RegionColumn col = region_column(bp, x);
        vx.on_boundary = !col.empty && col.inv_q_max == x;
        out.vertices.push_back(vx);
    }

    for (long long n = 0; n <= d; ++n) {
        LineSlopeReport rep;
        rep.n = n;
        rep.derived = bp.J[n] == Rat(0)
                          ? Rat(0)
                          : -bp.J[n] / (Rat(1) + bp.J[n] + Rat(d - n));
        rep.alt_form = bp.J[n] == Rat(0)
                           ? Rat(0)
                           : -bp.J[n] / (Rat(1) + (Rat(1) + Rat(d - n)) / bp.J[n]);
        rep.agree = rep.derived == rep.alt_form;
        out.slopes.push_back(rep);
    }
    return out;
}

}  // namespace rectext
