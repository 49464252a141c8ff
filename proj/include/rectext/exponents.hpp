#pragma once

#include <string>
#include <vector>

#include "rectext/common.hpp"
#include "rectext/rational.hpp"

namespace rectext {

/// A Lebesgue exponent pair stored as (1/p, 1/q).  p = infinity is inv_p = 0.
struct ExponentPair {
    Rat inv_p;
    Rat inv_q;

    ExponentPair(Rat ip, Rat iq) : inv_p(ip), inv_q(iq) {
        if (inv_p < Rat(0) || inv_p > Rat(1) || inv_q < Rat(0) || inv_q > Rat(1))
            throw Error("ExponentPair components must lie in [0,1]");
    }

    // Convenience constructor from (p, q) themselves.
    static ExponentPair from_pq(const Rat& p, const Rat& q) {
        return ExponentPair(Rat(1) / p, Rat(1) / q);
    }

    Rat inv_p_dual() const { return Rat(1) - inv_p; }  // 1/p'
    bool q_gt_p() const { return inv_q < inv_p; }
    bool q_le_p() const { return inv_q >= inv_p; }
};

/// Hoelder conjugation on reciprocals: 1/p -> 1/p'.
inline Rat dual_exponent(const Rat& inv_p) {
    if (inv_p < Rat(0) || inv_p > Rat(1)) throw Error("dual_exponent: 1/p outside [0,1]");
    return Rat(1) - inv_p;
}

/// Membership in T_d: q > 2(d+1)/d strictly and q >= ((d+2)/d) p' non-strictly.
inline bool in_Td(long long d, const ExponentPair& pq) {
    if (d < 1) throw Error("in_Td: d must be >= 1");
    const Rat u = pq.inv_p_dual();  // 1/p'
    const Rat v = pq.inv_q;         // 1/q
    // q > 2(d+1)/d  <=>  1/q < d / (2(d+1))
    if (!(v < Rat(d, 2 * (d + 1)))) return false;
    // q >= ((d+2)/d) p'  <=>  (d+2)/q <= d/p'
    return Rat(d + 2) * v <= Rat(d) * u;
}

// Same but with both inequalities non-strict (closure of T_d).
inline bool in_Td_closure(long long d, const ExponentPair& pq) {
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    if (!(v <= Rat(d, 2 * (d + 1)))) return false;
    return Rat(d + 2) * v <= Rat(d) * u;
}

enum class Branch { q_gt_p, q_le_p, q_gt_4 };

inline std::string branch_name(Branch b) {
    switch (b) {
        case Branch::q_gt_p: return "q_gt_p";
        case Branch::q_le_p: return "q_le_p";
        default: return "q_gt_4";
    }
}

/// The scaling regime (j, theta) of an exponent pair.  On the q > p lines,
/// q = ((d-j-theta+2)/(d-j-theta)) p'; on q <= p, q = 2(d-j-theta+1)/(d-j-theta).
struct ScalingRegime {
    long long j = 0;
    Rat theta = Rat(0);
    Branch branch = Branch::q_gt_p;
};

// Branch selection, in priority order:
//   1. the critical line q = ((d+2)/d) p' (j + theta = 0) is labeled q_gt_p;
//   2. q > p with q > 4 and p >= (q/3)' is labeled q_gt_4 (j, theta still
//      recorded from the q > p line solve so round trips work);
//   3. remaining q > p pairs solve the q_gt_p line equation;
//   4. q <= p pairs solve the q_le_p equation (p = q lands here).
// Integer j + theta ties resolve to (j, theta = 1) except j + theta = 0.
inline ScalingRegime scaling_regime(long long d, const ExponentPair& pq) {
    if (d < 1) throw Error("scaling_regime: d must be >= 1");
    if (!in_Td_closure(d, pq))
        throw NoRegime("pair outside the closure of T_d");
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;

    auto split_tie = [](const Rat& j_plus_theta) {
        ScalingRegime r;
        if (j_plus_theta == Rat(0)) {
            r.j = 0;
            r.theta = Rat(0);
            return r;
        }
        long long c = rat_ceil(j_plus_theta);
        r.j = c - 1;                    // prefer theta in (0, 1]
        r.theta = j_plus_theta - Rat(r.j);
        return r;
    };

    // critical line: (d+2) v == d u
    if (Rat(d + 2) * v == Rat(d) * u) {
        ScalingRegime r;
        r.j = 0;
        r.theta = Rat(0);
        r.branch = Branch::q_gt_p;
        return r;
    }
    if (v < pq.inv_p) {  // q > p
        // s := d - j - theta solves (s+2)/s = q/p' = u/v, i.e. s = 2v/(u-v).
        if (u == v) throw NoRegime("q = p' degenerate on the q > p side");
        Rat s = Rat(2) * v / (u - v);
        Rat j_plus_theta = Rat(d) - s;
        if (j_plus_theta < Rat(0) || j_plus_theta > Rat(d))
            throw NoRegime("no (j, theta) solves the q > p line equation");
        ScalingRegime r = split_tie(j_plus_theta);
        if (r.j >= d) throw NoRegime("j out of range on the q > p side");
        // q > 4 and p >= (q/3)'  <=>  1/q < 1/4 and 3/q <= 1/p'
        r.branch = (v < Rat(1, 4) && Rat(3) * v <= u) ? Branch::q_gt_4 : Branch::q_gt_p;
        return r;
    }
    // q <= p: s = 2/(q-2), defined for q > 2 (guaranteed inside T_d closure).
    if (v >= Rat(1, 2) || v == Rat(0)) throw NoRegime("q <= 2 or q = p = infinity");
    Rat q = Rat(1) / v;
    Rat s = Rat(2) / (q - Rat(2));
    Rat j_plus_theta = Rat(d) - s;
    if (!(j_plus_theta > Rat(0))) throw NoRegime("q at or below 2(d+1)/d with q <= p");
    ScalingRegime r = split_tie(j_plus_theta);
    if (j_plus_theta > Rat(d - 1)) {
        // s < 1 means q > 4; with q <= p that always satisfies p >= (q/3)'.
        r.branch = Branch::q_gt_4;
    } else {
        // theta in (0,1], j in 0..d-2
        r.branch = Branch::q_le_p;
    }
    return r;
}

/// Predicted power of each sidelength in the operator-norm bound: the norm
/// scales like prod_i l_i^{e_i}.  The epsilon loss on (l_d / l_{j+1}) in the
/// q <= p branch is kept separate from e, never folded in.
struct PredictedExponents {
    std::vector<Rat> per_sidelength;
    Rat epsilon_slack = Rat(0);
    long long slack_numerator_axis = -1;    // l_d
    long long slack_denominator_axis = -1;  // l_{j+1}
};

inline PredictedExponents conjectured_exponents(long long d, const ExponentPair& pq,
                                                const Rat& eps = Rat(0)) {
    ScalingRegime r = scaling_regime(d, pq);
    const Rat u = pq.inv_p_dual();
    const Rat v = pq.inv_q;
    const Rat B = u - v;  // 1/p' - 1/q
    PredictedExponents out;
    out.per_sidelength.assign(static_cast<std::size_t>(d), Rat(0));
    switch (r.branch) {
        case Branch::q_gt_p: {
            for (long long i = 0; i < r.j; ++i) out.per_sidelength[i] = B;
            if (r.j < d) out.per_sidelength[r.j] = r.theta * B;
            break;
        }
        case Branch::q_le_p: {
            const Rat vol = v - pq.inv_p;     // 1/q - 1/p
            const Rat A = Rat(1) - Rat(2) * v;  // 1 - 2/q
            for (long long i = 0; i < d; ++i) out.per_sidelength[i] = vol;
            for (long long i = 0; i < r.j; ++i) out.per_sidelength[i] += A;
            out.per_sidelength[r.j] += r.theta * A;
            out.epsilon_slack = eps;
            out.slack_numerator_axis = d - 1;
            out.slack_denominator_axis = r.j;
            break;
        }
        case Branch::q_gt_4: {
            for (long long i = 0; i + 1 < d; ++i) out.per_sidelength[i] = B;
            // 1 - 3/q - 1/p
            out.per_sidelength[d - 1] = Rat(1) - Rat(3) * v - pq.inv_p;
            break;
        }
    }
    return out;
}

struct InterpolationIdentity {
    Rat nu;
    Rat lhs;
    Rat rhs;
};

// Convex combination of two pairs on the scaling lines
// q_i = ((d-j-i+2)/(d-j-i)) p_i' (i = 0,1); solves for the interpolated line
// parameter nu and evaluates both sides of nu (1/p_t' - 1/q_t) = t (1/p_1' - 1/q_1).
inline InterpolationIdentity interpolation_identity(long long d, long long j,
                                                    const ExponentPair& pq0,
                                                    const ExponentPair& pq1, const Rat& t) {
    if (t < Rat(0) || t > Rat(1)) throw Error("interpolation parameter outside [0,1]");
    auto on_line = [&](const ExponentPair& pq, long long i) {
        // (d-j-i) q = (d-j-i+2) p'  <=>  (d-j-i) (1/p') = (d-j-i+2) (1/q)
        Rat s = Rat(d - j - i);
        return s * pq.inv_p_dual() == (s + Rat(2)) * pq.inv_q;
    };
    if (!on_line(pq0, 0) || !on_line(pq1, 1))
        throw Error("interpolation endpoints are not on the expected scaling lines");
    const Rat ip = (Rat(1) - t) * pq0.inv_p + t * pq1.inv_p;
    const Rat iq = (Rat(1) - t) * pq0.inv_q + t * pq1.inv_q;
    const Rat u = Rat(1) - ip;
    if (u == iq) throw DegenerateLine("interpolated pair has q = p'");
    // nu from q_t = ((d-j-nu+2)/(d-j-nu)) p_t':  d-j-nu = 2 iq/(u - iq)
    const Rat nu = Rat(d - j) - Rat(2) * iq / (u - iq);
    if (Rat(d - j) - nu == Rat(0)) throw DegenerateLine("d - j - nu = 0");
    InterpolationIdentity out;
    out.nu = nu;
    out.lhs = nu * (u - iq);
    out.rhs = t * (pq1.inv_p_dual() - pq1.inv_q);
    return out;
}

}  // namespace rectext
