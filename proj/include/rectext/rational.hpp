#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <random>
#include <string>

#include "rectext/common.hpp"

namespace rectext {

// Exact arithmetic for all exponent algebra.  Floating point appears only in
// the numeric modules; identities on Lebesgue exponents must hold exactly.
using Rat = boost::rational<long long>;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Serialized form is always "num/den", e.g. "3/8", "5/1".
inline std::string rat_to_string(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s), 1);
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw Error("rational with zero denominator: " + s);
    return Rat(num, den);
}

inline Rat rat_abs(const Rat& r) { return r < Rat(0) ? -r : r; }

inline long long rat_floor(const Rat& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

inline long long rat_ceil(const Rat& r) { return -rat_floor(-r); }

// Uniform rational in [0,1] with denominator <= max_den; for property tests.
template <typename Rng>
Rat random_unit_rat(Rng& rng, long long max_den = 24) {
    std::uniform_int_distribution<long long> dend(1, max_den);
    long long den = dend(rng);
    std::uniform_int_distribution<long long> numd(0, den);
    return Rat(numd(rng), den);
}

}  // namespace rectext
