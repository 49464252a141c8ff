#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rectext {

// Error taxonomy shared across the library.  Every failure mode callers are
// expected to handle gets its own type so tests can catch them precisely.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define RECTEXT_DEFINE_ERROR(NAME)                                   \
    class NAME : public Error {                                      \
      public:                                                        \
        explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
    }

RECTEXT_DEFINE_ERROR(NoRegime);
RECTEXT_DEFINE_ERROR(DegenerateLine);
RECTEXT_DEFINE_ERROR(InvalidBeta);
RECTEXT_DEFINE_ERROR(UnboundedDomain);
RECTEXT_DEFINE_ERROR(InfiniteSidelength);
RECTEXT_DEFINE_ERROR(EmptySlice);
RECTEXT_DEFINE_ERROR(NonOrthonormalBasis);
RECTEXT_DEFINE_ERROR(NotContained);
RECTEXT_DEFINE_ERROR(ResolutionTooCoarse);
RECTEXT_DEFINE_ERROR(AspectTooSmall);
RECTEXT_DEFINE_ERROR(GridTooCoarse);
RECTEXT_DEFINE_ERROR(RegimeMismatch);
RECTEXT_DEFINE_ERROR(NoFailureWitness);
RECTEXT_DEFINE_ERROR(IllConditioned);

#undef RECTEXT_DEFINE_ERROR

// Worker count for data-parallel loops.  RECTEXT_WORKERS overrides the
// hardware default; values < 1 are clamped to 1.
inline unsigned worker_count() {
    if (const char* env = std::getenv("RECTEXT_WORKERS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Static chunked parallel loop over [0, n).  fn must be safe to call
// concurrently for distinct indices; results are written by index so the
// merge order is deterministic.  The first worker exception is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

using MultiIndex = std::vector<int>;

inline int multi_index_order(const MultiIndex& alpha) {
    int s = 0;
    for (int a : alpha) s += a;
    return s;
}

// All multi-indices over `dim` axes with total order <= max_order,
// enumerated in increasing total order.
inline std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == dim) {
            out.push_back(cur);
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            cur[static_cast<std::size_t>(axis)] = a;
            rec(axis + 1, remaining - a);
        }
        cur[static_cast<std::size_t>(axis)] = 0;
    };
    for (int order = 0; order <= max_order; ++order) {
        std::vector<MultiIndex> level;
        MultiIndex c(static_cast<std::size_t>(dim), 0);
        std::function<void(int, int)> rec2 = [&](int axis, int remaining) {
            if (axis == dim - 1) {
                c[static_cast<std::size_t>(axis)] = remaining;
                level.push_back(c);
                return;
            }
            for (int a = remaining; a >= 0; --a) {
                c[static_cast<std::size_t>(axis)] = a;
                rec2(axis + 1, remaining - a);
            }
        };
        if (dim > 0) rec2(0, order);
        for (auto& m : level) out.push_back(std::move(m));
    }
    return out;
}

// FNV-1a, used to fingerprint experiment plans embedded in output artifacts.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace rectext
