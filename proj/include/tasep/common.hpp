#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tasep {

using Site = std::int64_t;

/// Inclusive range of lattice sites [lo, hi]. Bonds are indexed by their left
/// site and run over [lo, hi-1]; bond x connects x -> x+1.
struct SiteRange {
    Site lo = 0;
    Site hi = 0;

    Site site_count() const { return hi - lo + 1; }
    Site bond_count() const { return hi - lo; }
    bool contains(Site x) const { return x >= lo && x <= hi; }
    bool operator==(const SiteRange&) const = default;
};

/// Seeds for the two independent randomness sources of a run: the initial
/// occupancy draw and the jump-event field. Coupled processes share both.
struct SeedPair {
    std::uint64_t init = 0;
    std::uint64_t field = 0;
};

[[noreturn]] inline void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

inline void require(bool cond, const char* msg) {
    if (!cond) fail(msg);
}

}  // namespace tasep
