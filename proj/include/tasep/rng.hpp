#pragma once

#include <cmath>
#include <cstdint>

namespace tasep::rng {

// Stream tags keep the randomness sources disjoint even when the user passes
// the same numeric seed for both: site streams and bond streams never collide.
inline constexpr std::uint64_t kSiteStream = 0x5349544553ULL;   // "SITES"
inline constexpr std::uint64_t kBondStream = 0x424f4e4453ULL;   // "BONDS"
inline constexpr std::uint64_t kReplicaStream = 0x5245504cULL;  // "REPL"

/// Finalizing 64-bit mixer (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Derive a child key from (key, stream). Used for the documented splitting
/// rule: per-bond and per-site streams are functions of the master key and
/// the absolute index only, so enlarging a window never perturbs the streams
/// of the indices it already contained.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t stream) noexcept {
    return mix64((key ^ 0x9e3779b97f4a7c15ULL) + 0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL));
}

/// Map a 64-bit word to a double in [0, 1).
constexpr double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// One-shot uniform in [0,1) attached to (key, index); no sequential state.
constexpr double unit_at(std::uint64_t key, std::int64_t index) noexcept {
    return to_unit(mix64(key + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index) + 0x1ULL));
}

/// Sequential splitmix64 generator; 16 bytes of state per stream.
class SplitMix {
  public:
    SplitMix() = default;
    explicit SplitMix(std::uint64_t key)
        : state_(mix64(key)), gamma_(mix64(key ^ 0x5851f42d4c957f2dULL) | 1ULL) {}

    std::uint64_t next() noexcept {
        state_ += gamma_;
        return mix64(state_);
    }

    /// Uniform in the open interval (0, 1).
    double next_open_unit() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_ = 0;
    std::uint64_t gamma_ = 0x9e3779b97f4a7c15ULL;
};

namespace detail {
struct ZigguratTables {
    double x[257];
    double y[257];
};
const ZigguratTables& exp_tables() noexcept;
double exp_fallback(SplitMix& g, int layer, double x1) noexcept;
}  // namespace detail

/// Exact Exp(1) sample via the ziggurat method; falls back to inversion in
/// the tail. Strictly positive.
inline double exponential(SplitMix& g) noexcept {
    const auto& t = detail::exp_tables();
    for (;;) {
        std::uint64_t u = g.next();
        int layer = static_cast<int>(u & 0xff);
        double x = to_unit(u) * t.x[layer];
        if (x < t.x[layer + 1]) return x + 0x1.0p-80;  // bulk of the mass
        double r = detail::exp_fallback(g, layer, x);
        if (r >= 0) return r + 0x1.0p-80;
    }
}

}  // namespace tasep::rng
