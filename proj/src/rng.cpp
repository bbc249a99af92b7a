#include "tasep/rng.hpp"

#include <cassert>
#include <cmath>

namespace tasep::rng::detail {

namespace {

// Marsaglia-Tsang ziggurat constants for Exp(1) with 256 layers.
constexpr double kTail = 7.697117470131487;
constexpr double kLayerArea = 3.949659822581572e-3;

ZigguratTables build_tables() {
    ZigguratTables t{};
    t.x[0] = kLayerArea / std::exp(-kTail);  // base strip extends past the tail cut
    t.x[1] = kTail;
    for (int i = 2; i <= 255; ++i) {
        t.x[i] = -std::log(kLayerArea / t.x[i - 1] + std::exp(-t.x[i - 1]));
    }
    t.x[256] = 0.0;
    for (int i = 0; i <= 256; ++i) t.y[i] = std::exp(-t.x[i]);
    // The recursion must close the ziggurat at height 1.
    assert(std::abs(kLayerArea / t.x[255] + t.y[255] - 1.0) < 1e-9);
    t.y[256] = 1.0;
    return t;
}

}  // namespace

const ZigguratTables& exp_tables() noexcept {
    static const ZigguratTables tables = build_tables();
    return tables;
}

double exp_fallback(SplitMix& g, int layer, double x) noexcept {
    const ZigguratTables& t = exp_tables();
    if (layer == 0) {
        return kTail - std::log(g.next_open_unit());  // exact tail sample
    }
    double y = t.y[layer] + g.next_open_unit() * (t.y[layer + 1] - t.y[layer]);
    if (y < std::exp(-x)) return x;
    return -1.0;  // reject, caller retries
}

}  // namespace tasep::rng::detail
