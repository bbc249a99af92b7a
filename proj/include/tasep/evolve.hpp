#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tasep/configuration.hpp"
#include "tasep/poisson_field.hpp"

namespace tasep {

/// Time-ordered positions of one tracked object: the initial entry plus one
/// entry per jump. Plain tagged particles move by +1 only; a second-class
/// particle may also step -1.
struct TrackedTrajectory {
    std::string label;
    std::vector<std::pair<double, Site>> samples;

    Site start() const { return samples.front().second; }
    Site position() const { return samples.back().second; }

    /// Position at time t (right-continuous: a jump at exactly t counts).
    Site position_at(double t) const {
        Site p = samples.front().second;
        for (const auto& [time, site] : samples) {
            if (time > t) break;
            p = site;
        }
        return p;
    }
};

/// The deterministic map (configuration, field realization, t) -> state at
/// time t: events with time <= t are applied in order, each moving a
/// particle across its bond when the destination is empty. Windows must
/// match; the window boundary is closed (no bonds leave it).
Configuration evolve(const Configuration& c, const PoissonField& field, double t);

/// Position of the particle with tag index i at time 0: tag 0 is the
/// rightmost particle at a site <= 0, positive tags count to the right,
/// negative to the left. Throws when no such particle exists in the window.
Site tag_position(const Configuration& c, std::int64_t tag);

/// evolve() while recording the full trajectory of each tagged particle.
std::pair<Configuration, std::vector<TrackedTrajectory>> evolve_traced(
    const Configuration& c, const PoissonField& field, double t,
    std::span<const std::int64_t> tags);

namespace detail {

inline void check_evolve_args(const Configuration& c, const PoissonField& field, double t) {
    require(c.window() == field.window(), "configuration and field windows differ");
    require(t >= 0.0 && t <= field.horizon(), "time outside [0, horizon]");
}

}  // namespace detail

/// Core loop shared by the plain, traced, and observable-collecting runs:
/// applies every event with time <= t and calls on_jump(rel_index, time)
/// after each swap, where rel_index is the bond offset from window().lo.
template <class OnJump>
void evolve_inplace(std::uint8_t* occ, Site window_lo, EventStream& stream, double t,
                    OnJump&& on_jump) {
    stream.drain_until(t, [&](Site bond, double time) {
        const Site i = bond - window_lo;
        if (occ[i] == 1 && occ[i + 1] == 0) {
            occ[i] = 0;
            occ[i + 1] = 1;
            on_jump(i, time);
        }
    });
}

}  // namespace tasep
