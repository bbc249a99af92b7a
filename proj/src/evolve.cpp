#include "tasep/evolve.hpp"

namespace tasep {

Configuration evolve(const Configuration& c, const PoissonField& field, double t) {
    detail::check_evolve_args(c, field, t);
    Configuration out = c;
    EventStream stream(field);
    evolve_inplace(out.data(), out.offset(), stream, t, [](Site, double) {});
    return out;
}

Site tag_position(const Configuration& c, std::int64_t tag) {
    const SiteRange w = c.window();
    Site anchor = w.lo - 1;
    for (Site x = std::min<Site>(0, w.hi); x >= w.lo; --x) {
        if (c.at(x) == 1) {
            anchor = x;
            break;
        }
    }
    require(anchor >= w.lo, "no particle at or left of the origin to anchor tag 0");
    if (tag == 0) return anchor;
    Site x = anchor;
    if (tag > 0) {
        for (std::int64_t k = 0; k < tag; ++k) {
            do {
                ++x;
                require(x <= w.hi, "tag index has no matching particle in the window");
            } while (c.at(x) == 0);
        }
    } else {
        for (std::int64_t k = 0; k > tag; --k) {
            do {
                --x;
                require(x >= w.lo, "tag index has no matching particle in the window");
            } while (c.at(x) == 0);
        }
    }
    return x;
}

std::pair<Configuration, std::vector<TrackedTrajectory>> evolve_traced(
    const Configuration& c, const PoissonField& field, double t,
    std::span<const std::int64_t> tags) {
    detail::check_evolve_args(c, field, t);
    Configuration out = c;
    const Site lo = out.offset();
    const std::size_t sites = static_cast<std::size_t>(out.site_count());

    std::vector<TrackedTrajectory> trajectories(tags.size());
    std::vector<std::int32_t> slot_at(sites, -1);
    for (std::size_t k = 0; k < tags.size(); ++k) {
        Site x = tag_position(out, tags[k]);
        trajectories[k].label = "particle[" + std::to_string(tags[k]) + "]";
        trajectories[k].samples.push_back({0.0, x});
        slot_at[static_cast<std::size_t>(x - lo)] = static_cast<std::int32_t>(k);
    }

    EventStream stream(field);
    evolve_inplace(out.data(), lo, stream, t, [&](Site i, double time) {
        std::int32_t slot = slot_at[i];
        if (slot >= 0) {
            slot_at[i] = -1;
            slot_at[i + 1] = slot;
            trajectories[slot].samples.push_back({time, lo + i + 1});
        }
    });
    return {std::move(out), std::move(trajectories)};
}

}  // namespace tasep
