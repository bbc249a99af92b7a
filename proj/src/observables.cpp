#include "tasep/observables.hpp"

#include <algorithm>
#include <limits>

namespace tasep {

namespace {

void check_line_inside(const ObservationLine& line, double t, const SiteRange& w) {
    // the crossing counter must see every site the line sweeps
    auto [lo, hi] = line.range_until(t);
    require(lo >= static_cast<double>(w.lo) && hi <= static_cast<double>(w.hi),
            "observation line leaves the window");
}

}  // namespace

long long flux(const Configuration& initial, const PoissonField& field,
               const ObservationLine& line, double t) {
    detail::check_evolve_args(initial, field, t);
    check_line_inside(line, t, initial.window());
    Configuration cfg = initial;
    const Site lo = cfg.offset();
    std::uint8_t* occ = cfg.data();
    const SiteRange w = cfg.window();
    auto occ_at = [&](Site x) -> int { return w.contains(x) ? occ[x - lo] : 0; };

    FluxCounter counter(line);
    EventStream stream(field);
    stream.drain_until(t, [&](Site bond, double time) {
        counter.advance_line(time, occ_at);
        const Site i = bond - lo;
        if (occ[i] == 1 && occ[i + 1] == 0) {
            occ[i] = 0;
            occ[i + 1] = 1;
            counter.on_move(bond, bond + 1);
        }
    });
    counter.advance_line(t, occ_at);
    return counter.count();
}

long long flux_by_labels(const Configuration& initial, const Configuration& final_cfg,
                         const ObservationLine& line, double t) {
    require(initial.window() == final_cfg.window(), "window mismatch");
    require(initial.particle_count() == final_cfg.particle_count(),
            "configurations must hold the same particles");
    const SiteRange w = initial.window();
    std::size_t left_starters = 0;  // particles initially at or left of the origin
    for (Site x = w.lo; x <= std::min<Site>(0, w.hi); ++x) left_starters += initial.at(x);
    const Site line_floor = line.floor_at(t);
    long long crossed_right = 0, crossed_left = 0;
    std::size_t k = 0;  // order is preserved: k-th particle stays k-th
    for (Site x = w.lo; x <= w.hi; ++x) {
        if (final_cfg.at(x) == 0) continue;
        if (k < left_starters) {
            crossed_right += x > line_floor;
        } else {
            crossed_left += x <= line_floor;
        }
        ++k;
    }
    return crossed_right - crossed_left;
}

double density_field(const Configuration& c, double eps, double a, double b,
                     std::optional<SiteRange> safe) {
    require(eps > 0.0, "scale must be positive");
    require(a <= b, "interval must satisfy a <= b");
    const SiteRange limit = safe.value_or(c.window());
    require(a / eps >= static_cast<double>(limit.lo) - 0.5 &&
                b / eps <= static_cast<double>(limit.hi) + 0.5,
            "interval leaves the safe window");
    const Site x_lo = static_cast<Site>(std::ceil(a / eps));
    const Site x_hi = static_cast<Site>(std::floor(b / eps));
    double sum = 0.0;
    for (Site x = x_lo; x <= x_hi; ++x) sum += c.at(x);
    return eps * sum;
}

int local_correlation(const Configuration& c, std::span<const Site> A, double shift,
                      std::optional<SiteRange> safe) {
    const SiteRange limit = safe.value_or(c.window());
    int prod = 1;
    for (Site x : A) {
        const Site y = static_cast<Site>(std::floor(static_cast<double>(x) + shift));
        require(limit.contains(y), "correlation site leaves the safe window");
        prod &= c.at(y);
    }
    return prod;
}

ReplicaStatistics replica_mean(std::span<const double> values, std::optional<double> target) {
    require(values.size() >= 2, "need at least two replicas");
    ReplicaStatistics s;
    s.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
    s.std_error = s.stddev / std::sqrt(static_cast<double>(s.n));
    s.target = target;
    if (target) {
        if (s.std_error > 0.0) {
            s.z = (s.mean - *target) / s.std_error;
        } else if (s.mean == *target) {
            s.z = 0.0;
        } else {
            s.z = s.mean > *target ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        }
    }
    return s;
}

}  // namespace tasep
