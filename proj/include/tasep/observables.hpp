#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "tasep/evolve.hpp"

namespace tasep {

/// A moving observation line y(t) with y(0) = 0: either constant speed
/// (y = speed * t) or an explicit step trajectory (integer positions).
class ObservationLine {
  public:
    static ObservationLine moving(double speed) {
        ObservationLine l;
        l.speed_ = speed;
        return l;
    }

    static ObservationLine from_trajectory(const TrackedTrajectory& traj) {
        require(!traj.samples.empty(), "empty trajectory");
        require(traj.samples.front() == std::pair<double, Site>{0.0, 0},
                "observation trajectory must start at the origin at time 0");
        ObservationLine l;
        l.steps_ = traj.samples;
        l.is_trajectory_ = true;
        return l;
    }

    bool is_trajectory() const { return is_trajectory_; }
    double speed() const { return speed_; }

    double position(double t) const {
        if (!is_trajectory_) return speed_ * t;
        Site p = 0;
        for (const auto& [time, site] : steps_) {
            if (time > t) break;
            p = site;
        }
        return static_cast<double>(p);
    }

    Site floor_at(double t) const {
        return static_cast<Site>(std::floor(position(t)));
    }

    /// Extremes of the position over [0, t].
    std::pair<double, double> range_until(double t) const {
        if (!is_trajectory_) {
            return {std::min(0.0, speed_ * t), std::max(0.0, speed_ * t)};
        }
        double lo = 0.0, hi = 0.0;
        for (const auto& [time, site] : steps_) {
            if (time > t) break;
            lo = std::min(lo, static_cast<double>(site));
            hi = std::max(hi, static_cast<double>(site));
        }
        return {lo, hi};
    }

  private:
    double speed_ = 0.0;
    std::vector<std::pair<double, Site>> steps_;
    bool is_trajectory_ = false;
};

/// Running net count of signed particle crossings of a moving line. Feed it
/// the line movements (against the pre-event occupancy) and the particle
/// moves; the order of the two at a shared event time does not change the
/// net count.
class FluxCounter {
  public:
    explicit FluxCounter(const ObservationLine& line) : line_(&line) {}

    /// Move the line to its floor at time s; occ_at(site) -> 0/1 evaluates
    /// the observed species in the current (pre-event) state.
    template <class OccAt>
    void advance_line(double s, OccAt&& occ_at) {
        const Site target = line_->floor_at(s);
        while (floor_ < target) {
            ++floor_;
            count_ -= occ_at(floor_);
        }
        while (floor_ > target) {
            count_ += occ_at(floor_);
            --floor_;
        }
    }

    /// A particle of the observed species moved from `from` to `to`.
    void on_move(Site from, Site to) {
        count_ += static_cast<long long>(to > floor_) - static_cast<long long>(from > floor_);
    }

    long long count() const { return count_; }

  private:
    const ObservationLine* line_;
    Site floor_ = 0;
    long long count_ = 0;
};

/// Net signed number of particles crossing the line up to time t, by direct
/// crossing counting along the evolution.
long long flux(const Configuration& initial, const PoissonField& field,
               const ObservationLine& line, double t);

/// The same flux from the initial and final configurations alone, through
/// the label-count formula: particles keep their order, so the k-th
/// particle from the left at time 0 is the k-th at time t; count the
/// initially-left labels now right of the line minus the initially-right
/// labels now at or left of it.
long long flux_by_labels(const Configuration& initial, const Configuration& final_cfg,
                         const ObservationLine& line, double t);

/// eps * sum of occupancies over sites x with a <= eps*x <= b.
double density_field(const Configuration& c, double eps, double a, double b,
                     std::optional<SiteRange> safe = std::nullopt);

/// Product of occupancies over the set A translated by `shift`:
/// prod_{x in A} occ(floor(x + shift)). Empty A gives 1.
int local_correlation(const Configuration& c, std::span<const Site> A, double shift,
                      std::optional<SiteRange> safe = std::nullopt);

struct ReplicaStatistics {
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double std_error = 0.0;
    std::optional<double> target;
    double z = 0.0;
};

/// Mean, sample standard deviation and standard error of replica values;
/// with a target also the z-score (0 when the spread is zero and the mean
/// hits the target exactly).
ReplicaStatistics replica_mean(std::span<const double> values,
                               std::optional<double> target = std::nullopt);

}  // namespace tasep
