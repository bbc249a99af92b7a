#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tasep/evolve.hpp"

namespace tasep {

/// Per-site labels of a coupled ordered pair: 0 = hole, 1 = first-class
/// particle, 2 = second-class particle. At most one particle per site.
class TwoClassConfiguration {
  public:
    static constexpr std::uint8_t kHole = 0;
    static constexpr std::uint8_t kFirst = 1;
    static constexpr std::uint8_t kSecond = 2;

    TwoClassConfiguration() = default;
    TwoClassConfiguration(Site offset, std::vector<std::uint8_t> labels);

    static TwoClassConfiguration holes(SiteRange w);

    SiteRange window() const {
        return {offset_, offset_ + static_cast<Site>(labels_.size()) - 1};
    }
    Site offset() const { return offset_; }

    int at(Site x) const {
        require(window().contains(x), "site outside window");
        return labels_[static_cast<std::size_t>(x - offset_)];
    }
    void set(Site x, int label);

    const std::uint8_t* data() const { return labels_.data(); }
    std::uint8_t* data() { return labels_.data(); }

    /// The first-class occupancy (label 1 sites).
    Configuration first_class() const;
    /// The second-class occupancy (label 2 sites).
    Configuration second_class() const;
    /// Occupancy of all particles (labels 1 and 2 together).
    Configuration all_particles() const;

    std::optional<Site> rightmost_second_class() const;
    std::optional<Site> leftmost_second_class() const;

    /// `# offset` header plus one digit per site over {0, 1, 2}.
    std::string to_text() const;
    static TwoClassConfiguration from_text(const std::string& text);

    bool operator==(const TwoClassConfiguration&) const = default;

  private:
    Site offset_ = 0;
    std::vector<std::uint8_t> labels_;
};

/// Evolve both configurations through the same field realization.
std::pair<Configuration, Configuration> couple(const Configuration& c1, const Configuration& c2,
                                               const PoissonField& field, double t);

/// Label 1 where low has a particle, 2 where only high does; requires
/// low <= high sitewise.
TwoClassConfiguration two_class_from_pair(const Configuration& low, const Configuration& high);

/// Two-class dynamics: labels 1 and 2 move right into holes; a first-class
/// particle displaces a second-class neighbor (they swap); a second-class
/// particle never displaces a first-class one.
TwoClassConfiguration evolve_two_class(const TwoClassConfiguration& tc, const PoissonField& field,
                                       double t);

struct TrackedTwoClass {
    TwoClassConfiguration state;
    TrackedTrajectory trajectory;
};

/// evolve_two_class() while following one second-class label instance: it
/// advances on jumps into holes and steps left when a first-class particle
/// swaps onto its site.
TrackedTwoClass evolve_two_class_tracked(const TwoClassConfiguration& tc,
                                         const PoissonField& field, double t, Site tracked_site);

/// Remove particles strictly left of z.
Configuration cut(const Configuration& c, Site z);
/// Remove second-class labels strictly left of z; first-class labels stay.
TwoClassConfiguration cut(const TwoClassConfiguration& tc, Site z);

struct SecondClassRun {
    TrackedTrajectory trajectory;
    TwoClassConfiguration final_state;
};

/// A single second-class particle at the origin in a density-`density`
/// product background: the coupled pair differs only at the origin (hole
/// forced in the low marginal, particle in the high one).
SecondClassRun isolated_second_class(double density, SiteRange window, double horizon,
                                     SeedPair seeds);

/// Tagged second-class particle at the origin between coupled product
/// configurations at densities low_density < high_density sharing the same
/// uniforms and field.
SecondClassRun tagged_second_class(double low_density, double high_density, SiteRange window,
                                   double horizon, SeedPair seeds);

namespace detail {

enum class TwoClassMove { kRight, kSwap };

/// Shared two-class event loop. on_move(rel_index, time, kind, moved_label)
/// fires after each change: kRight moved `moved_label` from rel_index to
/// rel_index + 1; kSwap moved a first-class right and the second-class left.
template <class OnMove>
void evolve_two_class_inplace(std::uint8_t* lab, Site window_lo, EventStream& stream, double t,
                              OnMove&& on_move) {
    stream.drain_until(t, [&](Site bond, double time) {
        const Site i = bond - window_lo;
        const std::uint8_t a = lab[i];
        const std::uint8_t b = lab[i + 1];
        if (a != TwoClassConfiguration::kHole && b == TwoClassConfiguration::kHole) {
            lab[i] = TwoClassConfiguration::kHole;
            lab[i + 1] = a;
            on_move(i, time, TwoClassMove::kRight, a);
        } else if (a == TwoClassConfiguration::kFirst && b == TwoClassConfiguration::kSecond) {
            lab[i] = TwoClassConfiguration::kSecond;
            lab[i + 1] = TwoClassConfiguration::kFirst;
            on_move(i, time, TwoClassMove::kSwap, b);
        }
    });
}

}  // namespace detail

}  // namespace tasep
