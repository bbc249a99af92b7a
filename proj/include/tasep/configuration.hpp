#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tasep/common.hpp"

namespace tasep {

/// Occupancy configuration on a finite window of sites; values are 0 or 1.
class Configuration {
  public:
    Configuration() = default;
    Configuration(Site offset, std::vector<std::uint8_t> occupancy);

    static Configuration zeros(SiteRange w);

    SiteRange window() const {
        return {offset_, offset_ + static_cast<Site>(occ_.size()) - 1};
    }
    Site offset() const { return offset_; }
    Site site_count() const { return static_cast<Site>(occ_.size()); }

    int at(Site x) const {
        require(window().contains(x), "site outside configuration window");
        return occ_[static_cast<std::size_t>(x - offset_)];
    }
    void set(Site x, int value);

    const std::uint8_t* data() const { return occ_.data(); }
    std::uint8_t* data() { return occ_.data(); }

    Site particle_count() const;

    /// Sitewise order: this(x) <= other(x) for all x (windows must match).
    bool dominated_by(const Configuration& other) const;

    /// `# offset` header line followed by one 0/1 digit per site.
    std::string to_text() const;
    static Configuration from_text(const std::string& text);

    bool operator==(const Configuration&) const = default;

  private:
    Site offset_ = 0;
    std::vector<std::uint8_t> occ_;
};

/// Initial-density prescriptions: a constant density, a two-sided step
/// (left on x <= 0, right on x > 0), or an arbitrary macroscopic profile
/// sampled on mesh `mesh` (site x gets density u0(mesh * x)).
struct ProfileSpec {
    enum class Kind { Constant, Step, Profile };

    Kind kind = Kind::Constant;
    double density = 0.0;
    double left = 0.0;
    double right = 0.0;
    std::function<double(double)> initial_density;
    double mesh = 0.0;

    static ProfileSpec constant(double density);
    static ProfileSpec step(double left, double right);
    static ProfileSpec profile(std::function<double(double)> u0, double mesh);
};

/// Independent per-site Bernoulli draws: site x is occupied iff U(x) < p(x),
/// with U(x) a uniform derived from (seed, x) alone. Configurations drawn
/// with the same seed but different thresholds are coupled sitewise.
Configuration init_product(const ProfileSpec& profile, SiteRange window, std::uint64_t seed);

Configuration force_particle_at_origin(Configuration c);
Configuration force_hole_at_origin(Configuration c);

}  // namespace tasep
