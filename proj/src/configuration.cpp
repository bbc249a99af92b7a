#include "tasep/configuration.hpp"

#include <algorithm>
#include <sstream>

#include "tasep/rng.hpp"

namespace tasep {

Configuration::Configuration(Site offset, std::vector<std::uint8_t> occupancy)
    : offset_(offset), occ_(std::move(occupancy)) {
    require(!occ_.empty(), "configuration must cover at least one site");
    for (std::uint8_t v : occ_) require(v <= 1, "occupancy values must be 0 or 1");
}

Configuration Configuration::zeros(SiteRange w) {
    require(w.lo <= w.hi, "empty site range");
    return Configuration(w.lo, std::vector<std::uint8_t>(static_cast<std::size_t>(w.site_count()), 0));
}

void Configuration::set(Site x, int value) {
    require(window().contains(x), "site outside configuration window");
    require(value == 0 || value == 1, "occupancy values must be 0 or 1");
    occ_[static_cast<std::size_t>(x - offset_)] = static_cast<std::uint8_t>(value);
}

Site Configuration::particle_count() const {
    Site n = 0;
    for (std::uint8_t v : occ_) n += v;
    return n;
}

bool Configuration::dominated_by(const Configuration& other) const {
    require(window() == other.window(), "window mismatch");
    for (std::size_t i = 0; i < occ_.size(); ++i) {
        if (occ_[i] > other.occ_[i]) return false;
    }
    return true;
}

std::string Configuration::to_text() const {
    std::string out = "# " + std::to_string(offset_) + "\n";
    for (std::uint8_t v : occ_) out += static_cast<char>('0' + v);
    out += '\n';
    return out;
}

Configuration Configuration::from_text(const std::string& text) {
    std::istringstream is(text);
    char hash = 0;
    Site offset = 0;
    is >> hash >> offset;
    require(hash == '#' && !is.fail(), "malformed offset header");
    std::string digits;
    is >> digits;
    require(!digits.empty(), "missing occupancy digits");
    std::vector<std::uint8_t> occ;
    occ.reserve(digits.size());
    for (char c : digits) {
        require(c == '0' || c == '1', "occupancy digits must be 0 or 1");
        occ.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Configuration(offset, std::move(occ));
}

ProfileSpec ProfileSpec::constant(double density) {
    ProfileSpec p;
    p.kind = Kind::Constant;
    p.density = density;
    return p;
}

ProfileSpec ProfileSpec::step(double left, double right) {
    ProfileSpec p;
    p.kind = Kind::Step;
    p.left = left;
    p.right = right;
    return p;
}

ProfileSpec ProfileSpec::profile(std::function<double(double)> u0, double mesh) {
    ProfileSpec p;
    p.kind = Kind::Profile;
    p.initial_density = std::move(u0);
    p.mesh = mesh;
    return p;
}

namespace {

void check_density(double u) {
    require(u >= 0.0 && u <= 1.0, "density outside [0, 1]");
}

}  // namespace

Configuration init_product(const ProfileSpec& profile, SiteRange window, std::uint64_t seed) {
    switch (profile.kind) {
        case ProfileSpec::Kind::Constant:
            check_density(profile.density);
            break;
        case ProfileSpec::Kind::Step:
            check_density(profile.left);
            check_density(profile.right);
            break;
        case ProfileSpec::Kind::Profile:
            require(static_cast<bool>(profile.initial_density), "missing density profile");
            require(profile.mesh > 0.0, "mesh must be positive");
            break;
    }
    Configuration c = Configuration::zeros(window);
    std::uint64_t site_key = rng::derive(seed, rng::kSiteStream);
    for (Site x = window.lo; x <= window.hi; ++x) {
        double p = 0.0;
        switch (profile.kind) {
            case ProfileSpec::Kind::Constant:
                p = profile.density;
                break;
            case ProfileSpec::Kind::Step:
                p = x <= 0 ? profile.left : profile.right;
                break;
            case ProfileSpec::Kind::Profile:
                p = profile.initial_density(profile.mesh * static_cast<double>(x));
                check_density(p);
                break;
        }
        if (rng::unit_at(site_key, x) < p) c.set(x, 1);
    }
    return c;
}

Configuration force_particle_at_origin(Configuration c) {
    require(c.window().contains(0), "origin outside window");
    c.set(0, 1);
    return c;
}

Configuration force_hole_at_origin(Configuration c) {
    require(c.window().contains(0), "origin outside window");
    c.set(0, 0);
    return c;
}

}  // namespace tasep
