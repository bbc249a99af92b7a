#include "tasep/multiclass.hpp"

#include <sstream>

#include "tasep/rng.hpp"

namespace tasep {

TwoClassConfiguration::TwoClassConfiguration(Site offset, std::vector<std::uint8_t> labels)
    : offset_(offset), labels_(std::move(labels)) {
    require(!labels_.empty(), "configuration must cover at least one site");
    for (std::uint8_t v : labels_) require(v <= 2, "labels must be 0, 1 or 2");
}

TwoClassConfiguration TwoClassConfiguration::holes(SiteRange w) {
    require(w.lo <= w.hi, "empty site range");
    return TwoClassConfiguration(
        w.lo, std::vector<std::uint8_t>(static_cast<std::size_t>(w.site_count()), kHole));
}

void TwoClassConfiguration::set(Site x, int label) {
    require(window().contains(x), "site outside window");
    require(label >= 0 && label <= 2, "labels must be 0, 1 or 2");
    labels_[static_cast<std::size_t>(x - offset_)] = static_cast<std::uint8_t>(label);
}

namespace {

Configuration marginal(const TwoClassConfiguration& tc, auto&& predicate) {
    Configuration c = Configuration::zeros(tc.window());
    const SiteRange w = tc.window();
    for (Site x = w.lo; x <= w.hi; ++x) {
        if (predicate(tc.at(x))) c.set(x, 1);
    }
    return c;
}

}  // namespace

Configuration TwoClassConfiguration::first_class() const {
    return marginal(*this, [](int l) { return l == kFirst; });
}

Configuration TwoClassConfiguration::second_class() const {
    return marginal(*this, [](int l) { return l == kSecond; });
}

Configuration TwoClassConfiguration::all_particles() const {
    return marginal(*this, [](int l) { return l != kHole; });
}

std::optional<Site> TwoClassConfiguration::rightmost_second_class() const {
    for (Site x = window().hi; x >= window().lo; --x) {
        if (at(x) == kSecond) return x;
    }
    return std::nullopt;
}

std::optional<Site> TwoClassConfiguration::leftmost_second_class() const {
    for (Site x = window().lo; x <= window().hi; ++x) {
        if (at(x) == kSecond) return x;
    }
    return std::nullopt;
}

std::string TwoClassConfiguration::to_text() const {
    std::string out = "# " + std::to_string(offset_) + "\n";
    for (std::uint8_t v : labels_) out += static_cast<char>('0' + v);
    out += '\n';
    return out;
}

TwoClassConfiguration TwoClassConfiguration::from_text(const std::string& text) {
    std::istringstream is(text);
    char hash = 0;
    Site offset = 0;
    is >> hash >> offset;
    require(hash == '#' && !is.fail(), "malformed offset header");
    std::string digits;
    is >> digits;
    require(!digits.empty(), "missing label digits");
    std::vector<std::uint8_t> labels;
    labels.reserve(digits.size());
    for (char c : digits) {
        require(c >= '0' && c <= '2', "label digits must be 0, 1 or 2");
        labels.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return TwoClassConfiguration(offset, std::move(labels));
}

std::pair<Configuration, Configuration> couple(const Configuration& c1, const Configuration& c2,
                                               const PoissonField& field, double t) {
    require(c1.window() == c2.window(), "coupled configurations must share a window");
    return {evolve(c1, field, t), evolve(c2, field, t)};
}

TwoClassConfiguration two_class_from_pair(const Configuration& low, const Configuration& high) {
    require(low.window() == high.window(), "window mismatch");
    require(low.dominated_by(high), "pair must be sitewise ordered (low <= high)");
    TwoClassConfiguration tc = TwoClassConfiguration::holes(low.window());
    const SiteRange w = low.window();
    for (Site x = w.lo; x <= w.hi; ++x) {
        if (low.at(x) == 1) {
            tc.set(x, TwoClassConfiguration::kFirst);
        } else if (high.at(x) == 1) {
            tc.set(x, TwoClassConfiguration::kSecond);
        }
    }
    return tc;
}

TwoClassConfiguration evolve_two_class(const TwoClassConfiguration& tc, const PoissonField& field,
                                       double t) {
    require(tc.window() == field.window(), "configuration and field windows differ");
    require(t >= 0.0 && t <= field.horizon(), "time outside [0, horizon]");
    TwoClassConfiguration out = tc;
    EventStream stream(field);
    detail::evolve_two_class_inplace(out.data(), out.offset(), stream, t,
                                     [](Site, double, detail::TwoClassMove, std::uint8_t) {});
    return out;
}

TrackedTwoClass evolve_two_class_tracked(const TwoClassConfiguration& tc,
                                         const PoissonField& field, double t, Site tracked_site) {
    require(tc.window() == field.window(), "configuration and field windows differ");
    require(t >= 0.0 && t <= field.horizon(), "time outside [0, horizon]");
    require(tc.at(tracked_site) == TwoClassConfiguration::kSecond,
            "tracked site must hold a second-class particle");
    TrackedTwoClass run;
    run.state = tc;
    run.trajectory.label = "second-class";
    run.trajectory.samples.push_back({0.0, tracked_site});

    Site pos = tracked_site - tc.offset();
    EventStream stream(field);
    detail::evolve_two_class_inplace(
        run.state.data(), tc.offset(), stream, t,
        [&](Site i, double time, detail::TwoClassMove kind, std::uint8_t moved) {
            if (kind == detail::TwoClassMove::kRight) {
                if (i == pos && moved == TwoClassConfiguration::kSecond) {
                    pos = i + 1;
                    run.trajectory.samples.push_back({time, tc.offset() + pos});
                }
            } else if (i + 1 == pos) {  // first-class swapped onto the tracked particle
                pos = i;
                run.trajectory.samples.push_back({time, tc.offset() + pos});
            }
        });
    return run;
}

Configuration cut(const Configuration& c, Site z) {
    Configuration out = c;
    const SiteRange w = c.window();
    for (Site x = w.lo; x < std::min(z, w.hi + 1); ++x) out.set(x, 0);
    return out;
}

TwoClassConfiguration cut(const TwoClassConfiguration& tc, Site z) {
    TwoClassConfiguration out = tc;
    const SiteRange w = tc.window();
    for (Site x = w.lo; x < std::min(z, w.hi + 1); ++x) {
        if (out.at(x) == TwoClassConfiguration::kSecond) out.set(x, TwoClassConfiguration::kHole);
    }
    return out;
}

namespace {

void check_density_arg(double u) {
    require(u >= 0.0 && u <= 1.0, "density outside [0, 1]");
}

// Background labels from the shared per-site uniforms, one tracked
// second-class particle forced at the origin.
TwoClassConfiguration seeded_labels(double low, double high, SiteRange window,
                                    std::uint64_t init_seed) {
    require(window.contains(0), "window must contain the origin");
    TwoClassConfiguration tc = TwoClassConfiguration::holes(window);
    const std::uint64_t site_key = rng::derive(init_seed, rng::kSiteStream);
    for (Site x = window.lo; x <= window.hi; ++x) {
        if (x == 0) {
            tc.set(x, TwoClassConfiguration::kSecond);
            continue;
        }
        double u = rng::unit_at(site_key, x);
        if (u < low) {
            tc.set(x, TwoClassConfiguration::kFirst);
        } else if (u < high) {
            tc.set(x, TwoClassConfiguration::kSecond);
        }
    }
    return tc;
}

SecondClassRun run_tracked(TwoClassConfiguration tc, SiteRange window, double horizon,
                           std::uint64_t field_seed) {
    PoissonField field = sample_field(window.lo, window.hi, horizon, field_seed);
    TrackedTwoClass out = evolve_two_class_tracked(tc, field, horizon, 0);
    return {std::move(out.trajectory), std::move(out.state)};
}

}  // namespace

SecondClassRun isolated_second_class(double density, SiteRange window, double horizon,
                                     SeedPair seeds) {
    check_density_arg(density);
    return run_tracked(seeded_labels(density, density, window, seeds.init), window, horizon,
                       seeds.field);
}

SecondClassRun tagged_second_class(double low_density, double high_density, SiteRange window,
                                   double horizon, SeedPair seeds) {
    check_density_arg(low_density);
    check_density_arg(high_density);
    require(low_density < high_density, "tagged coupling requires low_density < high_density");
    return run_tracked(seeded_labels(low_density, high_density, window, seeds.init), window,
                       horizon, seeds.field);
}

}  // namespace tasep
