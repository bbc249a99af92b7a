#pragma once

#include <iosfwd>
#include <optional>
#include <memory>
#include <vector>

#include "tasep/common.hpp"
#include "tasep/detail/chunked_stream.hpp"
#include "tasep/rng.hpp"

namespace tasep {

/// One jump arrow: at `time` the particle at site `bond` (if any) attempts to
/// move to `bond + 1`.
struct Event {
    double time = 0.0;
    Site bond = 0;

    bool operator==(const Event&) const = default;
};

/// The realization of the driving noise on a finite window: one rate-1
/// Poisson clock per bond, times in (0, horizon].
///
/// A sampled field stores no event list; events are regenerated on demand,
/// always in the same order, from per-bond streams keyed by (seed, bond).
/// Because streams depend on the absolute bond index only, enlarging the
/// window leaves the events of the bonds it already contained untouched.
/// Fields produced by time_shift or loaded from a file carry an explicit
/// event list instead.
class PoissonField {
  public:
    PoissonField(SiteRange window, double horizon, std::uint64_t seed);
    PoissonField(SiteRange window, double horizon, std::vector<Event> events);

    const SiteRange& window() const { return window_; }
    double horizon() const { return horizon_; }
    std::uint64_t seed() const { return seed_; }
    bool has_explicit_events() const { return explicit_ != nullptr; }
    const std::vector<Event>& explicit_events() const { return *explicit_; }

    /// Materialize the full time-ordered event list. Intended for small
    /// windows (tests, dumps, replay); large runs stream instead.
    std::vector<Event> events() const;

    /// The contiguous slice of events with time in (t0, t1].
    std::vector<Event> events_between(double t0, double t1) const;

  private:
    SiteRange window_;
    double horizon_;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const std::vector<Event>> explicit_;  // null for sampled fields
};

/// Sample the field on sites [window_lo, window_hi] (bonds window_lo to
/// window_hi - 1) up to `horizon`, deterministically from `seed`.
PoissonField sample_field(Site window_lo, Site window_hi, double horizon, std::uint64_t seed);

/// Events strictly after t, times re-based to start at 0, horizon reduced.
PoissonField time_shift(const PoissonField& field, double t);

/// Streams the field's events in time order (ties broken by bond index).
class EventStream {
  public:
    explicit EventStream(const PoissonField& field) {
        if (field.has_explicit_events()) {
            list_ = &field.explicit_events();
        } else {
            chunks_.emplace(field.window(), field.horizon(), field.seed());
        }
    }

    /// False once the field is exhausted.
    bool peek(Event& out) {
        if (list_) {
            if (pos_ >= list_->size()) return false;
            out = (*list_)[pos_];
            return true;
        }
        detail::ChunkedStream::Item item;
        if (!chunks_->peek(item)) return false;
        out = {item.time, item.bond};
        return true;
    }

    void pop() {
        if (list_) {
            ++pos_;
        } else {
            chunks_->pop();
        }
    }

    /// Apply fn(bond, time) to every event with time <= t_end, in order.
    template <class Fn>
    void drain_until(double t_end, Fn&& fn) {
        if (list_) {
            const auto& ev = *list_;
            while (pos_ < ev.size() && ev[pos_].time <= t_end) {
                fn(ev[pos_].bond, ev[pos_].time);
                ++pos_;
            }
            return;
        }
        chunks_->drain_until(t_end, fn);
    }

  private:
    const std::vector<Event>* list_ = nullptr;   // explicit mode
    std::size_t pos_ = 0;
    std::optional<detail::ChunkedStream> chunks_;  // sampled mode
};

/// Replay text format: a header line `# window_lo window_hi horizon`, then
/// one `bond time` pair per line with times at 17 significant digits.
void dump_events(const PoissonField& field, std::ostream& os);
PoissonField load_field(std::istream& is);

}  // namespace tasep
