#include "tasep/poisson_field.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace tasep {

namespace {

void check_window(const SiteRange& w) {
    require(w.lo < w.hi, "window must contain at least one bond");
}

}  // namespace

PoissonField::PoissonField(SiteRange window, double horizon, std::uint64_t seed)
    : window_(window), horizon_(horizon), seed_(seed) {
    check_window(window);
    require(horizon > 0.0, "horizon must be positive");
}

PoissonField::PoissonField(SiteRange window, double horizon, std::vector<Event> events)
    : window_(window), horizon_(horizon) {
    check_window(window);
    require(horizon >= 0.0, "horizon must be nonnegative");
    double prev = 0.0;
    for (const Event& e : events) {
        require(e.time > 0.0 && e.time <= horizon, "event time outside (0, horizon]");
        require(e.time >= prev, "events must be time-ordered");
        require(e.bond >= window.lo && e.bond < window.hi, "event bond outside window");
        prev = e.time;
    }
    explicit_ = std::make_shared<const std::vector<Event>>(std::move(events));
}

std::vector<Event> PoissonField::events() const {
    return events_between(0.0, horizon_);
}

std::vector<Event> PoissonField::events_between(double t0, double t1) const {
    require(t0 >= 0.0 && t0 <= t1 && t1 <= horizon_, "slice must satisfy 0 <= t0 <= t1 <= horizon");
    std::vector<Event> out;
    EventStream es(*this);
    Event e;
    while (es.peek(e) && e.time <= t1) {
        if (e.time > t0) out.push_back(e);
        es.pop();
    }
    return out;
}

PoissonField sample_field(Site window_lo, Site window_hi, double horizon, std::uint64_t seed) {
    return PoissonField({window_lo, window_hi}, horizon, seed);
}

PoissonField time_shift(const PoissonField& field, double t) {
    require(t >= 0.0 && t <= field.horizon(), "shift outside [0, horizon]");
    if (t == 0.0) return field;
    std::vector<Event> shifted;
    for (const Event& e : field.events_between(t, field.horizon())) {
        shifted.push_back({e.time - t, e.bond});
    }
    return PoissonField(field.window(), field.horizon() - t, std::move(shifted));
}

void dump_events(const PoissonField& field, std::ostream& os) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# %" PRId64 " %" PRId64 " %.17g\n",
                  static_cast<std::int64_t>(field.window().lo),
                  static_cast<std::int64_t>(field.window().hi), field.horizon());
    os << buf;
    for (const Event& e : field.events()) {
        std::snprintf(buf, sizeof buf, "%" PRId64 " %.17g\n", static_cast<std::int64_t>(e.bond),
                      e.time);
        os << buf;
    }
}

PoissonField load_field(std::istream& is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), "missing header line");
    std::istringstream header(line);
    char hash = 0;
    SiteRange w;
    double horizon = 0.0;
    header >> hash >> w.lo >> w.hi >> horizon;
    require(hash == '#' && !header.fail(), "malformed header line");
    std::vector<Event> events;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        Event e;
        row >> e.bond >> e.time;
        require(!row.fail(), "malformed event line");
        events.push_back(e);
    }
    return PoissonField(w, horizon, std::move(events));
}

}  // namespace tasep
