#include "tasep/poisson_field.hpp"

#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <sstream>
#include <vector>

#include "tasep/rng.hpp"

using namespace tasep;

TEST_CASE("sampling is deterministic and validated") {
    PoissonField f1 = sample_field(0, 1000, 100.0, 7);
    PoissonField f2 = sample_field(0, 1000, 100.0, 7);
    auto e1 = f1.events();
    auto e2 = f2.events();
    REQUIRE(e1.size() == e2.size());
    CHECK(e1 == e2);
    CHECK(e1.size() > 0);

    PoissonField other = sample_field(0, 1000, 100.0, 8);
    CHECK(other.events() != e1);

    CHECK_THROWS_AS(sample_field(3, 3, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_field(0, 5, 0.0, 0), std::invalid_argument);
}

TEST_CASE("event list is ordered, in range, and within the horizon") {
    PoissonField f = sample_field(-50, 50, 20.0, 123);
    auto events = f.events();
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i].time > 0.0);
        CHECK(events[i].time <= 20.0);
        CHECK(events[i].bond >= -50);
        CHECK(events[i].bond < 50);
        if (i > 0) {
            bool ordered = events[i - 1].time < events[i].time ||
                           (events[i - 1].time == events[i].time &&
                            events[i - 1].bond < events[i].bond);
            CHECK(ordered);
        }
    }
}

TEST_CASE("total event count matches the Poisson mean within 5 sigma") {
    PoissonField f = sample_field(0, 10000, 1000.0, 2024);
    double n = static_cast<double>(f.events().size());
    CHECK(std::abs(n - 1e7) < 5.0 * std::sqrt(1e7));
}

TEST_CASE("small-horizon hit probability matches the Poisson expansion") {
    const double horizon = 2e-3;
    const int replicas = 100000;
    int hits = 0;
    for (int rep = 0; rep < replicas; ++rep) {
        PoissonField f = sample_field(0, 5, horizon, rng::derive(99, rep));
        if (!f.events().empty()) ++hits;
    }
    double p_hat = static_cast<double>(hits) / replicas;
    double p = 5.0 * horizon;  // first-order expansion of 1 - exp(-5h)
    double sigma = std::sqrt(p * (1.0 - p) / replicas);
    CHECK(std::abs(p_hat - p) < 5.0 * sigma + (p - (1.0 - std::exp(-5.0 * horizon))));
}

TEST_CASE("per-bond gaps are Exp(1): Kolmogorov-Smirnov below the 1% critical value") {
    // pool inter-arrival times across many bonds of one long field
    PoissonField f = sample_field(0, 100, 1000.0, 5);
    std::vector<double> last(100, 0.0);
    std::vector<double> gaps;
    for (const Event& e : f.events()) {
        gaps.push_back(e.time - last[e.bond]);
        last[e.bond] = e.time;
    }
    REQUIRE(gaps.size() > 99000);
    gaps.resize(100000);
    std::sort(gaps.begin(), gaps.end());
    double n = static_cast<double>(gaps.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        double cdf = 1.0 - std::exp(-gaps[i]);
        dmax = std::max(dmax, std::abs(cdf - static_cast<double>(i) / n));
        dmax = std::max(dmax, std::abs(cdf - static_cast<double>(i + 1) / n));
    }
    CHECK(dmax < 1.628 / std::sqrt(n));
}

TEST_CASE("counts on disjoint bonds are uncorrelated") {
    const int replicas = 10000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int rep = 0; rep < replicas; ++rep) {
        PoissonField f = sample_field(0, 2, 8.0, rng::derive(31337, rep));
        double x = 0, y = 0;
        for (const Event& e : f.events()) (e.bond == 0 ? x : y) += 1.0;
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    double n = replicas;
    double cov = sxy / n - (sx / n) * (sy / n);
    double vx = sxx / n - (sx / n) * (sx / n);
    double vy = syy / n - (sy / n) * (sy / n);
    double corr = cov / std::sqrt(vx * vy);
    CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("enlarging the window preserves the streams of existing bonds") {
    PoissonField narrow = sample_field(-20, 20, 50.0, 99);
    PoissonField wide = sample_field(-200, 200, 50.0, 99);
    std::vector<Event> filtered;
    for (const Event& e : wide.events()) {
        if (e.bond >= -20 && e.bond < 20) filtered.push_back(e);
    }
    CHECK(filtered == narrow.events());
}

TEST_CASE("slicing partitions reassemble the full list") {
    PoissonField f = sample_field(0, 30, 10.0, 4242);
    auto full = f.events();
    std::vector<Event> glued;
    double cuts[] = {0.0, 1.7, 3.1415, 3.1415, 7.0, 10.0};
    for (int i = 0; i + 1 < 6; ++i) {
        auto part = f.events_between(cuts[i], cuts[i + 1]);
        glued.insert(glued.end(), part.begin(), part.end());
    }
    CHECK(glued == full);
    CHECK(f.events_between(2.0, 2.0).empty());
    CHECK(f.events_between(0.0, 10.0) == full);
    CHECK_THROWS_AS(f.events_between(5.0, 1.0), std::invalid_argument);
}

TEST_CASE("events_between respects the half-open convention") {
    PoissonField f({0, 10}, 1.0,
                   std::vector<Event>{{0.1, 3}, {0.5, 5}, {0.9, 7}});
    auto slice = f.events_between(0.1, 0.9);
    REQUIRE(slice.size() == 2);
    CHECK(slice[0] == Event{0.5, 5});
    CHECK(slice[1] == Event{0.9, 7});
}

TEST_CASE("time_shift re-bases, composes, and validates") {
    PoissonField f({0, 10}, 2.0, std::vector<Event>{{0.4, 3}, {1.2, 5}});
    SUBCASE("identity shift") {
        PoissonField s = time_shift(f, 0.0);
        CHECK(s.events() == f.events());
        CHECK(s.horizon() == f.horizon());
    }
    SUBCASE("example shift") {
        PoissonField s = time_shift(f, 1.0);
        auto ev = s.events();
        REQUIRE(ev.size() == 1);
        CHECK(ev[0].bond == 5);
        CHECK(ev[0].time == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(s.horizon() == doctest::Approx(1.0));
    }
    SUBCASE("semigroup on a sampled field") {
        PoissonField g = sample_field(0, 40, 8.0, 17);
        PoissonField once = time_shift(g, 3.0);
        PoissonField twice = time_shift(time_shift(g, 1.25), 1.75);
        auto a = once.events();
        auto b = twice.events();
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].bond == b[i].bond);
            CHECK(a[i].time == doctest::Approx(b[i].time).epsilon(1e-12));
        }
    }
    SUBCASE("out of range") {
        CHECK_THROWS_AS(time_shift(f, -0.5), std::invalid_argument);
        CHECK_THROWS_AS(time_shift(f, 2.5), std::invalid_argument);
    }
}

TEST_CASE("dump and load round-trip the event list exactly") {
    PoissonField f = sample_field(-8, 9, 6.0, 314);
    std::stringstream ss;
    dump_events(f, ss);
    PoissonField back = load_field(ss);
    CHECK(back.window() == f.window());
    CHECK(back.horizon() == f.horizon());
    CHECK(back.events() == f.events());
}

TEST_CASE("merged order equals a stable sort of the per-bond streams") {
    // brute-force oracle: draw each bond's arrivals directly and stable-sort
    struct Case { Site lo, hi; double horizon; std::uint64_t seed; };
    for (Case c : {Case{-7, 13, 30.0, 1}, Case{0, 2000, 3.0, 2}, Case{-500, 500, 11.0, 3}}) {
        std::vector<Event> expect;
        for (Site b = c.lo; b < c.hi; ++b) {
            rng::SplitMix g(rng::derive(rng::derive(c.seed, rng::kBondStream),
                                        static_cast<std::uint64_t>(b)));
            for (double t = rng::exponential(g); t <= c.horizon; t += rng::exponential(g)) {
                expect.push_back({t, b});
            }
        }
        std::stable_sort(expect.begin(), expect.end(), [](const Event& a, const Event& b) {
            return a.time < b.time || (a.time == b.time && a.bond < b.bond);
        });
        CHECK(sample_field(c.lo, c.hi, c.horizon, c.seed).events() == expect);
    }
}

TEST_CASE("ziggurat exponential sampler has the right moments") {
    rng::SplitMix g(555);
    const int n = 2000000;
    double sum = 0, sumsq = 0, mx = 0;
    for (int i = 0; i < n; ++i) {
        double x = rng::exponential(g);
        CHECK(x > 0.0);
        sum += x;
        sumsq += x * x;
        mx = std::max(mx, x);
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 1.0) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(8.0 / n));
    CHECK(mx > 7.7);  // tail layers are actually exercised
}
