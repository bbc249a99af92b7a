#include "tasep/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tasep/rng.hpp"

namespace tasep {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_replicas(int n, int threads, const std::function<void(int)>& body) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

SeedPair replica_seeds(std::uint64_t master, int replica) {
    std::uint64_t base = rng::derive(rng::derive(master, rng::kReplicaStream),
                                     static_cast<std::uint64_t>(replica));
    return {rng::derive(base, 0x494e4954ULL), rng::derive(base, 0x4649454cULL)};
}

struct Geometry {
    SiteRange window;
    SiteRange safe;
    Site buffer = 0;
};

Geometry make_geometry(const ExperimentSpec& s) {
    Geometry g;
    g.buffer = static_cast<Site>(std::ceil(s.buffer_mult * s.horizon));
    g.safe = {-s.obs_halfwidth, s.obs_halfwidth};
    g.window = {g.safe.lo - g.buffer, g.safe.hi + g.buffer};
    return g;
}

Site max_set_extent(const std::vector<std::vector<Site>>& sets) {
    Site m = 0;
    for (const auto& set : sets) {
        for (Site x : set) m = std::max(m, static_cast<Site>(std::llabs(x)));
    }
    return m;
}

double max_macroscopic_extent(const ExperimentSpec& s) {
    double m = 0.0;
    for (double r : s.r_values) m = std::max(m, std::abs(r));
    for (const auto& [a, b] : s.intervals) m = std::max({m, std::abs(a), std::abs(b)});
    return m;
}

void check_density_field(double v, const char* what) {
    require(v >= 0.0 && v <= 1.0, (std::string(what) + " outside [0, 1]").c_str());
}

/// Fill per-scenario defaults and validate the result.
ExperimentSpec resolve(const ExperimentSpec& in) {
    ExperimentSpec s = in;
    require(s.horizon >= 0.0, "horizon must be nonnegative");
    require(s.replicas >= 2, "need at least two replicas");
    require(s.buffer_mult >= 1.0, "buffer multiplier must be at least 1");
    require(s.band > 0.0, "acceptance band must be positive");
    const bool hydro = s.scenario == Scenario::kRostFan || s.scenario == Scenario::kShock ||
                       s.scenario == Scenario::kLocalEquilibrium ||
                       s.scenario == Scenario::kDensityFields;
    require(s.horizon > 0.0 || hydro, "horizon must be positive for this scenario");
    if (s.epsilon == 0.0) {
        require(s.horizon > 0.0, "horizon must be positive when no scale is given");
        s.epsilon = 1.0 / s.horizon;
    }
    require(s.epsilon > 0.0, "scale must be positive");

    const double T = s.horizon;
    switch (s.scenario) {
        case Scenario::kRostFan:
            check_density_field(s.lambda, "lambda");
            check_density_field(s.rho, "rho");
            require(s.lambda > s.rho, "rarefaction requires lambda > rho");
            if (s.intervals.empty()) {
                s.intervals = {{-1.5, -1.0}, {-0.5, 0.5}, {0.2, 1.0}, {1.0, 1.5}};
            }
            if (s.r_values.empty()) s.r_values = {-0.5, 0.0, 0.5};
            if (s.correlation_sets.empty()) s.correlation_sets = {{0}, {0, 1}, {0, 2, 5}};
            break;
        case Scenario::kShock:
            check_density_field(s.lambda, "lambda");
            check_density_field(s.rho, "rho");
            require(s.lambda < s.rho, "shock requires lambda < rho");
            if (s.intervals.empty()) s.intervals = {{-1.0, -0.2}, {0.2, 1.0}};
            if (s.r_values.empty()) s.r_values = {-0.5, 0.5};
            if (s.correlation_sets.empty()) s.correlation_sets = {{0, 1}};
            break;
        case Scenario::kTaggedLln:
            check_density_field(s.rho, "rho");
            break;
        case Scenario::kFluxLln:
            check_density_field(s.rho, "rho");
            require(std::abs(s.line_speed) <= 1.5, "line speed out of range");
            break;
        case Scenario::kSecondClassIsolated:
            check_density_field(s.alpha, "alpha");
            break;
        case Scenario::kSecondClassTagged:
            check_density_field(s.lambda, "lambda");
            check_density_field(s.rho, "rho");
            require(s.lambda < s.rho, "tagged coupling requires lambda < rho");
            break;
        case Scenario::kLocalEquilibrium:
            check_density_field(s.lambda, "lambda");
            check_density_field(s.rho, "rho");
            if (s.r_values.empty()) s.r_values = {-0.5, 0.0, 0.5};
            if (s.correlation_sets.empty()) s.correlation_sets = {{0}, {0, 1}};
            break;
        case Scenario::kDensityFields:
            check_density_field(s.lambda, "lambda");
            check_density_field(s.rho, "rho");
            if (s.intervals.empty()) s.intervals = {{-1.0, 0.0}, {0.0, 1.0}};
            break;
        case Scenario::kPathwiseIdentities:
        case Scenario::kBufferAudit:
            break;
    }

    // local equilibrium is not expected to hold on the shock line; keep a
    // margin around it
    if ((s.scenario == Scenario::kShock || s.scenario == Scenario::kLocalEquilibrium) &&
        s.lambda < s.rho) {
        const double v = shock_speed({s.lambda, s.rho});
        for (double r : s.r_values) {
            require(std::abs(r - v) >= 0.1, "observation point too close to the shock line");
        }
    }

    if (s.obs_halfwidth == 0) {
        switch (s.scenario) {
            case Scenario::kTaggedLln: {
                const double mean_jumps = (1.0 - s.rho) * T;
                s.obs_halfwidth = static_cast<Site>(std::ceil(
                                      mean_jumps + 6.0 * std::sqrt(std::max(mean_jumps, 25.0)))) +
                                  25;
                break;
            }
            case Scenario::kFluxLln:
                s.obs_halfwidth = static_cast<Site>(std::ceil(std::abs(s.line_speed) * T)) + 25;
                break;
            case Scenario::kSecondClassIsolated:
            case Scenario::kSecondClassTagged: {
                const double speed = s.scenario == Scenario::kSecondClassIsolated
                                         ? std::abs(characteristic_speed(s.alpha))
                                         : std::abs(1.0 - s.lambda - s.rho);
                s.obs_halfwidth = static_cast<Site>(
                                      std::ceil(speed * T + 8.0 * std::pow(T, 2.0 / 3.0))) + 50;
                break;
            }
            case Scenario::kRostFan:
            case Scenario::kShock:
            case Scenario::kLocalEquilibrium:
            case Scenario::kDensityFields:
                s.obs_halfwidth =
                    static_cast<Site>(std::ceil(max_macroscopic_extent(s) / s.epsilon)) +
                    max_set_extent(s.correlation_sets) + 8;
                break;
            case Scenario::kPathwiseIdentities:
                s.obs_halfwidth = 250;
                break;
            case Scenario::kBufferAudit:
                s.obs_halfwidth = 1;
                break;
        }
    }
    require(s.obs_halfwidth > 0, "observation half-width must be positive");
    return s;
}

/// Run the per-replica body across all replicas and collect one value per
/// observable per replica, in replica order.
std::vector<std::vector<double>> collect(
    const ExperimentSpec& spec, std::size_t n_obs,
    const std::function<std::vector<double>(int, SeedPair)>& per_replica) {
    std::vector<std::vector<double>> by_replica(spec.replicas);
    parallel_replicas(spec.replicas, resolve_threads(spec.threads), [&](int rep) {
        by_replica[rep] = per_replica(rep, replica_seeds(spec.seed, rep));
        require(by_replica[rep].size() == n_obs, "observable count mismatch");
    });
    std::vector<std::vector<double>> by_obs(n_obs, std::vector<double>(spec.replicas));
    for (int rep = 0; rep < spec.replicas; ++rep) {
        for (std::size_t k = 0; k < n_obs; ++k) by_obs[k][rep] = by_replica[rep][k];
    }
    return by_obs;
}

void finalize(ObservableResult& o) {
    o.stats = replica_mean(o.values, o.target);
    if (!o.target) {
        o.pass = true;
        return;
    }
    switch (o.band_kind) {
        case ObservableResult::Band::kStdErrMult:
            if (o.stats.std_error == 0.0) {
                o.pass = o.stats.mean == *o.target;
            } else {
                o.pass = std::abs(o.stats.mean - *o.target) <= o.band * o.stats.std_error;
            }
            break;
        case ObservableResult::Band::kAbsolute:
            o.pass = std::abs(o.stats.mean - *o.target) <= o.band;
            break;
        case ObservableResult::Band::kExact:
            o.pass = true;
            for (double v : o.values) o.pass = o.pass && v == *o.target;
            break;
    }
}

void check_trajectory_in_safe(const TrackedTrajectory& traj, const SiteRange& safe) {
    for (const auto& [time, site] : traj.samples) {
        require(safe.contains(site), "tracked trajectory left the safe window");
    }
}

std::vector<ObservableResult> run_tagged_lln(const ExperimentSpec& s, const Geometry& g) {
    auto values = collect(s, 1, [&](int, SeedPair seeds) {
        PoissonField field = sample_field(g.window.lo, g.window.hi, s.horizon, seeds.field);
        Configuration cfg = force_particle_at_origin(
            init_product(ProfileSpec::constant(s.rho), g.window, seeds.init));
        Site pos = -g.window.lo;
        EventStream stream(field);
        evolve_inplace(cfg.data(), g.window.lo, stream, s.horizon, [&](Site i, double) {
            if (i == pos) pos = i + 1;
        });
        const Site x = g.window.lo + pos;
        require(g.safe.contains(x), "tagged particle left the safe window");
        return std::vector<double>{static_cast<double>(x) / s.horizon};
    });
    ObservableResult o;
    o.name = "tagged_speed";
    o.target = 1.0 - s.rho;
    o.band = s.band;
    o.values = std::move(values[0]);
    finalize(o);
    return {std::move(o)};
}

std::vector<ObservableResult> run_flux_lln(const ExperimentSpec& s, const Geometry& g) {
    auto values = collect(s, 1, [&](int, SeedPair seeds) {
        PoissonField field = sample_field(g.window.lo, g.window.hi, s.horizon, seeds.field);
        Configuration initial = init_product(ProfileSpec::constant(s.rho), g.window, seeds.init);
        Configuration cfg = initial;
        const Site lo = g.window.lo;
        const SiteRange w = g.window;
        std::uint8_t* occ = cfg.data();
        auto occ_at = [&](Site x) -> int { return w.contains(x) ? occ[x - lo] : 0; };
        const ObservationLine line = ObservationLine::moving(s.line_speed);
        FluxCounter counter(line);
        EventStream stream(field);
        stream.drain_until(s.horizon, [&](Site bond, double time) {
            counter.advance_line(time, occ_at);
            const Site i = bond - lo;
            if (occ[i] == 1 && occ[i + 1] == 0) {
                occ[i] = 0;
                occ[i + 1] = 1;
                counter.on_move(bond, bond + 1);
            }
        });
        counter.advance_line(s.horizon, occ_at);
        // the label-count route must agree exactly
        require(counter.count() == flux_by_labels(initial, cfg, line, s.horizon),
                "flux route mismatch");
        return std::vector<double>{static_cast<double>(counter.count()) / s.horizon};
    });
    ObservableResult o;
    o.name = "flux_rate[a=" + fmt_double(s.line_speed) + "]";
    o.target = s.rho * ((1.0 - s.rho) - s.line_speed);
    o.band = s.band;
    o.values = std::move(values[0]);
    finalize(o);
    return {std::move(o)};
}

std::vector<ObservableResult> run_second_class(const ExperimentSpec& s, const Geometry& g,
                                               bool isolated) {
    auto values = collect(s, 1, [&](int, SeedPair seeds) {
        SecondClassRun run = isolated
                                 ? isolated_second_class(s.alpha, g.window, s.horizon, seeds)
                                 : tagged_second_class(s.lambda, s.rho, g.window, s.horizon, seeds);
        check_trajectory_in_safe(run.trajectory, g.safe);
        return std::vector<double>{static_cast<double>(run.trajectory.position()) / s.horizon};
    });
    ObservableResult o;
    if (isolated) {
        o.name = "isolated_second_class_speed";
        o.target = characteristic_speed(s.alpha);
    } else {
        o.name = "tagged_second_class_speed";
        o.target = shock_speed({s.lambda, s.rho});
    }
    o.band = s.band;
    o.values = std::move(values[0]);
    finalize(o);
    return {std::move(o)};
}

std::string interval_name(double a, double b) {
    return "mass[" + fmt_double(a) + "," + fmt_double(b) + "]";
}

std::string correlation_name(double r, const std::vector<Site>& set) {
    std::string n = "fA[r=" + fmt_double(r) + ",A={";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) n += ",";
        n += std::to_string(set[i]);
    }
    return n + "}]";
}

/// Evolve the step initial condition and read density fields and local
/// correlations against the exact solution at macroscopic time eps * T.
std::vector<ObservableResult> run_hydrodynamics(const ExperimentSpec& s, const Geometry& g,
                                                bool with_masses, bool with_correlations) {
    const RiemannProblem problem{s.lambda, s.rho};
    const double macro_time = s.epsilon * s.horizon;
    const std::vector<std::pair<double, double>> intervals =
        with_masses ? s.intervals : std::vector<std::pair<double, double>>{};
    std::vector<std::pair<double, std::vector<Site>>> correlations;
    if (with_correlations) {
        for (double r : s.r_values) {
            for (const auto& set : s.correlation_sets) correlations.push_back({r, set});
        }
    }
    const std::size_t n_obs = intervals.size() + correlations.size();
    auto values = collect(s, n_obs, [&](int, SeedPair seeds) {
        Configuration cfg =
            init_product(ProfileSpec::step(s.lambda, s.rho), g.window, seeds.init);
        if (s.horizon > 0.0) {
            PoissonField field = sample_field(g.window.lo, g.window.hi, s.horizon, seeds.field);
            cfg = evolve(cfg, field, s.horizon);
        }
        std::vector<double> out;
        out.reserve(n_obs);
        for (const auto& [a, b] : intervals) {
            out.push_back(density_field(cfg, s.epsilon, a, b, g.safe));
        }
        for (const auto& [r, set] : correlations) {
            out.push_back(local_correlation(cfg, set, r / s.epsilon, g.safe));
        }
        return out;
    });
    std::vector<ObservableResult> obs;
    std::size_t k = 0;
    for (const auto& [a, b] : intervals) {
        ObservableResult o;
        o.name = interval_name(a, b);
        o.target = density_integral(problem, a, b, macro_time);
        o.band_kind = ObservableResult::Band::kAbsolute;
        o.band = 0.02;
        o.values = std::move(values[k++]);
        finalize(o);
        obs.push_back(std::move(o));
    }
    for (const auto& [r, set] : correlations) {
        ObservableResult o;
        o.name = correlation_name(r, set);
        o.target = std::pow(riemann_solution(problem, {r, macro_time}),
                            static_cast<double>(set.size()));
        o.band = s.band;
        o.values = std::move(values[k++]);
        finalize(o);
        obs.push_back(std::move(o));
    }
    return obs;
}

std::vector<ObservableResult> run_pathwise(const ExperimentSpec& s, const Geometry& g) {
    const auto& names = detail::pathwise_check_names();
    auto values = collect(s, names.size(), [&](int, SeedPair seeds) {
        auto counts = detail::run_pathwise_replica({g.window, g.safe, s.horizon}, seeds);
        std::vector<double> out;
        out.reserve(names.size());
        for (const auto& name : names) out.push_back(static_cast<double>(counts.at(name)));
        return out;
    });
    std::vector<ObservableResult> obs;
    for (std::size_t k = 0; k < names.size(); ++k) {
        ObservableResult o;
        o.name = "pathwise:" + names[k];
        o.target = 0.0;
        o.band_kind = ObservableResult::Band::kExact;
        o.band = 0.0;
        o.values = std::move(values[k]);
        finalize(o);
        obs.push_back(std::move(o));
    }
    return obs;
}

std::vector<ObservableResult> run_buffer_audit(const ExperimentSpec& s) {
    std::vector<ObservableResult> obs;
    for (const auto& [scenario, name] : scenario_names()) {
        if (scenario == Scenario::kBufferAudit) continue;
        ExperimentSpec base = default_spec(scenario);
        base.threads = s.threads;
        ExperimentSpec doubled = base;
        doubled.buffer_mult *= 2.0;
        ResultReport r1 = run(base);
        ResultReport r2 = run(doubled);
        ObservableResult o;
        o.name = "audit:" + name;
        o.target = 0.0;
        o.band_kind = ObservableResult::Band::kExact;
        o.band = 0.0;
        o.values.assign(base.replicas, 0.0);
        require(r1.observables.size() == r2.observables.size(), "audit report shape mismatch");
        for (std::size_t k = 0; k < r1.observables.size(); ++k) {
            for (int rep = 0; rep < base.replicas; ++rep) {
                if (r1.observables[k].values[rep] != r2.observables[k].values[rep]) {
                    o.values[rep] += 1.0;
                }
            }
        }
        finalize(o);
        obs.push_back(std::move(o));
    }
    return obs;
}

}  // namespace

const std::vector<std::pair<Scenario, std::string>>& scenario_names() {
    static const std::vector<std::pair<Scenario, std::string>> names = {
        {Scenario::kRostFan, "rost-fan"},
        {Scenario::kShock, "shock"},
        {Scenario::kTaggedLln, "tagged-lln"},
        {Scenario::kFluxLln, "flux-lln"},
        {Scenario::kSecondClassIsolated, "second-class-isolated"},
        {Scenario::kSecondClassTagged, "second-class-tagged"},
        {Scenario::kLocalEquilibrium, "local-equilibrium"},
        {Scenario::kDensityFields, "density-fields"},
        {Scenario::kPathwiseIdentities, "pathwise-identities"},
        {Scenario::kBufferAudit, "buffer-audit"},
    };
    return names;
}

std::string to_string(Scenario s) {
    for (const auto& [scenario, name] : scenario_names()) {
        if (scenario == s) return name;
    }
    fail("unknown scenario");
}

Scenario scenario_from_string(const std::string& name) {
    for (const auto& [scenario, n] : scenario_names()) {
        if (n == name) return scenario;
    }
    fail("unknown scenario: " + name);
}

ExperimentSpec default_spec(Scenario s) {
    ExperimentSpec spec;
    spec.scenario = s;
    switch (s) {
        case Scenario::kRostFan:
            spec.lambda = 1.0;
            spec.rho = 0.0;
            spec.horizon = 400.0;
            spec.replicas = 20;
            spec.seed = 1001;
            break;
        case Scenario::kShock:
            spec.lambda = 0.2;
            spec.rho = 0.8;
            spec.horizon = 300.0;
            spec.replicas = 40;
            spec.seed = 1002;
            break;
        case Scenario::kTaggedLln:
            spec.rho = 0.5;
            spec.horizon = 300.0;
            spec.replicas = 60;
            spec.seed = 1003;
            break;
        case Scenario::kFluxLln:
            spec.rho = 0.3;
            spec.line_speed = 0.5;
            spec.horizon = 300.0;
            spec.replicas = 60;
            spec.seed = 1004;
            break;
        case Scenario::kSecondClassIsolated:
            spec.alpha = 0.25;
            spec.horizon = 300.0;
            spec.replicas = 60;
            spec.seed = 1005;
            break;
        case Scenario::kSecondClassTagged:
            spec.lambda = 0.2;
            spec.rho = 0.8;
            spec.horizon = 300.0;
            spec.replicas = 60;
            spec.seed = 1006;
            break;
        case Scenario::kLocalEquilibrium:
            spec.lambda = 0.9;
            spec.rho = 0.1;
            spec.horizon = 300.0;
            spec.replicas = 100;
            spec.seed = 1007;
            break;
        case Scenario::kDensityFields:
            spec.lambda = 0.6;
            spec.rho = 0.3;
            spec.horizon = 300.0;
            spec.replicas = 40;
            spec.seed = 1008;
            break;
        case Scenario::kPathwiseIdentities:
            spec.horizon = 50.0;
            spec.obs_halfwidth = 250;
            spec.replicas = 100;
            spec.seed = 1009;
            break;
        case Scenario::kBufferAudit:
            spec.replicas = 2;
            spec.seed = 1010;
            break;
    }
    return spec;
}

ResultReport run(const ExperimentSpec& input) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec = resolve(input);
    Geometry g = make_geometry(spec);

    ResultReport report;
    report.spec = spec;
    report.window_lo = g.window.lo;
    report.window_hi = g.window.hi;
    report.safe_halfwidth = spec.obs_halfwidth;

    switch (spec.scenario) {
        case Scenario::kRostFan:
        case Scenario::kShock:
            report.observables = run_hydrodynamics(spec, g, true, true);
            break;
        case Scenario::kTaggedLln:
            report.observables = run_tagged_lln(spec, g);
            break;
        case Scenario::kFluxLln:
            report.observables = run_flux_lln(spec, g);
            break;
        case Scenario::kSecondClassIsolated:
            report.observables = run_second_class(spec, g, true);
            break;
        case Scenario::kSecondClassTagged:
            report.observables = run_second_class(spec, g, false);
            break;
        case Scenario::kLocalEquilibrium:
            report.observables = run_hydrodynamics(spec, g, false, true);
            break;
        case Scenario::kDensityFields:
            report.observables = run_hydrodynamics(spec, g, true, false);
            break;
        case Scenario::kPathwiseIdentities:
            report.observables = run_pathwise(spec, g);
            break;
        case Scenario::kBufferAudit:
            report.observables = run_buffer_audit(spec);
            break;
    }

    report.all_pass = true;
    for (const ObservableResult& o : report.observables) report.all_pass &= o.pass;
    if (spec.scenario != Scenario::kBufferAudit) {
        report.events = static_cast<std::uint64_t>(g.window.bond_count() * spec.horizon) *
                        static_cast<std::uint64_t>(spec.replicas);
    }
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string spec_to_config_text(const ExperimentSpec& s) {
    std::string out;
    out += "scenario=" + to_string(s.scenario) + "\n";
    out += "lambda=" + fmt_double(s.lambda) + "\n";
    out += "rho=" + fmt_double(s.rho) + "\n";
    out += "alpha=" + fmt_double(s.alpha) + "\n";
    out += "horizon=" + fmt_double(s.horizon) + "\n";
    out += "line_speed=" + fmt_double(s.line_speed) + "\n";
    out += "r=";
    for (std::size_t i = 0; i < s.r_values.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(s.r_values[i]);
    }
    out += "\nA=";
    for (std::size_t i = 0; i < s.correlation_sets.size(); ++i) {
        if (i) out += ";";
        for (std::size_t j = 0; j < s.correlation_sets[i].size(); ++j) {
            if (j) out += ",";
            out += std::to_string(s.correlation_sets[i][j]);
        }
    }
    out += "\nintervals=";
    for (std::size_t i = 0; i < s.intervals.size(); ++i) {
        if (i) out += ";";
        out += fmt_double(s.intervals[i].first) + ":" + fmt_double(s.intervals[i].second);
    }
    out += "\nepsilon=" + fmt_double(s.epsilon) + "\n";
    out += "obs_halfwidth=" + std::to_string(s.obs_halfwidth) + "\n";
    out += "buffer_mult=" + fmt_double(s.buffer_mult) + "\n";
    out += "replicas=" + std::to_string(s.replicas) + "\n";
    out += "seed=" + std::to_string(s.seed) + "\n";
    out += "threads=" + std::to_string(s.threads) + "\n";
    out += "band=" + fmt_double(s.band) + "\n";
    return out;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace

ExperimentSpec spec_from_config_text(const std::string& text) {
    // first find the scenario so remaining keys override its defaults
    ExperimentSpec s;
    bool have_scenario = false;
    for (const std::string& line : split(text, '\n')) {
        if (line.rfind("scenario=", 0) == 0) {
            s = default_spec(scenario_from_string(line.substr(9)));
            have_scenario = true;
        }
    }
    require(have_scenario, "config must name a scenario");
    for (const std::string& raw : split(text, '\n')) {
        if (raw.empty() || raw[0] == '#') continue;
        auto eq = raw.find('=');
        require(eq != std::string::npos, ("malformed config line: " + raw).c_str());
        const std::string key = raw.substr(0, eq);
        const std::string value = raw.substr(eq + 1);
        if (key == "scenario") {
            continue;
        } else if (key == "lambda") {
            s.lambda = std::stod(value);
        } else if (key == "rho") {
            s.rho = std::stod(value);
        } else if (key == "alpha") {
            s.alpha = std::stod(value);
        } else if (key == "horizon") {
            s.horizon = std::stod(value);
        } else if (key == "line_speed") {
            s.line_speed = std::stod(value);
        } else if (key == "r") {
            s.r_values.clear();
            if (!value.empty()) {
                for (const std::string& v : split(value, ',')) s.r_values.push_back(std::stod(v));
            }
        } else if (key == "A") {
            s.correlation_sets.clear();
            if (!value.empty()) {
                for (const std::string& set : split(value, ';')) {
                    std::vector<Site> sites;
                    for (const std::string& v : split(set, ',')) sites.push_back(std::stoll(v));
                    s.correlation_sets.push_back(std::move(sites));
                }
            }
        } else if (key == "intervals") {
            s.intervals.clear();
            if (!value.empty()) {
                for (const std::string& pair : split(value, ';')) {
                    auto ab = split(pair, ':');
                    require(ab.size() == 2, "interval must be a:b");
                    s.intervals.push_back({std::stod(ab[0]), std::stod(ab[1])});
                }
            }
        } else if (key == "epsilon") {
            s.epsilon = std::stod(value);
        } else if (key == "obs_halfwidth") {
            s.obs_halfwidth = std::stoll(value);
        } else if (key == "buffer_mult") {
            s.buffer_mult = std::stod(value);
        } else if (key == "replicas") {
            s.replicas = std::stoi(value);
        } else if (key == "seed") {
            s.seed = std::stoull(value);
        } else if (key == "threads") {
            s.threads = std::stoi(value);
        } else if (key == "band") {
            s.band = std::stod(value);
        } else {
            fail("unknown config key: " + key);
        }
    }
    return s;
}

namespace {

ordered_json spec_to_json(const ExperimentSpec& s) {
    ordered_json j;
    j["scenario"] = to_string(s.scenario);
    j["lambda"] = s.lambda;
    j["rho"] = s.rho;
    j["alpha"] = s.alpha;
    j["horizon"] = s.horizon;
    j["line_speed"] = s.line_speed;
    j["r"] = s.r_values;
    j["A"] = s.correlation_sets;
    ordered_json intervals = ordered_json::array();
    for (const auto& [a, b] : s.intervals) intervals.push_back({a, b});
    j["intervals"] = intervals;
    j["epsilon"] = s.epsilon;
    j["obs_halfwidth"] = s.obs_halfwidth;
    j["buffer_mult"] = s.buffer_mult;
    j["replicas"] = s.replicas;
    j["seed"] = s.seed;
    j["threads"] = s.threads;
    j["band"] = s.band;
    return j;
}

const char* band_kind_name(ObservableResult::Band b) {
    switch (b) {
        case ObservableResult::Band::kStdErrMult:
            return "stderr-multiple";
        case ObservableResult::Band::kAbsolute:
            return "absolute";
        case ObservableResult::Band::kExact:
            return "exact";
    }
    return "?";
}

ordered_json report_to_json(const ResultReport& r, bool with_timing) {
    ordered_json j;
    j["spec"] = spec_to_json(r.spec);
    j["window"] = {r.window_lo, r.window_hi};
    j["safe_halfwidth"] = r.safe_halfwidth;
    ordered_json obs = ordered_json::array();
    for (const ObservableResult& o : r.observables) {
        ordered_json jo;
        jo["name"] = o.name;
        if (o.target) {
            jo["target"] = *o.target;
        } else {
            jo["target"] = nullptr;
        }
        jo["band_kind"] = band_kind_name(o.band_kind);
        jo["band"] = o.band;
        jo["stats"] = {{"n", o.stats.n},
                       {"mean", o.stats.mean},
                       {"stddev", o.stats.stddev},
                       {"std_error", o.stats.std_error},
                       {"z", std::isfinite(o.stats.z) ? ordered_json(o.stats.z)
                                                      : ordered_json(nullptr)}};
        jo["pass"] = o.pass;
        jo["values"] = o.values;
        obs.push_back(std::move(jo));
    }
    j["observables"] = std::move(obs);
    j["all_pass"] = r.all_pass;
    if (with_timing) {
        j["timing"] = {{"wall_ms", r.wall_ms}, {"events_expected", r.events}};
    }
    return j;
}

}  // namespace

void emit_report(const ResultReport& report, ReportFormat format, std::ostream& os) {
    if (format == ReportFormat::kJson) {
        os << report_to_json(report, true).dump(2) << "\n";
        return;
    }
    os << "scenario,replica,observable,value,target,stderr,pass\n";
    const std::string scenario = to_string(report.spec.scenario);
    for (const ObservableResult& o : report.observables) {
        for (std::size_t rep = 0; rep < o.values.size(); ++rep) {
            os << scenario << "," << rep << "," << o.name << "," << fmt_double(o.values[rep])
               << "," << (o.target ? fmt_double(*o.target) : std::string()) << ","
               << fmt_double(o.stats.std_error) << "," << (o.pass ? 1 : 0) << "\n";
        }
    }
}

std::string canonical_report_text(const ResultReport& report) {
    return report_to_json(report, false).dump(2) + "\n";
}

}  // namespace tasep
