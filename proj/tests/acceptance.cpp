// Acceptance suite: runs every acceptance criterion at full scale and
// prints one PASS/FAIL line per criterion. Exit status is nonzero when any
// criterion fails. `--criterion N[,M...]` selects a subset, `--threads K`
// overrides the worker count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "tasep/experiments.hpp"
#include "tasep/rng.hpp"

using namespace tasep;

namespace {

int g_threads = 0;
bool g_all_pass = true;

struct Line {
    bool pass = true;
    std::string detail;

    void note(bool ok, const std::string& msg) {
        pass = pass && ok;
        if (!ok) detail += (detail.empty() ? "" : "; ") + msg;
    }
};

void report(int id, const char* title, const Line& line, double seconds) {
    std::printf("%s  criterion %2d: %s (%.1f s)%s%s\n", line.pass ? "PASS" : "FAIL", id, title,
                seconds, line.detail.empty() ? "" : " -- ", line.detail.c_str());
    std::fflush(stdout);
    g_all_pass = g_all_pass && line.pass;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ResultReport run_with_threads(ExperimentSpec spec) {
    spec.threads = g_threads;
    return run(spec);
}

// ---- 1: exact pathwise identity suite ---------------------------------
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec = default_spec(Scenario::kPathwiseIdentities);
    spec.horizon = 50.0;
    spec.obs_halfwidth = 250;  // window reaches +-400 with the buffer
    spec.replicas = 1000;
    spec.seed = 42001;
    ResultReport r = run_with_threads(spec);
    Line line;
    for (const auto& o : r.observables) {
        long long total = 0;
        for (double v : o.values) total += static_cast<long long>(v);
        line.note(o.pass && total == 0, o.name + " violations=" + std::to_string(total));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, "pathwise identity suite, 1000 replicas, zero tolerance", line, secs);
}

// ---- 2: tagged-particle law of large numbers ---------------------------
void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    Line line;
    for (double rho : {0.3, 0.5, 0.7}) {
        ExperimentSpec spec = default_spec(Scenario::kTaggedLln);
        spec.rho = rho;
        spec.horizon = 2000.0;
        spec.replicas = 200;
        spec.seed = 42002 + static_cast<std::uint64_t>(rho * 10);
        ResultReport r = run_with_threads(spec);
        const auto& o = r.observables[0];
        bool ok = o.pass && o.stats.std_error < 0.01;
        line.note(ok, "rho=" + fmt(rho) + " mean=" + fmt(o.stats.mean) + " target=" +
                          fmt(*o.target) + " stderr=" + fmt(o.stats.std_error));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(2, "tagged-particle speed 1-rho within 5 stderr, stderr < 0.01", line, secs);
}

// ---- 3: flux law of large numbers --------------------------------------
void criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    Line line;
    for (double rho : {0.3, 0.7}) {
        for (double a : {-0.5, 0.0, 0.5}) {
            ExperimentSpec spec = default_spec(Scenario::kFluxLln);
            spec.rho = rho;
            spec.line_speed = a;
            spec.horizon = 2000.0;
            spec.replicas = 200;
            spec.seed = 42030 + static_cast<std::uint64_t>(rho * 10 + (a + 1) * 100);
            ResultReport r = run_with_threads(spec);
            const auto& o = r.observables[0];
            line.note(o.pass, "rho=" + fmt(rho) + ",a=" + fmt(a) + " mean=" + fmt(o.stats.mean) +
                                  " target=" + fmt(*o.target));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(3, "flux rate rho[(1-rho)-a] within 5 stderr", line, secs);
}

// ---- 4: second-class particle laws of large numbers ---------------------
void criterion_4() {
    auto t0 = std::chrono::steady_clock::now();
    Line line;
    for (double alpha : {0.25, 0.5, 0.75}) {
        ExperimentSpec spec = default_spec(Scenario::kSecondClassIsolated);
        spec.alpha = alpha;
        spec.horizon = 2000.0;
        spec.replicas = 200;
        spec.seed = 42040 + static_cast<std::uint64_t>(alpha * 100);
        ResultReport r = run_with_threads(spec);
        const auto& o = r.observables[0];
        bool ok = o.pass && o.stats.std_error < 0.015;
        line.note(ok, "alpha=" + fmt(alpha) + " mean=" + fmt(o.stats.mean) + " target=" +
                          fmt(*o.target) + " stderr=" + fmt(o.stats.std_error));
    }
    for (auto [lambda, rho] : {std::pair{0.2, 0.8}, std::pair{0.1, 0.5}}) {
        ExperimentSpec spec = default_spec(Scenario::kSecondClassTagged);
        spec.lambda = lambda;
        spec.rho = rho;
        spec.horizon = 2000.0;
        spec.replicas = 200;
        spec.seed = 42050 + static_cast<std::uint64_t>(lambda * 100);
        ResultReport r = run_with_threads(spec);
        const auto& o = r.observables[0];
        bool ok = o.pass && o.stats.std_error < 0.015;
        line.note(ok, "(" + fmt(lambda) + "," + fmt(rho) + ") mean=" + fmt(o.stats.mean) +
                          " target=" + fmt(*o.target) + " stderr=" + fmt(o.stats.std_error));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(4, "second-class speeds 1-2a and 1-l-r within 5 stderr, stderr < 0.015", line, secs);
}

// ---- 5: rarefaction density fields --------------------------------------
void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec = default_spec(Scenario::kDensityFields);
    spec.lambda = 1.0;
    spec.rho = 0.0;
    spec.horizon = 4000.0;
    spec.replicas = 50;
    spec.intervals = {{-1.5, -1.0}, {-0.5, 0.5}, {0.2, 1.0}, {1.0, 1.5}};
    spec.seed = 42060;
    ResultReport r = run_with_threads(spec);
    Line line;
    for (const auto& o : r.observables) {
        bool ok = std::abs(o.stats.mean - *o.target) < 0.02;
        line.note(ok, o.name + " mean=" + fmt(o.stats.mean) + " target=" + fmt(*o.target));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(5, "rarefaction mass over 4 intervals within 0.02 of the exact integral", line, secs);
}

// ---- 6: rarefaction local equilibrium ------------------------------------
void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec = default_spec(Scenario::kLocalEquilibrium);
    spec.lambda = 1.0;
    spec.rho = 0.0;
    spec.horizon = 4000.0;
    spec.replicas = 400;
    spec.r_values = {-0.5, 0.0, 0.5};
    spec.correlation_sets = {{0}, {0, 1}, {0, 2, 5}};
    spec.seed = 42070;
    ResultReport r = run_with_threads(spec);
    Line line;
    for (const auto& o : r.observables) {
        line.note(o.pass, o.name + " mean=" + fmt(o.stats.mean) + " target=" + fmt(*o.target));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(6, "fan local correlations ((1-r)/2)^|A| within 5 stderr", line, secs);
}

// ---- 7: shock local equilibrium ------------------------------------------
void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec = default_spec(Scenario::kLocalEquilibrium);
    spec.lambda = 0.2;
    spec.rho = 0.8;
    spec.horizon = 2000.0;
    spec.replicas = 400;
    spec.r_values = {-0.5, 0.5};
    spec.correlation_sets = {{0, 1}};
    spec.seed = 42080;
    ResultReport r = run_with_threads(spec);
    Line line;
    line.note(std::abs(*r.observables[0].target - 0.04) < 1e-12, "left target is lambda^2");
    line.note(std::abs(*r.observables[1].target - 0.64) < 1e-12, "right target is rho^2");
    for (const auto& o : r.observables) {
        line.note(o.pass, o.name + " mean=" + fmt(o.stats.mean) + " target=" + fmt(*o.target));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(7, "shock local correlations 0.04 / 0.64 within 5 stderr", line, secs);
}

// ---- 8: exact solver golden values ----------------------------------------
void criterion_8() {
    auto t0 = std::chrono::steady_clock::now();
    Line line;
    auto golden = [&](double got, double want, const char* what) {
        line.note(std::abs(got - want) < 1e-12, std::string(what) + " got " + fmt(got));
    };
    golden(flux_function(0.5), 0.25, "flux(1/2)");
    golden(characteristic_speed(0.3), 0.4, "speed(0.3)");
    golden(shock_speed({0.2, 0.8}), 0.0, "shock(0.2,0.8)");
    golden(shock_speed({0.1, 0.5}), 0.4, "shock(0.1,0.5)");
    golden(riemann_solution({1, 0}, {0.0, 1.0}), 0.5, "fan centre");
    golden(riemann_solution({1, 0}, {0.8, 2.0}), 0.3, "fan ray");
    golden(riemann_solution({0.4, 0.4}, {-7.0, 3.0}), 0.4, "constant");
    golden(riemann_solution({0.2, 0.8}, {0.1, 1.0}), 0.8, "shock right");
    golden(density_integral({1, 0}, 0.0, 1.0, 1.0), 0.25, "fan mass");
    golden(density_integral({0.2, 0.8}, -1.0, 1.0, 1.0), 1.0, "shock mass");

    rng::SplitMix g(4242);
    for (int i = 0; i < 50; ++i) {
        double right = 0.8 * g.next_open_unit();
        RiemannProblem p{right + (1.0 - right) * g.next_open_unit(), right};
        double t = 0.2 + 2.0 * g.next_open_unit();
        double r = 3.0 * t * (g.next_open_unit() - 0.5);
        double k = 0.1 + 4.0 * g.next_open_unit();
        double u1 = riemann_solution(p, {r, t});
        double u2 = riemann_solution(p, {k * r, k * t});
        line.note(std::abs(u1 - u2) < 1e-6, "self-similarity");
        double a = -(t + 1.0), b = t + 1.0, h = 1e-5;
        double dmdt = (density_integral(p, a, b, t + h) - density_integral(p, a, b, t - h)) /
                      (2.0 * h);
        double bound = flux_function(riemann_solution(p, {a, t})) -
                       flux_function(riemann_solution(p, {b, t}));
        line.note(std::abs(dmdt - bound) < 1e-6, "conservation");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(8, "exact solver golden values at 1e-12; self-similarity and conservation at 1e-6",
           line, secs);
}

// ---- 9: buffer audit -------------------------------------------------------
void criterion_9() {
    auto t0 = std::chrono::steady_clock::now();
    ResultReport r = run_with_threads(default_spec(Scenario::kBufferAudit));
    Line line;
    for (const auto& o : r.observables) {
        long long mismatches = 0;
        for (double v : o.values) mismatches += static_cast<long long>(v);
        line.note(o.pass && mismatches == 0, o.name + " mismatches=" + std::to_string(mismatches));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(9, "doubling the buffer leaves every scenario's observables bit-identical", line, secs);
}

// ---- 10: determinism --------------------------------------------------------
void criterion_10() {
    auto t0 = std::chrono::steady_clock::now();
    Line line;
    for (const auto& [scenario, name] : scenario_names()) {
        ExperimentSpec spec = default_spec(scenario);
        std::string first = canonical_report_text(run_with_threads(spec));
        std::string second = canonical_report_text(run_with_threads(spec));
        line.note(first == second, name + " report differs between reruns");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(10, "byte-identical reports on rerun (timing metadata excluded)", line, secs);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            g_threads = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            std::string list = argv[++i];
            std::size_t pos = 0;
            while (pos < list.size()) {
                std::size_t comma = list.find(',', pos);
                if (comma == std::string::npos) comma = list.size();
                selected.insert(std::stoi(list.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N[,M...]] [--threads K]\n", argv[0]);
            return 1;
        }
    }
    auto want = [&](int id) { return selected.empty() || selected.count(id) > 0; };
    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();
    if (want(10)) criterion_10();
    std::printf("%s\n", g_all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
    return g_all_pass ? 0 : 1;
}
