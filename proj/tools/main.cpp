#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tasep/experiments.hpp"

namespace {

using namespace tasep;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    auto out = std::make_unique<std::ofstream>(path);
    if (!*out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-driven simulator of the totally asymmetric simple exclusion process\n"
                 "with an exact Burgers-equation reference"};
    app.require_subcommand(1);

    // ---- run ----------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Run an experiment scenario");
    std::string scenario_name, config_path, out_path, format = "json";
    std::string r_list, a_list, interval_list;
    double lambda = 0, rho = 0, alpha = 0, horizon = 0, buffer_mult = 0, epsilon = 0,
           line_speed = 0, band = 0;
    std::int64_t obs_halfwidth = 0;
    int replicas = 0, threads = 0;
    std::uint64_t seed = 0;
    run_cmd->add_option("scenario", scenario_name, "Scenario name (see list-scenarios)")
        ->required();
    run_cmd->add_option("--config", config_path, "key=value spec file; flags override it");
    auto* o_lambda = run_cmd->add_option("--lambda", lambda, "Left / low density");
    auto* o_rho = run_cmd->add_option("--rho", rho, "Right / high density");
    auto* o_alpha = run_cmd->add_option("--alpha", alpha, "Background density");
    auto* o_horizon = run_cmd->add_option("--horizon", horizon, "Simulated time T");
    auto* o_speed = run_cmd->add_option("--line-speed", line_speed, "Observation line speed a");
    auto* o_r = run_cmd->add_option("--r", r_list, "Comma-separated observation points");
    auto* o_sets = run_cmd->add_option("--A", a_list,
                                       "Correlation sets: comma-separated sites, ';' between sets");
    auto* o_iv = run_cmd->add_option("--intervals", interval_list,
                                     "Mass intervals: a:b pairs separated by ';'");
    auto* o_eps = run_cmd->add_option("--epsilon", epsilon, "Macroscopic scale (default 1/T)");
    auto* o_hw = run_cmd->add_option("--obs-halfwidth", obs_halfwidth,
                                     "Observation half-width in sites (default per scenario)");
    auto* o_mult = run_cmd->add_option("--buffer-mult", buffer_mult,
                                       "Buffer width in multiples of T (default 3)");
    auto* o_reps = run_cmd->add_option("--replicas", replicas, "Replica count");
    auto* o_seed = run_cmd->add_option("--seed", seed, "Master seed");
    auto* o_threads = run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    auto* o_band = run_cmd->add_option("--band", band, "Acceptance band in standard errors");
    run_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
    run_cmd->add_option("--format", format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // ---- burgers eval ---------------------------------------------------
    auto* burgers_cmd = app.add_subcommand("burgers", "Exact Burgers reference");
    auto* eval_cmd = burgers_cmd->add_subcommand("eval", "Evaluate the entropy solution u(r, t)");
    double b_lambda = 0, b_rho = 0, b_r = 0, b_t = 0;
    eval_cmd->add_option("--lambda", b_lambda, "Left state")->required();
    eval_cmd->add_option("--rho", b_rho, "Right state")->required();
    eval_cmd->add_option("--r", b_r, "Position")->required();
    eval_cmd->add_option("--t", b_t, "Time")->required();

    // ---- list-scenarios -------------------------------------------------
    auto* list_cmd = app.add_subcommand("list-scenarios", "List available scenarios");

    // ---- field dump -------------------------------------------------------
    auto* field_cmd = app.add_subcommand("field", "Poisson field utilities");
    auto* dump_cmd = field_cmd->add_subcommand("dump", "Write an event list as text");
    std::int64_t f_lo = 0, f_hi = 0;
    double f_horizon = 0;
    std::uint64_t f_seed = 0;
    std::string f_out;
    dump_cmd->add_option("--lo", f_lo, "Left window site")->required();
    dump_cmd->add_option("--hi", f_hi, "Right window site")->required();
    dump_cmd->add_option("--horizon", f_horizon, "Horizon")->required();
    dump_cmd->add_option("--seed", f_seed, "Seed")->required();
    dump_cmd->add_option("--out", f_out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) {
            std::printf("%.17g\n", riemann_solution({b_lambda, b_rho}, {b_r, b_t}));
            return 0;
        }
        if (*list_cmd) {
            for (const auto& [scenario, name] : scenario_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (*dump_cmd) {
            PoissonField field = sample_field(f_lo, f_hi, f_horizon, f_seed);
            if (f_out.empty()) {
                dump_events(field, std::cout);
            } else {
                dump_events(field, *open_out(f_out));
            }
            return 0;
        }
        if (*run_cmd) {
            Scenario scenario = scenario_from_string(scenario_name);
            ExperimentSpec spec;
            if (!config_path.empty()) {
                spec = spec_from_config_text(read_file(config_path));
                require(spec.scenario == scenario,
                        "config file names a different scenario than the command line");
            } else {
                spec = default_spec(scenario);
            }
            if (o_lambda->count()) spec.lambda = lambda;
            if (o_rho->count()) spec.rho = rho;
            if (o_alpha->count()) spec.alpha = alpha;
            if (o_horizon->count()) spec.horizon = horizon;
            if (o_speed->count()) spec.line_speed = line_speed;
            if (o_eps->count()) spec.epsilon = epsilon;
            if (o_hw->count()) spec.obs_halfwidth = obs_halfwidth;
            if (o_mult->count()) spec.buffer_mult = buffer_mult;
            if (o_reps->count()) spec.replicas = replicas;
            if (o_seed->count()) spec.seed = seed;
            if (o_threads->count()) spec.threads = threads;
            if (o_band->count()) spec.band = band;
            if (o_r->count()) {
                spec.r_values.clear();
                std::istringstream ss(r_list);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.r_values.push_back(std::stod(tok));
            }
            if (o_sets->count()) {
                spec.correlation_sets.clear();
                std::istringstream ss(a_list);
                std::string set;
                while (std::getline(ss, set, ';')) {
                    std::vector<Site> sites;
                    std::istringstream ss2(set);
                    std::string tok;
                    while (std::getline(ss2, tok, ',')) sites.push_back(std::stoll(tok));
                    spec.correlation_sets.push_back(std::move(sites));
                }
            }
            if (o_iv->count()) {
                spec.intervals.clear();
                std::istringstream ss(interval_list);
                std::string pair;
                while (std::getline(ss, pair, ';')) {
                    auto colon = pair.find(':');
                    require(colon != std::string::npos, "interval must be a:b");
                    spec.intervals.push_back(
                        {std::stod(pair.substr(0, colon)), std::stod(pair.substr(colon + 1))});
                }
            }

            ResultReport report = run(spec);
            ReportFormat rf = format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;
            if (out_path.empty()) {
                emit_report(report, rf, std::cout);
            } else {
                emit_report(report, rf, *open_out(out_path));
            }
            if (!report.all_pass) {
                std::fprintf(stderr, "one or more observables missed their acceptance band\n");
                return 2;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
