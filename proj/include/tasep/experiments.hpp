#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tasep/burgers.hpp"
#include "tasep/multiclass.hpp"
#include "tasep/observables.hpp"

namespace tasep {

enum class Scenario {
    kRostFan,
    kShock,
    kTaggedLln,
    kFluxLln,
    kSecondClassIsolated,
    kSecondClassTagged,
    kLocalEquilibrium,
    kDensityFields,
    kPathwiseIdentities,
    kBufferAudit,
};

const std::vector<std::pair<Scenario, std::string>>& scenario_names();
std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

/// Everything a run needs. Empty observable lists and a zero half-width are
/// filled with per-scenario defaults when the run starts.
struct ExperimentSpec {
    Scenario scenario = Scenario::kTaggedLln;
    double lambda = 0.0;                        // left / low density
    double rho = 0.0;                           // right / high density
    double alpha = 0.5;                         // background density
    double horizon = 200.0;                     // T; macroscopic time is 1, eps = 1/T
    double line_speed = 0.0;                    // a in y = a t
    std::vector<double> r_values;               // macroscopic observation points
    std::vector<std::vector<Site>> correlation_sets;  // A sets
    std::vector<std::pair<double, double>> intervals; // [a, b] mass intervals
    double epsilon = 0.0;                       // 0 -> 1 / horizon
    Site obs_halfwidth = 0;                     // 0 -> scenario default
    double buffer_mult = 3.0;
    int replicas = 100;
    std::uint64_t seed = 1;
    int threads = 0;                            // 0 -> hardware concurrency
    double band = 5.0;                          // acceptance band in standard errors

    bool operator==(const ExperimentSpec&) const = default;
};

ExperimentSpec default_spec(Scenario s);

/// Flat `key=value` config format, one field per line.
std::string spec_to_config_text(const ExperimentSpec& spec);
ExperimentSpec spec_from_config_text(const std::string& text);

struct ObservableResult {
    enum class Band { kStdErrMult, kAbsolute, kExact };

    std::string name;
    std::optional<double> target;
    Band band_kind = Band::kStdErrMult;
    double band = 5.0;
    std::vector<double> values;  // one per replica, replica order
    ReplicaStatistics stats;
    bool pass = true;
};

struct ResultReport {
    ExperimentSpec spec;
    Site window_lo = 0, window_hi = 0, safe_halfwidth = 0;
    std::vector<ObservableResult> observables;
    bool all_pass = true;
    double wall_ms = 0.0;        // timing metadata, excluded from canonical text
    std::uint64_t events = 0;
};

/// Execute the scenario across replicas with seeds derived per replica from
/// the master seed. Deterministic function of the spec up to timing fields.
ResultReport run(const ExperimentSpec& spec);

enum class ReportFormat { kJson, kCsv };

/// Structured report, timing metadata included for kJson.
void emit_report(const ResultReport& report, ReportFormat format, std::ostream& os);

/// JSON text without timing metadata; identical spec implies identical text.
std::string canonical_report_text(const ResultReport& report);

namespace detail {

struct PathwiseParams {
    SiteRange window;
    SiteRange safe;
    double horizon = 0.0;
};

/// One replica of the exact identity suite; densities are drawn from the
/// replica seeds with lambda >= alpha >= rho. Returns violation counts per
/// check name (all zero on a correct implementation).
std::map<std::string, long long> run_pathwise_replica(const PathwiseParams& params,
                                                      SeedPair seeds);

const std::vector<std::string>& pathwise_check_names();

}  // namespace detail

}  // namespace tasep
