#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dsce/channel.hpp"
#include "dsce/metrics.hpp"

namespace dsce {

// Estimator labels used in every output table.
inline constexpr const char* kEstimatorSomp = "somp";
inline constexpr const char* kEstimatorSmooth = "somp_smooth";
inline constexpr const char* kEstimatorLs = "ls";

struct TrialResult {
    double nmse_somp = std::numeric_limits<double>::quiet_NaN();
    double nmse_smooth = std::numeric_limits<double>::quiet_NaN();
    double nmse_ls = std::numeric_limits<double>::quiet_NaN();
    bool smooth_applicable = false;  // doppler gate (< 0.2) satisfied
    double mu = std::numeric_limits<double>::quiet_NaN();
    bool support_hit = false;  // recovered rows == true support rows
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
};

// One full pipeline pass: support, channel, plan, frames, time-domain
// propagation, noise, demodulation, all three estimators, metrics.
// Failures are captured on the result, not thrown.
TrialResult run_trial(const SystemConfig& cfg, std::uint64_t seed);

enum class SweepAxis { SnrDb, DopplerNorm, Antennas };
enum class PilotRule { FixedG, Proportional };  // proportional: G = 3*K*Nt

struct SweepSpec {
    SystemConfig base;
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> points;
    int trials = 200;
    PilotRule pilot_rule = PilotRule::FixedG;
    int threads = 1;  // affects wall time only, never the results
};

struct PointSummary {
    double axis_value = 0.0;
    double mean_somp = 0.0, se_somp = 0.0;
    double mean_smooth = 0.0, se_smooth = 0.0;  // NaN when not applicable
    double mean_ls = 0.0, se_ls = 0.0;
    double mean_mu = 0.0;
    double support_hit_rate = 0.0;
    int trials_ok = 0;
    int trials_failed = 0;
};

struct SweepTable {
    SweepSpec spec;
    std::vector<PointSummary> points;
};

// The config a sweep point actually runs (axis value and pilot rule applied).
SystemConfig point_config(const SweepSpec& spec, double axis_value);

// Deterministic given base seed: per-trial seeds are derived by counter, and
// aggregation order is independent of execution order and thread count.
// Throws if every trial of some point failed.
SweepTable run_sweep(const SweepSpec& spec);

std::string to_csv(const SweepTable& table);
std::string to_json(const SweepTable& table);

// Parses the CSV produced by to_csv back into (axis, estimator, numbers)
// rows; used by the round-trip tests.
struct CsvRow {
    double axis_value;
    std::string estimator;
    double mean_nmse_db;
    double std_err;
    double mu;
    double support_hit_rate;
    int trials;
    std::uint64_t seed;
};
std::vector<CsvRow> parse_csv(const std::string& text);

// Writes the table (csv or json) plus an adjacent <path>.manifest.json
// carrying the full config, code version, and timestamp; optionally an SVG
// line chart (one series per estimator).
void emit_results(const SweepTable& table, const std::string& path,
                  const std::string& format, const std::string& plot_path = "");

// Config (de)serialization. The manifest is a superset of the config schema,
// so a manifest file can be loaded to replay its run exactly.
std::string spec_to_json(const SweepSpec& spec);
SweepSpec spec_from_json(const std::string& text);

std::string version_string();

}  // namespace dsce
