#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "swipt/baselines.hpp"

namespace swipt
{

enum class ExperimentKind
{
    convergence_trace,
    sweep_secrecy_target,
    sweep_jammer_power,
    custom,
};

const char *to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string &s);

/// One swept parameter. Powers are stored in watts.
struct GridAxis
{
    std::string name; ///< Rbar_s, P_T, P_J, eps_s, eps_e, tau
    std::vector<double> values;
};

bool is_power_axis(const std::string &name);

struct ExperimentSpec
{
    ExperimentKind kind = ExperimentKind::custom;
    std::string name = "experiment";
    std::vector<SchemeTag> schemes{SchemeTag::proposed};
    std::vector<GridAxis> grid;
    int n_seeds = 50;
    std::uint64_t first_seed = 1;
    int validation_samples = 200;
    ScenarioParams params;
    PowerBudget budget;
    SpcaConfig spca;
    std::string output = "results.csv";

    void validate() const;
    /// Product of the axis sizes.
    std::size_t n_points() const;
    /// Axis values of grid point `index`; the last axis varies fastest.
    std::vector<double> point(std::size_t index) const;
    /// Scenario parameters and budget with grid point `index` applied.
    void apply_point(std::size_t index, ScenarioParams &params, PowerBudget &budget) const;
};

/// Keyed text: `key = value` lines, `#` comments, `grid.<axis> = v1, v2, ...`.
/// Powers need a dBm, W or mW suffix, distances m, frequencies Hz, MHz or GHz.
/// Throws FormatError or DomainError.
ExperimentSpec parse_experiment_spec(std::istream &is);
ExperimentSpec load_experiment_spec(const std::string &path);

/// "40 dBm", "2.5W", "10 mW" -> watts
double parse_power(const std::string &s);
double parse_distance(const std::string &s);
double parse_frequency(const std::string &s);

struct ResultRow
{
    std::vector<double> point; ///< aligned with the table axes, powers in watts
    SchemeTag scheme = SchemeTag::proposed;
    std::uint64_t seed = 0;
    std::string status;
    bool ok = false;
    double objective_w = 0.0;
    double Es_w = 0.0;
    double Ee_w = 0.0;
    double nominal_harvest_w = 0.0; ///< sum of every receiver's harvest at the estimates
    int iterations = 0;
    int iterations_to_1e3 = 0;
    double max_drop = 0.0;
    double max_residual = 0.0;
    double min_secrecy = 0.0; ///< sampled minimum of the relaxed secrecy rate
    bool secrecy_ok = false;
    bool harvest_ok = false; ///< sampled harvest floors hold (only meaningful with psd_ok)
    bool psd_ok = false;
    double runtime_s = 0.0; ///< written to the timing sidecar only
};

struct TraceRow
{
    std::vector<double> point;
    SchemeTag scheme = SchemeTag::proposed;
    std::uint64_t seed = 0;
    IterationRecord record;
};

struct ResultTable
{
    std::vector<std::string> axes;
    std::vector<ResultRow> rows;   ///< sorted by (point, scheme, seed)
    std::vector<TraceRow> traces;  ///< convergence_trace only

    int failures() const;
};

/// Thread count from SWIPT_THREADS, else the hardware concurrency.
int default_thread_count();

ResultTable run_experiment(const ExperimentSpec &spec, int threads = 0);

/// Column order of the results CSV.
std::vector<std::string> result_columns(const std::vector<std::string> &axes);

/// First line is a `#` comment with a timestamp; the rest is deterministic.
void write_results_csv(std::ostream &os, const ResultTable &t, const std::string &stamp);
void write_timing_csv(std::ostream &os, const ResultTable &t);
void write_trace_csv(std::ostream &os, const ResultTable &t);
/// Writes `path`, `path.timing.csv` and, when traces exist, `path.trace.csv`.
void write_result_files(const std::string &path, const ResultTable &t);
ResultTable read_results_csv(std::istream &is);

struct SummaryCell
{
    std::vector<double> point;
    SchemeTag scheme = SchemeTag::proposed;
    int n = 0;
    int n_ok = 0;
    double median_w = 0.0; ///< failed runs count as 0 W
    double median_dbm = 0.0;
    double median_iterations = 0.0;
};

struct SummaryGap
{
    std::vector<double> point;
    SchemeTag other = SchemeTag::proposed;
    double gap_db = 0.0; ///< proposed minus other, medians in dBm
};

struct MonotoneFlag
{
    SchemeTag scheme = SchemeTag::proposed;
    std::string axis;
    std::vector<double> fixed; ///< other axes' values, axis itself set to NaN
    bool holds = false;        ///< decreasing in Rbar_s, increasing in P_J / P_T
};

struct Summary
{
    std::vector<std::string> axes;
    std::vector<SummaryCell> cells;
    std::vector<SummaryGap> gaps;
    std::vector<MonotoneFlag> monotone;

    const SummaryCell *find(const std::vector<double> &point, SchemeTag s) const;
};

/// Throws DomainError on an empty table.
Summary summarize(const ResultTable &t);
void write_summary(std::ostream &os, const Summary &s);

/// Text round trip of a designed solution and the budget it was designed for.
void write_solution(std::ostream &os, const BeamformingSolution &sol, const PowerBudget &budget);
BeamformingSolution read_solution(std::istream &is, PowerBudget &budget);

} // namespace swipt
