// Command-line front end: experiment runs, summaries, single solves,
// stored-solution checks and subproblem dumps.
//
// Exit codes: 0 success, 1 configuration or input error, 2 runtime failures.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "swipt/harness.hpp"

using namespace swipt;

namespace
{

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeFailure = 2;

struct CellArgs
{
    std::string spec_path;
    std::size_t point = 0;
    std::uint64_t seed = 1;
    std::string scheme = "proposed";
};

void add_cell_options(CLI::App *cmd, CellArgs &a)
{
    cmd->add_option("spec", a.spec_path, "experiment spec file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--point", a.point, "grid point index (last axis fastest)");
    cmd->add_option("--seed", a.seed, "scenario seed");
    cmd->add_option("--scheme", a.scheme, "proposed, perfect_csi, no_an, no_cj or non_robust");
}

struct Cell
{
    Scenario scenario;
    PowerBudget budget;
    SpcaConfig spca;
    SchemeTag scheme;
};

Cell load_cell(const CellArgs &a)
{
    const ExperimentSpec spec = load_experiment_spec(a.spec_path);
    if (a.point >= spec.n_points())
        throw DomainError("grid point " + std::to_string(a.point) + " out of range (" +
                          std::to_string(spec.n_points()) + " points)");
    ScenarioParams params = spec.params;
    Cell c{{}, spec.budget, spec.spca, scheme_from_string(a.scheme)};
    spec.apply_point(a.point, params, c.budget);
    c.scenario = make_scenario(params, a.seed);
    return c;
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write '" + path + "'");
    return f;
}

int cmd_run(const std::string &spec_path, const std::string &out, int threads)
{
    ExperimentSpec spec = load_experiment_spec(spec_path);
    if (!out.empty())
        spec.output = out;
    const ResultTable t = run_experiment(spec, threads);
    write_result_files(spec.output, t);
    write_summary(std::cout, summarize(t));
    std::cout << "wrote " << spec.output << " (" << t.rows.size() << " rows, " << t.failures()
              << " failed)\n";
    return t.failures() ? kRuntimeFailure : kOk;
}

int cmd_summarize(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    write_summary(std::cout, summarize(read_results_csv(f)));
    return kOk;
}

int cmd_solve(const CellArgs &a, const std::string &prefix)
{
    const Cell c = load_cell(a);
    const SpcaResult res =
        solve_scheme(c.scheme, c.scenario.channels, c.scenario.noise, c.budget, c.spca, a.seed);
    {
        auto f = open_out(prefix + ".scenario");
        Scenario eval = c.scenario;
        eval.channels = evaluation_channels(c.scheme, c.scenario.channels);
        write_scenario(f, eval);
    }
    {
        auto f = open_out(prefix + ".solution");
        write_solution(f, res.solution, c.budget);
    }
    {
        auto f = open_out(prefix + ".trace.csv");
        res.trace.write_csv(f);
    }
    std::printf("status %s, %zu iterations, objective %.6g W", to_string(res.status),
                res.trace.records.size(), res.objective);
    if (res.objective > 0.0)
        std::printf(" (%.3f dBm)", watts_to_dbm(res.objective));
    std::printf("\n");
    if (!res.ok())
        std::printf("%s\n", res.message.c_str());
    return res.ok() ? kOk : kRuntimeFailure;
}

int cmd_validate(const std::string &scenario_path, const std::string &solution_path, int samples,
                 std::uint64_t seed)
{
    std::ifstream fs(scenario_path), fx(solution_path);
    if (!fs || !fx)
        throw FormatError("cannot open scenario or solution file");
    const Scenario sc = read_scenario(fs);
    PowerBudget budget;
    const BeamformingSolution sol = read_solution(fx, budget);
    sol.validate(sc.dims);
    budget.validate();

    const double tx = sol.transmit_power() - budget.P_T;
    const double jam = sol.jammer_power() - budget.P_J;
    const double rate = sol.r1 * sol.r2 - std::exp2(budget.Rbar_s);
    const WorstCaseReport wc = empirical_worst_case(sol, sc.channels, sc.noise, samples, seed);
    double sec = INFINITY, hcr = INFINITY, her = INFINITY;
    for (double v : wc.min_relaxed_secrecy_rate)
        sec = std::min(sec, v);
    for (double v : wc.min_harvest_cr)
        hcr = std::min(hcr, v);
    for (double v : wc.min_harvest_er)
        her = std::min(her, v);
    const GramSet grams = build_gram_set(sc.channels, compute_robust_bounds(sc.channels));
    const bool psd = psd_flags(grams, SocpConfig{}).all_pass();

    std::printf("power residual tx   %.3e W\n", tx);
    std::printf("power residual jam  %.3e W\n", jam);
    std::printf("rate slack r1 r2    %.3e\n", rate);
    std::printf("min relaxed secrecy %.6f (target %.6f) over %d samples\n", sec, budget.Rbar_s, wc.n_samples);
    std::printf("min CR harvest      %.6e W (floor %.6e)\n", hcr, sol.Ebar_s);
    std::printf("min ER harvest      %.6e W (floor %.6e)\n", her, sol.Ebar_e);
    std::printf("psd flags           %s\n", psd ? "pass" : "fail");

    bool good = tx <= 1e-8 * std::max(1.0, budget.P_T) && jam <= 1e-8 * std::max(1.0, budget.P_J) &&
                rate >= -1e-6 && sec >= budget.Rbar_s - 1e-6;
    if (psd)
        good = good && hcr >= sol.Ebar_s - 1e-9 && her >= sol.Ebar_e - 1e-9;
    std::printf("%s\n", good ? "valid" : "INVALID");
    return good ? kOk : kRuntimeFailure;
}

int cmd_dump(const CellArgs &a, int iteration, const std::string &out)
{
    Cell c = load_cell(a);
    c.spca.max_outer_iters = iteration;
    const SpcaResult res =
        solve_scheme(c.scheme, c.scenario.channels, c.scenario.noise, c.budget, c.spca, a.seed);
    if (static_cast<int>(res.trace.records.size()) < iteration || res.final_problem.n_vars == 0)
    {
        std::fprintf(stderr, "subproblem %d not reached: %s\n", iteration, res.message.c_str());
        return kRuntimeFailure;
    }
    auto f = open_out(out);
    write_conic_problem(f, res.final_problem);
    std::printf("wrote subproblem %d (%d variables, %zu cones, %zu rows) to %s\n", iteration,
                res.final_problem.n_vars, res.final_problem.socs.size(), res.final_problem.nonneg.size(),
                out.c_str());
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Robust max-min harvested-energy beamforming for secure MU-MIMO SWIPT"};
    app.require_subcommand(1);

    std::string spec_path, out;
    int threads = 0;
    auto *run = app.add_subcommand("run", "run an experiment spec and write CSV results");
    run->add_option("spec", spec_path, "experiment spec file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", out, "results CSV (overrides the spec)");
    run->add_option("-j,--threads", threads, "worker threads (default: SWIPT_THREADS or all cores)");

    std::string csv_path;
    auto *summ = app.add_subcommand("summarize", "print medians, gaps and trend flags of a results CSV");
    summ->add_option("results", csv_path, "results CSV")->required();

    CellArgs solve_args;
    std::string prefix = "solution";
    auto *solve = app.add_subcommand("solve", "solve one scenario and store it for validate");
    add_cell_options(solve, solve_args);
    solve->add_option("--prefix", prefix, "writes PREFIX.scenario, PREFIX.solution, PREFIX.trace.csv");

    std::string scen_path, sol_path;
    int samples = 1000;
    std::uint64_t vseed = 1;
    auto *val = app.add_subcommand("validate", "re-check a stored solution against sampled channels");
    val->add_option("--scenario", scen_path, "scenario file")->required();
    val->add_option("--solution", sol_path, "solution file")->required();
    val->add_option("--samples", samples, "channel error samples")->check(CLI::PositiveNumber);
    val->add_option("--seed", vseed, "sampling seed");

    CellArgs dump_args;
    int iteration = 1;
    std::string dump_out = "subproblem.socp";
    auto *dump = app.add_subcommand("dump-socp", "write the standard-form subproblem of one iteration");
    add_cell_options(dump, dump_args);
    dump->add_option("--iteration", iteration, "outer iteration, from 1")->check(CLI::PositiveNumber);
    dump->add_option("-o,--output", dump_out, "output file");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try
    {
        if (*run)
            return cmd_run(spec_path, out, threads);
        if (*summ)
            return cmd_summarize(csv_path);
        if (*solve)
            return cmd_solve(solve_args, prefix);
        if (*val)
            return cmd_validate(scen_path, sol_path, samples, vseed);
        if (*dump)
            return cmd_dump(dump_args, iteration, dump_out);
    }
    catch (const FormatError &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
    catch (const DomainError &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kRuntimeFailure;
    }
    return kOk;
}
