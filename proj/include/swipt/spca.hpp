#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swipt/conic_backend.hpp"
#include "swipt/socp_builder.hpp"

namespace swipt
{

enum class InitStrategy
{
    matched_filter, ///< beams along the CR channels, AN and jamming with random phases
    null_steering,  ///< leakage-aware beams, AN and jamming outside the CR channel span
};

const char *to_string(InitStrategy s);
InitStrategy init_strategy_from_string(const std::string &s);

struct SpcaConfig
{
    int max_outer_iters = 50;
    double rel_obj_tol = 1e-4;
    double r1_floor = 1e-4;
    double r1_tilde_floor = 1e-3;
    double rho_floor = 1e-3;
    double es_floor = 1e-12;
    InitStrategy init_strategy = InitStrategy::matched_filter;
    bool paper_literal_signs = false;
    bool use_an = true;
    bool use_cj = true;
    double an_fraction = 0.25; ///< share of P_T given to AN by the heuristic start
    double damping = 1.0;      ///< 1 = take the full solver step
    int phase1_iters = 20;
    SolverOptions solver;

    void validate() const;
    SocpConfig socp() const;
};

struct IterationRecord
{
    int iteration = 0;
    double objective = 0.0; ///< tau * Es + (1 - tau) * Ee, watts
    double Es = 0.0;
    double Ee = 0.0;
    double residual = 0.0; ///< max signed residual from check_solution
    SolveStatus status = SolveStatus::optimal;
    double time = 0.0; ///< seconds
    int solver_iterations = 0;
};

struct IterationTrace
{
    std::vector<IterationRecord> records;

    /// iteration,objective,Es,Ee,residual,status,time
    void write_csv(std::ostream &os) const;
    /// First iteration whose relative objective change is below tol (0 if none).
    int iterations_to_tolerance(double tol) const;
    /// Whether objectives never drop by more than slack.
    bool monotone(double slack) const;
    /// Largest drop between consecutive objectives (0 if none).
    double max_drop() const;
};

enum class RunStatus
{
    converged,
    iteration_cap,
    solver_failure,
    init_failure,
};

const char *to_string(RunStatus s);

/// Surrogate quantities of a point, all with the worst-case shifts.
struct SurrogateMetrics
{
    std::vector<double> sinr;   ///< per CR
    std::vector<double> leak;   ///< (l, k) row major: achievable r2 bound
    std::vector<double> a_cr;   ///< linearized received power per CR
    std::vector<double> eh_er;  ///< linearized ER harvest per ER, watts
};

SurrogateMetrics surrogate_metrics(const GramSet &grams, const NoiseAndEfficiency &noise,
                                   const BeamformingSolution &sol, const SocpConfig &cfg,
                                   double s_inv_margin = 1.0);

struct InitResult
{
    bool ok = false;
    ExpansionPoint point;
    BeamformingSolution start; ///< strictly feasible for the SOCP built around `point`
    int phase1_iterations = 0;
    InitStrategy strategy_used = InitStrategy::matched_filter;
    std::string message;
};

InitResult find_initial_point(const ChannelSet &ch, const RobustBounds &rb, const GramSet &grams,
                              const NoiseAndEfficiency &noise, const PowerBudget &budget,
                              const SpcaConfig &cfg, std::uint64_t seed);

struct SpcaResult
{
    RunStatus status = RunStatus::init_failure;
    BeamformingSolution solution;
    IterationTrace trace;
    double objective = 0.0; ///< watts
    std::string message;
    PsdFlags flags;
    ConicProblem final_problem; ///< last successfully solved subproblem
    RVec final_x;
    InitResult init;

    bool ok() const { return status == RunStatus::converged || status == RunStatus::iteration_cap; }
};

SpcaResult run_spca(const ChannelSet &ch, const NoiseAndEfficiency &noise, const PowerBudget &budget,
                    const SpcaConfig &cfg, std::uint64_t seed);

struct ValidationReport
{
    double surrogate_residual = 0.0; ///< max residual of the final SOCP at its solution
    double power_residual_tx = 0.0;  ///< sum ||w||^2 + ||z||^2 - P_T
    double power_residual_jam = 0.0; ///< ||q||^2 - P_J
    double rate_slack = 0.0;         ///< r1 r2 - 2^Rbar
    std::vector<double> min_secrecy;         ///< exact eavesdropper rate
    std::vector<double> min_relaxed_secrecy; ///< trace-relaxed eavesdropper rate
    std::vector<double> min_harvest_cr;
    std::vector<double> min_harvest_er;
    double harvest_cr_margin = 0.0; ///< min_k min_harvest_cr - Es
    double harvest_er_margin = 0.0; ///< min_l min_harvest_er - Ee
    double secrecy_margin = 0.0;    ///< min_k min_relaxed_secrecy - Rbar
    bool psd_flags_pass = false;
    int n_samples = 0;
};

ValidationReport validate_solution(const SpcaResult &res, const ChannelSet &ch,
                                   const NoiseAndEfficiency &noise, const PowerBudget &budget,
                                   int n_samples, std::uint64_t seed);

} // namespace swipt
