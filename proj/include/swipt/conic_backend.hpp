#pragma once

#include <string>

#include "swipt/conic.hpp"

namespace swipt
{

enum class SolveStatus
{
    optimal,
    infeasible,
    unbounded,
    numerical_failure,
    iteration_limit,
};

const char *to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string &s);

struct SolverOptions
{
    double feas_tol = 1e-8;
    double rel_gap_tol = 1e-8;
    double abs_gap_tol = 1e-11;
    int max_iters = 100;
    bool equilibrate = true;
};

struct ConicSolution
{
    SolveStatus status = SolveStatus::numerical_failure;
    RVec x;                 ///< last iterate (meaningful for optimal / iteration_limit)
    double objective = 0.0; ///< objective^T x of the maximization problem
    double solve_time = 0.0;
    int solver_iterations = 0;
};

class ConicSolver
{
public:
    virtual ~ConicSolver() = default;
    virtual ConicSolution solve(const ConicProblem &p, const SolverOptions &opts) const = 0;
};

/// Dense homogeneous self-dual interior-point method with Nesterov-Todd
/// scaling and Mehrotra correction.
class InteriorPointSolver final : public ConicSolver
{
public:
    ConicSolution solve(const ConicProblem &p, const SolverOptions &opts) const override;
};

/// Convenience wrapper around InteriorPointSolver.
ConicSolution solve(const ConicProblem &p, const SolverOptions &opts = {});

} // namespace swipt
