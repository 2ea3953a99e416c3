#pragma once

#include <string>
#include <vector>

#include "swipt/conic.hpp"
#include "swipt/metrics.hpp"
#include "swipt/robust_bounds.hpp"
#include "swipt/scenario.hpp"

namespace swipt
{

/// Point around which the nonconvex constraints are linearized.
struct ExpansionPoint
{
    std::vector<CVec> w_tilde;
    CVec z_tilde;
    CVec q_tilde;
    double r1_tilde = 2.0;
    double r2_tilde = 1.0;
    double Es_tilde = 0.0; ///< watts

    static ExpansionPoint from_solution(const BeamformingSolution &sol);
};

struct SocpConfig
{
    bool use_an = true; ///< false removes z from the problem
    bool use_cj = true; ///< false removes q from the problem
    /// Use "+" shifts on the jammer terms of both harvest lower bounds
    /// instead of the worst-case "-" shifts.
    bool paper_literal_signs = false;
    double r1_floor = 1e-4;       ///< r1 >= 1 + r1_floor
    double r1_tilde_floor = 1e-3; ///< expansion r1 >= 1 + this
    double rho_floor = 1e-3;
    double es_floor = 1e-12; ///< watts
};

/// F(w, t) = 2 Re{g^H w} + ct * t + c0, the tangent of w^H A w / (t - a) at (w~, t~).
struct TaylorQol
{
    CVec g;
    double ct = 0.0;
    double c0 = 0.0;
    double f_tilde = 0.0; ///< w~^H A w~ / (t~ - a)

    double operator()(const CVec &w, double t) const;
};

/// Throws DomainError when t_tilde <= a.
TaylorQol taylor_qol(const CMat &A, double a, const CVec &w_tilde, double t_tilde);

/// w^H A w / (t - a)
double quad_over_lin(const CMat &A, double a, const CVec &w, double t);

/// Whether a Hermitian matrix is PSD up to a relative tolerance.
bool is_psd(const CMat &A, double rel_tol = 1e-12);

/// M with M^H M = A for Hermitian PSD A, eigenvalues below the tolerance trimmed.
CMat psd_factor(const CMat &A);

/// Empty problem with the variable layout for the given dimensions.
///
/// Blocks: w0..w{K-1}, z (if AN), q (if CJ), rho, Es, Ee, r1, r2, s_inv.
/// Each complex vector v is stored as [Re v; Im v]. s_inv[k] bounds 1/rho_k.
ConicProblem make_layout(const SystemDims &dims, const SocpConfig &cfg, double unit_Es = 1.0,
                         double unit_Ee = 1.0);

/// ||[sqrt(2^(R+2)), r1 - r2]|| <= r1 + r2
void build_rate_soc(ConicProblem &p, double Rbar_s);

/// Robust SINR surrogate for CR k plus the hyperbolic cone s_inv[k] * rho_k >= 1.
void build_cr_sinr_constraint(ConicProblem &p, int k, const GramSet &grams,
                              const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                              const SocpConfig &cfg);

/// Robust leakage surrogate for the pair (ER l, CR k).
void build_er_leakage_constraint(ConicProblem &p, int l, int k, const GramSet &grams,
                                 const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                                 const SocpConfig &cfg);

/// Harvest cone of CR k.
void build_eh_cr_constraint(ConicProblem &p, int k, const GramSet &grams,
                            const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                            const SocpConfig &cfg);

/// Linearized harvest floor of ER l.
void build_eh_er_constraint(ConicProblem &p, int l, const GramSet &grams,
                            const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                            const SocpConfig &cfg);

void build_power_constraints(ConicProblem &p, const PowerBudget &budget);

/// rho_floor <= rho_k <= 1, r1 >= 1 + r1_floor, r2 <= 1.
void build_box_rows(ConicProblem &p, const SocpConfig &cfg);

/// Whole subproblem around `exp`, objective tau * Es + (1 - tau) * Ee
/// (in the units stored in var_index).
ConicProblem assemble_socp(const ChannelSet &ch, const RobustBounds &rb, const GramSet &grams,
                           const NoiseAndEfficiency &noise, const PowerBudget &budget,
                           const ExpansionPoint &exp, const SocpConfig &cfg);

/// Real coordinates of a solution; s_inv is set to 1/rho.
RVec lift_solution(const ConicProblem &p, const BeamformingSolution &sol);

BeamformingSolution extract_solution(const ConicProblem &p, const RVec &x, const SystemDims &dims);

/// Which linearizations are global lower bounds for this instance.
struct PsdFlags
{
    std::vector<bool> cr_sinr;   ///< h h^H - xi I
    std::vector<bool> eh_cr;     ///< every matrix in the CR harvest linearization
    std::vector<bool> er_leak;   ///< H H^H - alpha I and G G^H - alpha_j I
    std::vector<bool> eh_er;     ///< every matrix in the ER harvest linearization

    bool all_pass() const;
    bool harvest_pass() const;
};

PsdFlags psd_flags(const GramSet &grams, const SocpConfig &cfg);

} // namespace swipt
