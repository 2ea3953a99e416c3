#include "swipt/spca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "text_util.hpp"

namespace swipt
{

const char *to_string(InitStrategy s)
{
    return s == InitStrategy::matched_filter ? "matched_filter" : "null_steering";
}

InitStrategy init_strategy_from_string(const std::string &s)
{
    if (s == "matched_filter")
        return InitStrategy::matched_filter;
    if (s == "null_steering")
        return InitStrategy::null_steering;
    throw FormatError("unknown init strategy '" + s + "'");
}

const char *to_string(RunStatus s)
{
    switch (s)
    {
    case RunStatus::converged:
        return "converged";
    case RunStatus::iteration_cap:
        return "iteration_cap";
    case RunStatus::solver_failure:
        return "solver_failure";
    case RunStatus::init_failure:
        return "init_failure";
    }
    return "unknown";
}

void SpcaConfig::validate() const
{
    if (max_outer_iters < 1)
        throw DomainError("spca: max_outer_iters must be >= 1");
    if (!(rel_obj_tol > 0.0 && r1_floor > 0.0 && r1_tilde_floor > 0.0 && rho_floor > 0.0 &&
          es_floor > 0.0))
        throw DomainError("spca: tolerances and floors must be positive");
    if (!(rho_floor < 1.0))
        throw DomainError("spca: rho_floor must be < 1");
    if (!(an_fraction >= 0.0 && an_fraction < 1.0))
        throw DomainError("spca: an_fraction must lie in [0, 1)");
    if (!(damping > 0.0 && damping <= 1.0))
        throw DomainError("spca: damping must lie in (0, 1]");
    if (phase1_iters < 0)
        throw DomainError("spca: phase1_iters must be >= 0");
}

SocpConfig SpcaConfig::socp() const
{
    SocpConfig c;
    c.use_an = use_an;
    c.use_cj = use_cj;
    c.paper_literal_signs = paper_literal_signs;
    c.r1_floor = r1_floor;
    c.r1_tilde_floor = r1_tilde_floor;
    c.rho_floor = rho_floor;
    c.es_floor = es_floor;
    return c;
}

void IterationTrace::write_csv(std::ostream &os) const
{
    os << "iteration,objective,Es,Ee,residual,status,time\n";
    for (const auto &r : records)
        os << r.iteration << ',' << text::format_double(r.objective) << ','
           << text::format_double(r.Es) << ',' << text::format_double(r.Ee) << ','
           << text::format_double(r.residual) << ',' << to_string(r.status) << ','
           << text::format_double(r.time) << '\n';
}

int IterationTrace::iterations_to_tolerance(double tol) const
{
    for (std::size_t i = 1; i < records.size(); ++i)
    {
        const double prev = records[i - 1].objective;
        const double change = std::abs(records[i].objective - prev) / std::max(std::abs(prev), 1e-300);
        if (change < tol)
            return records[i].iteration;
    }
    return 0;
}

bool IterationTrace::monotone(double slack) const
{
    return max_drop() <= slack;
}

double IterationTrace::max_drop() const
{
    double drop = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i)
        drop = std::max(drop, records[i - 1].objective - records[i].objective);
    return drop;
}

namespace
{

double quad(const CMat &A, const CVec &v)
{
    return v.dot(A * v).real();
}

CVec principal_eigvec(const CMat &A)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(A);
    return es.eigenvectors().col(A.rows() - 1);
}

// I - C (C^H C)^{-1} C^H, or zero when C spans the whole space.
CMat null_projector(const CMat &C)
{
    const int n = static_cast<int>(C.rows());
    if (C.cols() >= n)
        return CMat::Zero(n, n);
    const CMat gram = C.adjoint() * C;
    return CMat::Identity(n, n) - C * gram.ldlt().solve(C.adjoint());
}

CVec scaled(const CVec &v, double power)
{
    const double n = v.norm();
    if (!(n > 0.0))
        return CVec::Zero(v.size());
    return v * (std::sqrt(power) / n);
}

CVec random_phase(int n, double power, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = std::polar(std::sqrt(power / n), U(rng));
    return v;
}

constexpr double kBudgetShare = 0.999; // keeps the heuristic start strictly inside the budgets
constexpr double kShrink = 0.99;       // strictness margin on the derived slacks
constexpr double kInvRhoMargin = 1.001;

BeamformingSolution heuristic_point(InitStrategy strategy, const ChannelSet &ch, const GramSet &grams,
                                    const PowerBudget &budget, const SpcaConfig &cfg,
                                    std::uint64_t seed)
{
    const SystemDims d = ch.dims();
    BeamformingSolution s = BeamformingSolution::zeros(d, 0.5);
    const double an = cfg.use_an ? cfg.an_fraction : 0.0;
    const double p_beam = kBudgetShare * (1.0 - an) * budget.P_T / d.K;
    const double p_an = kBudgetShare * an * budget.P_T;
    const double p_jam = kBudgetShare * budget.P_J;

    if (strategy == InitStrategy::matched_filter)
    {
        auto rng = make_stream(seed, 77);
        for (int k = 0; k < d.K; ++k)
            s.w[k] = scaled(ch.hbar[k], p_beam);
        if (cfg.use_an && p_an > 0.0)
            s.z = random_phase(d.n_t, p_an, rng);
        if (cfg.use_cj)
            s.q = random_phase(d.n_j, p_jam, rng);
        return s;
    }

    CMat leak = CMat::Zero(d.n_t, d.n_t);
    for (const auto &H : grams.Hhat_l_gram)
        leak += H;
    CMat Hc(d.n_t, d.K);
    CMat Gc(d.n_j, d.K);
    for (int k = 0; k < d.K; ++k)
    {
        Hc.col(k) = ch.hbar[k];
        Gc.col(k) = ch.gbar[k];
    }
    for (int k = 0; k < d.K; ++k)
    {
        CMat B = leak;
        for (int j = 0; j < d.K; ++j)
            if (j != k)
                B += grams.Hbar_k_gram[j];
        const double reg = 1e-3 * std::max(B.trace().real() / d.n_t, 1e-300);
        B.diagonal().array() += reg;
        s.w[k] = scaled(B.ldlt().solve(ch.hbar[k]), p_beam);
    }
    if (cfg.use_an && p_an > 0.0)
    {
        const CMat P = null_projector(Hc);
        CVec dir = principal_eigvec(P * leak * P);
        if (!((P * dir).norm() > 1e-8))
            dir = principal_eigvec(leak);
        s.z = scaled(P * dir, p_an);
        if (!(s.z.norm() > 0.0))
            s.z = scaled(dir, p_an);
    }
    if (cfg.use_cj)
    {
        CMat jam = CMat::Zero(d.n_j, d.n_j);
        for (const auto &G : grams.Ghat_l_gram)
            jam += G;
        const CMat P = null_projector(Gc);
        CVec v = P * principal_eigvec(P * jam * P);
        if (!(v.norm() > 1e-8))
            v = principal_eigvec(jam);
        s.q = scaled(v, p_jam);
    }
    return s;
}

// Slacks for which `s` is strictly inside the SOCP built around it, when
// such slacks exist. Returns false when some surrogate is non-positive.
bool derive_slacks(const GramSet &grams, const NoiseAndEfficiency &noise, const SocpConfig &sc,
                   BeamformingSolution &s)
{
    const SurrogateMetrics m = surrogate_metrics(grams, noise, s, sc, kInvRhoMargin);
    const double g = *std::min_element(m.sinr.begin(), m.sinr.end());
    const double l = *std::min_element(m.leak.begin(), m.leak.end());
    if (!(g > 0.0 && l > 0.0))
        return false;
    double es = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.a_cr.size(); ++k)
    {
        if (!(m.a_cr[k] > 0.0))
            return false;
        es = std::min(es, noise.eta_cr[k] * m.a_cr[k] * (1.0 - s.rho[k]));
    }
    const double ee = *std::min_element(m.eh_er.begin(), m.eh_er.end());
    s.r1 = 1.0 + kShrink * g;
    s.r2 = kShrink * l;
    // below the floor the point is not strictly feasible, but still a valid
    // expansion point for phase one
    s.Ebar_s = std::max(kShrink * es, sc.es_floor);
    s.Ebar_e = kShrink * ee;
    s.r1 = std::max(s.r1, 1.0 + sc.r1_tilde_floor);
    return true;
}

double max_residual_at(const ConicProblem &p, const BeamformingSolution &s)
{
    RVec x = lift_solution(p, s);
    const VarBlock &sinv = p.block("s_inv");
    x.segment(sinv.offset, sinv.size) *= kInvRhoMargin;
    return check_solution(p, x).max_residual;
}

void append_block(ConicProblem &p, const std::string &name, int size)
{
    const int old = p.n_vars;
    p.add_block(name, size);
    auto grow = [old, &p](RVec &v) {
        v.conservativeResize(p.n_vars);
        v.tail(p.n_vars - old).setZero();
    };
    grow(p.objective);
    for (auto &s : p.socs)
    {
        s.A.conservativeResize(Eigen::NoChange, p.n_vars);
        s.A.rightCols(p.n_vars - old).setZero();
        grow(s.c);
    }
    for (auto &r : p.nonneg)
        grow(r.a);
}

// max t s.t. r1 r2 >= t^2, t <= t_cap and every other constraint of the
// subproblem. Once t reaches the cap, harvest breaks ties, measured against
// es_scale and ee_scale so that a near-zero expansion Es keeps its weight.
ConicProblem phase1_problem(const ConicProblem &base, double t_cap, double tau, double es_scale,
                            double ee_scale)
{
    ConicProblem p = base;
    p.socs.erase(std::remove_if(p.socs.begin(), p.socs.end(),
                                [](const SocBlock &s) { return s.label == "rate"; }),
                 p.socs.end());
    append_block(p, "t", 1);
    const int t = p.block("t").offset;
    const int r1 = p.block("r1").offset, r2 = p.block("r2").offset;
    SocBlock s;
    s.A = RMat::Zero(2, p.n_vars);
    s.b = RVec::Zero(2);
    s.A(0, t) = 2.0;
    s.A(1, r1) = 1.0;
    s.A(1, r2) = -1.0;
    s.c = RVec::Zero(p.n_vars);
    s.c(r1) = 1.0;
    s.c(r2) = 1.0;
    s.label = "rate_phase1";
    p.socs.push_back(std::move(s));
    RVec cap = RVec::Zero(p.n_vars);
    cap(t) = -1.0;
    p.nonneg.push_back({cap, t_cap, "t_cap"});
    p.objective.setZero();
    const VarBlock &es = p.block("Es"), &ee = p.block("Ee");
    p.objective(es.offset) = 1e-3 * tau * es.unit / es_scale;
    p.objective(ee.offset) = 1e-3 * (1.0 - tau) * ee.unit / ee_scale;
    p.objective(t) = 1.0;
    return p;
}

ConicSolution solve_with_retry(const ConicProblem &p, const SolverOptions &opts)
{
    ConicSolution sol = solve(p, opts);
    if (sol.status == SolveStatus::iteration_limit)
    {
        SolverOptions more = opts;
        more.max_iters *= 2;
        sol = solve(p, more);
    }
    if (sol.status == SolveStatus::numerical_failure)
    {
        // stalls near the optimum are usually scaling artifacts
        SolverOptions other = opts;
        other.equilibrate = !opts.equilibrate;
        const ConicSolution alt = solve(p, other);
        if (alt.status == SolveStatus::optimal)
            return alt;
    }
    return sol;
}

InitResult try_strategy(InitStrategy strategy, const ChannelSet &ch, const RobustBounds &rb,
                        const GramSet &grams, const NoiseAndEfficiency &noise,
                        const PowerBudget &budget, const SpcaConfig &cfg, std::uint64_t seed)
{
    InitResult res;
    res.strategy_used = strategy;
    const SocpConfig sc = cfg.socp();
    const SystemDims dims = ch.dims();
    const double target = std::exp2(budget.Rbar_s);

    BeamformingSolution s = heuristic_point(strategy, ch, grams, budget, cfg, seed);
    for (int it = 0;; ++it)
    {
        if (!derive_slacks(grams, noise, sc, s))
        {
            res.message = "surrogates not positive at the start point";
            return res;
        }
        const ExpansionPoint e = ExpansionPoint::from_solution(s);
        const ConicProblem p = assemble_socp(ch, rb, grams, noise, budget, e, sc);
        if (s.r1 * s.r2 > target && max_residual_at(p, s) < 0.0)
        {
            res.ok = true;
            res.point = e;
            res.start = s;
            res.phase1_iterations = it;
            return res;
        }
        if (it >= cfg.phase1_iters)
            break;
        const SurrogateMetrics m = surrogate_metrics(grams, noise, s, sc);
        double es_scale = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m.a_cr.size(); ++k)
            es_scale = std::min(es_scale, noise.eta_cr[k] * m.a_cr[k]);
        const double ee_scale = *std::min_element(m.eh_er.begin(), m.eh_er.end());
        const ConicProblem p1 =
            phase1_problem(p, 1.01 * std::sqrt(target) / kShrink, budget.tau,
                           std::max(es_scale, sc.es_floor), std::max(ee_scale, sc.es_floor));
        const ConicSolution sol = solve_with_retry(p1, cfg.solver);
        if (sol.status != SolveStatus::optimal)
        {
            res.message = std::string("phase-one solve ended with ") + to_string(sol.status);
            return res;
        }
        BeamformingSolution next = extract_solution(p1, sol.x, dims);
        for (auto &r : next.rho)
            r = std::clamp(r, sc.rho_floor, 1.0 - 1e-6);
        s = next;
    }
    res.message = "rate target not reached within the phase-one budget";
    return res;
}

} // namespace

SurrogateMetrics surrogate_metrics(const GramSet &grams, const NoiseAndEfficiency &noise,
                                   const BeamformingSolution &sol, const SocpConfig &cfg,
                                   double s_inv_margin)
{
    const int K = static_cast<int>(grams.Hbar_k_gram.size());
    const int L = static_cast<int>(grams.Hhat_l_gram.size());
    const CVec z = cfg.use_an ? sol.z : CVec::Zero(sol.z.size());
    const CVec q = cfg.use_cj ? sol.q : CVec::Zero(sol.q.size());
    SurrogateMetrics m;
    for (int k = 0; k < K; ++k)
    {
        const CMat &Hp = grams.H_xs_plus[k];
        double den = noise.sigma2_cr[k] + quad(Hp, z) + quad(grams.G_xs_plus[k], q) +
                     noise.delta2_cr[k] * s_inv_margin / sol.rho[k];
        for (int j = 0; j < K; ++j)
            if (j != k)
                den += quad(Hp, sol.w[j]);
        m.sinr.push_back(quad(grams.H_xs_minus[k], sol.w[k]) / den);

        const CMat &Ah = grams.H_xs_minus[k];
        const CMat &Ag = cfg.paper_literal_signs ? grams.G_xs_plus[k] : grams.G_xs_minus[k];
        double a = noise.sigma2_cr[k] + quad(Ah, z) + quad(Ag, q);
        for (const auto &w : sol.w)
            a += quad(Ah, w);
        m.a_cr.push_back(a);
    }
    for (int l = 0; l < L; ++l)
    {
        const double s2 = noise.sigma2_er[l];
        const double num = s2 + quad(grams.H_xe_minus[l], z) + quad(grams.G_xe_minus[l], q);
        for (int k = 0; k < K; ++k)
        {
            const double den = s2 + quad(grams.H_xe_plus[l], z) + quad(grams.H_xe_plus[l], sol.w[k]) +
                               quad(grams.G_xe_plus[l], q);
            m.leak.push_back(num / den);
        }
        const CMat &Ah = grams.H_xe_minus[l];
        const CMat &Ag = cfg.paper_literal_signs ? grams.G_xe_plus[l] : grams.G_xe_minus[l];
        double e = grams.n_e[l] * s2 + quad(Ah, z) + quad(Ag, q);
        for (const auto &w : sol.w)
            e += quad(Ah, w);
        m.eh_er.push_back(noise.eta_er[l] * e);
    }
    return m;
}

InitResult find_initial_point(const ChannelSet &ch, const RobustBounds &rb, const GramSet &grams,
                              const NoiseAndEfficiency &noise, const PowerBudget &budget,
                              const SpcaConfig &cfg, std::uint64_t seed)
{
    cfg.validate();
    InitResult first = try_strategy(cfg.init_strategy, ch, rb, grams, noise, budget, cfg, seed);
    if (first.ok)
        return first;
    const InitStrategy other = cfg.init_strategy == InitStrategy::matched_filter
                                   ? InitStrategy::null_steering
                                   : InitStrategy::matched_filter;
    InitResult second = try_strategy(other, ch, rb, grams, noise, budget, cfg, seed);
    if (second.ok)
        return second;
    second.message = first.message + "; fallback: " + second.message;
    return second;
}

SpcaResult run_spca(const ChannelSet &ch, const NoiseAndEfficiency &noise, const PowerBudget &budget,
                    const SpcaConfig &cfg, std::uint64_t seed)
{
    cfg.validate();
    budget.validate();
    const SystemDims dims = ch.dims();
    ch.validate(dims);
    noise.validate(dims);
    const SocpConfig sc = cfg.socp();
    const RobustBounds rb = compute_robust_bounds(ch);
    const GramSet grams = build_gram_set(ch, rb);

    SpcaResult res;
    res.flags = psd_flags(grams, sc);
    res.init = find_initial_point(ch, rb, grams, noise, budget, cfg, seed);
    if (!res.init.ok)
    {
        res.status = RunStatus::init_failure;
        res.message = res.init.message;
        res.solution = res.init.start;
        return res;
    }

    ExpansionPoint e = res.init.point;
    res.status = RunStatus::iteration_cap;
    bool have = false;
    for (int it = 1; it <= cfg.max_outer_iters; ++it)
    {
        const auto t0 = std::chrono::steady_clock::now();
        ConicProblem p = assemble_socp(ch, rb, grams, noise, budget, e, sc);
        const ConicSolution sol = solve_with_retry(p, cfg.solver);
        IterationRecord rec;
        rec.iteration = it;
        rec.status = sol.status;
        rec.solver_iterations = sol.solver_iterations;
        if (sol.status != SolveStatus::optimal)
        {
            rec.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (have)
            {
                rec.objective = res.objective;
                rec.Es = res.solution.Ebar_s;
                rec.Ee = res.solution.Ebar_e;
            }
            res.trace.records.push_back(rec);
            res.status = RunStatus::solver_failure;
            res.message = std::string("subproblem ") + std::to_string(it) + " ended with " +
                          to_string(sol.status);
            if (!have)
                res.solution = res.init.start;
            return res;
        }
        BeamformingSolution s = extract_solution(p, sol.x, dims);
        const double obj = budget.tau * s.Ebar_s + (1.0 - budget.tau) * s.Ebar_e;
        rec.objective = obj;
        rec.Es = s.Ebar_s;
        rec.Ee = s.Ebar_e;
        rec.residual = check_solution(p, sol.x).max_residual;
        rec.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.trace.records.push_back(rec);

        const double prev = res.objective;
        res.solution = s;
        res.objective = obj;
        res.final_problem = std::move(p);
        res.final_x = sol.x;
        const bool had = have;
        have = true;
        if (had && std::abs(obj - prev) <= cfg.rel_obj_tol * std::max(std::abs(prev), 1e-300))
        {
            res.status = RunStatus::converged;
            break;
        }

        const double d = cfg.damping;
        ExpansionPoint next = ExpansionPoint::from_solution(s);
        for (int k = 0; k < dims.K; ++k)
            next.w_tilde[k] = e.w_tilde[k] + d * (s.w[k] - e.w_tilde[k]);
        next.z_tilde = e.z_tilde + d * (s.z - e.z_tilde);
        next.q_tilde = e.q_tilde + d * (s.q - e.q_tilde);
        next.r1_tilde = std::max(e.r1_tilde + d * (s.r1 - e.r1_tilde), 1.0 + cfg.r1_tilde_floor);
        next.r2_tilde = e.r2_tilde + d * (s.r2 - e.r2_tilde);
        next.Es_tilde = std::max(e.Es_tilde + d * (s.Ebar_s - e.Es_tilde), cfg.es_floor);
        e = next;
    }
    res.message = to_string(res.status);
    return res;
}

ValidationReport validate_solution(const SpcaResult &res, const ChannelSet &ch,
                                   const NoiseAndEfficiency &noise, const PowerBudget &budget,
                                   int n_samples, std::uint64_t seed)
{
    ValidationReport v;
    const BeamformingSolution &s = res.solution;
    if (res.final_x.size() == res.final_problem.n_vars && res.final_problem.n_vars > 0)
        v.surrogate_residual = check_solution(res.final_problem, res.final_x).max_residual;
    v.power_residual_tx = s.transmit_power() - budget.P_T;
    v.power_residual_jam = s.jammer_power() - budget.P_J;
    v.rate_slack = s.r1 * s.r2 - std::exp2(budget.Rbar_s);
    v.psd_flags_pass = res.flags.all_pass();

    const WorstCaseReport wc = empirical_worst_case(s, ch, noise, n_samples, seed);
    v.n_samples = wc.n_samples;
    v.min_secrecy = wc.min_secrecy_rate;
    v.min_relaxed_secrecy = wc.min_relaxed_secrecy_rate;
    v.min_harvest_cr = wc.min_harvest_cr;
    v.min_harvest_er = wc.min_harvest_er;
    v.harvest_cr_margin = *std::min_element(wc.min_harvest_cr.begin(), wc.min_harvest_cr.end()) - s.Ebar_s;
    v.harvest_er_margin = *std::min_element(wc.min_harvest_er.begin(), wc.min_harvest_er.end()) - s.Ebar_e;
    v.secrecy_margin = *std::min_element(wc.min_relaxed_secrecy_rate.begin(),
                                         wc.min_relaxed_secrecy_rate.end()) -
                       budget.Rbar_s;
    return v;
}

} // namespace swipt
