#include "swipt/socp_builder.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace swipt
{

ExpansionPoint ExpansionPoint::from_solution(const BeamformingSolution &sol)
{
    ExpansionPoint e;
    e.w_tilde = sol.w;
    e.z_tilde = sol.z;
    e.q_tilde = sol.q;
    e.r1_tilde = sol.r1;
    e.r2_tilde = sol.r2;
    e.Es_tilde = sol.Ebar_s;
    return e;
}

double TaylorQol::operator()(const CVec &w, double t) const
{
    return 2.0 * g.dot(w).real() + ct * t + c0;
}

TaylorQol taylor_qol(const CMat &A, double a, const CVec &w_tilde, double t_tilde)
{
    const double den = t_tilde - a;
    if (!(den > 0.0))
        throw DomainError("taylor_qol: expansion point must satisfy t~ > a");
    TaylorQol f;
    const CVec Aw = A * w_tilde;
    const double q = w_tilde.dot(Aw).real();
    f.g = Aw / den;
    f.ct = -q / (den * den);
    f.c0 = q * a / (den * den);
    f.f_tilde = q / den;
    return f;
}

double quad_over_lin(const CMat &A, double a, const CVec &w, double t)
{
    if (!(t > a))
        throw DomainError("quad_over_lin: requires t > a");
    return w.dot(A * w).real() / (t - a);
}

bool is_psd(const CMat &A, double rel_tol)
{
    if (A.size() == 0)
        return true;
    Eigen::SelfAdjointEigenSolver<CMat> es(A, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    return ev(0) >= -rel_tol * scale;
}

CMat psd_factor(const CMat &A)
{
    const int n = static_cast<int>(A.rows());
    Eigen::SelfAdjointEigenSolver<CMat> es(A);
    const RVec &ev = es.eigenvalues();
    const double top = n ? std::max(ev.cwiseAbs().maxCoeff(), 0.0) : 0.0;
    if (n && ev(0) < -1e-10 * top)
        throw NumericError("psd_factor: matrix is not positive semidefinite");
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (ev(i) > 1e-13 * top)
            keep.push_back(i);
    CMat M(keep.size(), n);
    for (std::size_t r = 0; r < keep.size(); ++r)
        M.row(r) = std::sqrt(ev(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
    return M;
}

namespace
{

std::string wname(int k)
{
    return "w" + std::to_string(k);
}

int block_size_complex(const VarBlock &b)
{
    return b.size / 2;
}

// a += scale * coefficients of 2 Re{g^H v} for the complex block v
void add_re(RVec &a, const VarBlock &b, const CVec &g, double scale)
{
    const int n = block_size_complex(b);
    a.segment(b.offset, n) += 2.0 * scale * g.real();
    a.segment(b.offset + n, n) += 2.0 * scale * g.imag();
}

// real representation of v -> M v
RMat lift(const CMat &M)
{
    const int r = static_cast<int>(M.rows()), n = static_cast<int>(M.cols());
    RMat L(2 * r, 2 * n);
    L.topLeftCorner(r, n) = M.real();
    L.topRightCorner(r, n) = -M.imag();
    L.bottomLeftCorner(r, n) = M.imag();
    L.bottomRightCorner(r, n) = M.real();
    return L;
}

struct QuadTerm
{
    std::string block;
    CMat M; // contributes ||M v||^2
};

// sum ||M_i v_i||^2 <= ua^T x + ub, written as
// ||[2 M x / sqrt(S); u / S - 1]|| <= u / S + 1.
void add_quad_cone(ConicProblem &p, const std::vector<QuadTerm> &terms, const RVec &ua, double ub,
                   double S, const std::string &label)
{
    int rows = 1;
    for (const auto &t : terms)
        rows += 2 * static_cast<int>(t.M.rows());
    SocBlock s;
    s.A = RMat::Zero(rows, p.n_vars);
    s.b = RVec::Zero(rows);
    const double f = 2.0 / std::sqrt(S);
    int r = 0;
    for (const auto &t : terms)
    {
        const VarBlock &b = p.block(t.block);
        const RMat L = lift(t.M);
        s.A.block(r, b.offset, L.rows(), L.cols()) = f * L;
        r += static_cast<int>(L.rows());
    }
    s.A.row(r) = ua.transpose() / S;
    s.b(r) = ub / S - 1.0;
    s.c = ua / S;
    s.d = ub / S + 1.0;
    s.label = label;
    p.socs.push_back(std::move(s));
}

// sum_j [2 Re{(A v~_j)^H v_j} - v~_j^H A v~_j] into (a, b)
void add_linearized(RVec &a, double &b, const VarBlock &blk, const CMat &A, const CVec &v_tilde,
                    double scale)
{
    const CVec Av = A * v_tilde;
    add_re(a, blk, Av, scale);
    b -= scale * v_tilde.dot(Av).real();
}

double linearized_value(const CMat &A, const CVec &v)
{
    return v.dot(A * v).real();
}

void check_point(const ExpansionPoint &exp, int K)
{
    if (static_cast<int>(exp.w_tilde.size()) != K)
        throw DomainError("expansion point: expected one beam per CR");
}

} // namespace

ConicProblem make_layout(const SystemDims &dims, const SocpConfig &cfg, double unit_Es,
                         double unit_Ee)
{
    dims.validate();
    if (!(unit_Es > 0.0 && unit_Ee > 0.0))
        throw DomainError("make_layout: units must be positive");
    ConicProblem p;
    for (int k = 0; k < dims.K; ++k)
        p.add_block(wname(k), 2 * dims.n_t);
    if (cfg.use_an)
        p.add_block("z", 2 * dims.n_t);
    if (cfg.use_cj)
        p.add_block("q", 2 * dims.n_j);
    p.add_block("rho", dims.K);
    p.add_block("Es", 1, unit_Es);
    p.add_block("Ee", 1, unit_Ee);
    p.add_block("r1", 1);
    p.add_block("r2", 1);
    p.add_block("s_inv", dims.K);
    p.objective = RVec::Zero(p.n_vars);
    return p;
}

void build_rate_soc(ConicProblem &p, double Rbar_s)
{
    if (!(Rbar_s >= 0.0))
        throw DomainError("build_rate_soc: target rate must be >= 0");
    const int r1 = p.block("r1").offset, r2 = p.block("r2").offset;
    SocBlock s;
    s.A = RMat::Zero(2, p.n_vars);
    s.b = RVec::Zero(2);
    s.b(0) = std::sqrt(std::exp2(Rbar_s + 2.0));
    s.A(1, r1) = 1.0;
    s.A(1, r2) = -1.0;
    s.c = RVec::Zero(p.n_vars);
    s.c(r1) = 1.0;
    s.c(r2) = 1.0;
    s.label = "rate";
    p.socs.push_back(std::move(s));
}

void build_cr_sinr_constraint(ConicProblem &p, int k, const GramSet &grams,
                              const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                              const SocpConfig &cfg)
{
    const int K = static_cast<int>(grams.Hbar_k_gram.size());
    if (k < 0 || k >= K)
        throw DomainError("build_cr_sinr_constraint: CR index out of range");
    check_point(exp, K);
    const TaylorQol F = taylor_qol(grams.H_xs_minus[k], 1.0, exp.w_tilde[k], exp.r1_tilde);
    const double sigma2 = noise.sigma2_cr[k], delta2 = noise.delta2_cr[k];
    const VarBlock &sinv = p.block("s_inv");
    const VarBlock &rho = p.block("rho");

    // u = F(w_k, r1) - sigma^2 - delta^2 * s_inv_k
    RVec ua = RVec::Zero(p.n_vars);
    add_re(ua, p.block(wname(k)), F.g, 1.0);
    ua(p.block("r1").offset) += F.ct;
    ua(sinv.offset + k) -= delta2;
    const double ub = F.c0 - sigma2;

    std::vector<QuadTerm> terms;
    const CMat Mh = psd_factor(grams.H_xs_plus[k]);
    for (int j = 0; j < K; ++j)
        if (j != k)
            terms.push_back({wname(j), Mh});
    if (cfg.use_an)
        terms.push_back({"z", Mh});
    if (cfg.use_cj)
        terms.push_back({"q", psd_factor(grams.G_xs_plus[k])});
    const double S = std::max(std::abs(F.f_tilde), delta2 + sigma2);
    add_quad_cone(p, terms, ua, ub, S, "sinr_" + std::to_string(k));

    // delta^2 / rho_k <= delta^2 * s_inv_k  <=>  ||[2, s - rho]|| <= s + rho
    SocBlock h;
    h.A = RMat::Zero(2, p.n_vars);
    h.b = RVec::Zero(2);
    h.b(0) = 2.0;
    h.A(1, sinv.offset + k) = 1.0;
    h.A(1, rho.offset + k) = -1.0;
    h.c = RVec::Zero(p.n_vars);
    h.c(sinv.offset + k) = 1.0;
    h.c(rho.offset + k) = 1.0;
    h.label = "inv_rho_" + std::to_string(k);
    p.socs.push_back(std::move(h));
}

void build_er_leakage_constraint(ConicProblem &p, int l, int k, const GramSet &grams,
                                 const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                                 const SocpConfig &cfg)
{
    const int K = static_cast<int>(grams.Hbar_k_gram.size());
    const int L = static_cast<int>(grams.Hhat_l_gram.size());
    if (k < 0 || k >= K || l < 0 || l >= L)
        throw DomainError("build_er_leakage_constraint: index out of range");
    check_point(exp, K);
    const double r2t = exp.r2_tilde;
    if (!(r2t > 0.0))
        throw DomainError("build_er_leakage_constraint: r2~ must be > 0");
    const double sigma2 = noise.sigma2_er[l];
    const int r2 = p.block("r2").offset;

    // u = sigma^2 (2/r2~ - r2/r2~^2) + F_z + F_q - sigma^2
    RVec ua = RVec::Zero(p.n_vars);
    double ub = sigma2 * 2.0 / r2t - sigma2;
    ua(r2) -= sigma2 / (r2t * r2t);
    double scale = sigma2 / r2t;
    if (cfg.use_an)
    {
        const TaylorQol Fz = taylor_qol(grams.H_xe_minus[l], 0.0, exp.z_tilde, r2t);
        add_re(ua, p.block("z"), Fz.g, 1.0);
        ua(r2) += Fz.ct;
        ub += Fz.c0;
        scale += std::abs(Fz.f_tilde);
    }
    if (cfg.use_cj)
    {
        const TaylorQol Fq = taylor_qol(grams.G_xe_minus[l], 0.0, exp.q_tilde, r2t);
        add_re(ua, p.block("q"), Fq.g, 1.0);
        ua(r2) += Fq.ct;
        ub += Fq.c0;
        scale += std::abs(Fq.f_tilde);
    }

    std::vector<QuadTerm> terms;
    const CMat Mh = psd_factor(grams.H_xe_plus[l]);
    terms.push_back({wname(k), Mh});
    if (cfg.use_an)
        terms.push_back({"z", Mh});
    if (cfg.use_cj)
        terms.push_back({"q", psd_factor(grams.G_xe_plus[l])});
    add_quad_cone(p, terms, ua, ub, std::max(scale, sigma2),
                  "leak_" + std::to_string(l) + "_" + std::to_string(k));
}

void build_eh_cr_constraint(ConicProblem &p, int k, const GramSet &grams,
                            const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                            const SocpConfig &cfg)
{
    const int K = static_cast<int>(grams.Hbar_k_gram.size());
    if (k < 0 || k >= K)
        throw DomainError("build_eh_cr_constraint: CR index out of range");
    check_point(exp, K);
    if (!(exp.Es_tilde > 0.0 && exp.Es_tilde >= cfg.es_floor))
        throw DomainError("build_eh_cr_constraint: Es~ must be at least the floor");
    const double eta = noise.eta_cr[k];
    const CMat &Ah = grams.H_xs_minus[k];
    const CMat &Ag = cfg.paper_literal_signs ? grams.G_xs_plus[k] : grams.G_xs_minus[k];

    // a = sigma^2 + linearized received power
    RVec aa = RVec::Zero(p.n_vars);
    double ab = noise.sigma2_cr[k];
    for (int j = 0; j < K; ++j)
        add_linearized(aa, ab, p.block(wname(j)), Ah, exp.w_tilde[j], 1.0);
    if (cfg.use_an)
        add_linearized(aa, ab, p.block("z"), Ah, exp.z_tilde, 1.0);
    if (cfg.use_cj)
        add_linearized(aa, ab, p.block("q"), Ag, exp.q_tilde, 1.0);

    double a_tilde = noise.sigma2_cr[k];
    for (int j = 0; j < K; ++j)
        a_tilde += linearized_value(Ah, exp.w_tilde[j]);
    if (cfg.use_an)
        a_tilde += linearized_value(Ah, exp.z_tilde);
    if (cfg.use_cj)
        a_tilde += linearized_value(Ag, exp.q_tilde);
    const double S = std::max(std::abs(a_tilde), noise.sigma2_cr[k]);

    // e_s = sqrt(E~)/2 + Es / (2 sqrt(E~))
    const VarBlock &es = p.block("Es");
    const double sq = std::sqrt(exp.Es_tilde);
    const double f = 2.0 / std::sqrt(eta * S);
    const int rho = p.block("rho").offset + k;

    SocBlock s;
    s.A = RMat::Zero(2, p.n_vars);
    s.b = RVec::Zero(2);
    s.A(0, es.offset) = f * es.unit / (2.0 * sq);
    s.b(0) = f * 0.5 * sq;
    s.A.row(1) = aa.transpose() / S;
    s.A(1, rho) += 1.0;
    s.b(1) = ab / S - 1.0;
    s.c = aa / S;
    s.c(rho) -= 1.0;
    s.d = ab / S + 1.0;
    s.label = "eh_cr_" + std::to_string(k);
    p.socs.push_back(std::move(s));
}

void build_eh_er_constraint(ConicProblem &p, int l, const GramSet &grams,
                            const NoiseAndEfficiency &noise, const ExpansionPoint &exp,
                            const SocpConfig &cfg)
{
    const int K = static_cast<int>(grams.Hbar_k_gram.size());
    const int L = static_cast<int>(grams.Hhat_l_gram.size());
    if (l < 0 || l >= L)
        throw DomainError("build_eh_er_constraint: ER index out of range");
    check_point(exp, K);
    const double eta = noise.eta_er[l];
    const CMat &Ah = grams.H_xe_minus[l];
    const CMat &Ag = cfg.paper_literal_signs ? grams.G_xe_plus[l] : grams.G_xe_minus[l];
    const double floor_noise = grams.n_e[l] * noise.sigma2_er[l];

    RVec a = RVec::Zero(p.n_vars);
    double b = floor_noise;
    double value = 0.0;
    for (int j = 0; j < K; ++j)
    {
        add_linearized(a, b, p.block(wname(j)), Ah, exp.w_tilde[j], 1.0);
        value += linearized_value(Ah, exp.w_tilde[j]);
    }
    if (cfg.use_an)
    {
        add_linearized(a, b, p.block("z"), Ah, exp.z_tilde, 1.0);
        value += linearized_value(Ah, exp.z_tilde);
    }
    if (cfg.use_cj)
    {
        add_linearized(a, b, p.block("q"), Ag, exp.q_tilde, 1.0);
        value += linearized_value(Ag, exp.q_tilde);
    }
    const VarBlock &ee = p.block("Ee");
    a(ee.offset) -= ee.unit / eta;
    const double S = std::max({std::abs(value) + floor_noise, ee.unit / eta});
    p.nonneg.push_back({a / S, b / S, "eh_er_" + std::to_string(l)});
}

void build_power_constraints(ConicProblem &p, const PowerBudget &budget)
{
    if (!(budget.P_T > 0.0 && budget.P_J > 0.0))
        throw DomainError("build_power_constraints: budgets must be positive");
    std::vector<const VarBlock *> tx;
    for (const auto &b : p.var_index)
        if (b.name.size() > 1 && b.name[0] == 'w' && std::isdigit(static_cast<unsigned char>(b.name[1])))
            tx.push_back(&b);
    if (const VarBlock *z = p.find("z"))
        tx.push_back(z);

    auto add = [&p](const std::vector<const VarBlock *> &blocks, double P, const std::string &label) {
        int rows = 0;
        for (const auto *b : blocks)
            rows += b->size;
        SocBlock s;
        s.A = RMat::Zero(rows, p.n_vars);
        s.b = RVec::Zero(rows);
        int r = 0;
        for (const auto *b : blocks)
        {
            for (int i = 0; i < b->size; ++i)
                s.A(r + i, b->offset + i) = 1.0 / std::sqrt(P);
            r += b->size;
        }
        s.c = RVec::Zero(p.n_vars);
        s.d = 1.0;
        s.label = label;
        p.socs.push_back(std::move(s));
    };
    add(tx, budget.P_T, "power_tx");
    if (const VarBlock *q = p.find("q"))
        add({q}, budget.P_J, "power_jam");
}

void build_box_rows(ConicProblem &p, const SocpConfig &cfg)
{
    const VarBlock &rho = p.block("rho");
    for (int k = 0; k < rho.size; ++k)
    {
        RVec a = RVec::Zero(p.n_vars);
        a(rho.offset + k) = 1.0;
        p.nonneg.push_back({a, -cfg.rho_floor, "rho_min_" + std::to_string(k)});
        p.nonneg.push_back({-a, 1.0, "rho_max_" + std::to_string(k)});
    }
    RVec a1 = RVec::Zero(p.n_vars);
    a1(p.block("r1").offset) = 1.0;
    p.nonneg.push_back({a1, -(1.0 + cfg.r1_floor), "r1_min"});
    RVec a2 = RVec::Zero(p.n_vars);
    a2(p.block("r2").offset) = -1.0;
    p.nonneg.push_back({a2, 1.0, "r2_max"});
}

ConicProblem assemble_socp(const ChannelSet &ch, const RobustBounds &rb, const GramSet &grams,
                           const NoiseAndEfficiency &noise, const PowerBudget &budget,
                           const ExpansionPoint &exp, const SocpConfig &cfg)
{
    (void)rb; // the shifts already live in the Gram set
    const SystemDims dims = ch.dims();
    budget.validate();
    check_point(exp, dims.K);

    // coordinate units near the expected magnitudes of the harvest floors
    const double unit_Es = std::max(exp.Es_tilde, cfg.es_floor);
    double unit_Ee = std::numeric_limits<double>::infinity();
    for (int l = 0; l < dims.L; ++l)
    {
        double v = grams.n_e[l] * noise.sigma2_er[l];
        for (const auto &w : exp.w_tilde)
            v += linearized_value(grams.Hhat_l_gram[l], w);
        if (cfg.use_an)
            v += linearized_value(grams.Hhat_l_gram[l], exp.z_tilde);
        if (cfg.use_cj)
            v += linearized_value(grams.Ghat_l_gram[l], exp.q_tilde);
        unit_Ee = std::min(unit_Ee, noise.eta_er[l] * v);
    }
    unit_Ee = std::max(unit_Ee, cfg.es_floor);

    ConicProblem p = make_layout(dims, cfg, unit_Es, unit_Ee);
    const double cs = budget.tau * unit_Es, ce = (1.0 - budget.tau) * unit_Ee;
    const double cmax = std::max(cs, ce);
    p.objective(p.block("Es").offset) = cs / cmax;
    p.objective(p.block("Ee").offset) = ce / cmax;

    ExpansionPoint e = exp;
    e.Es_tilde = std::max(exp.Es_tilde, cfg.es_floor);
    if (!cfg.use_an)
        e.z_tilde = CVec::Zero(dims.n_t);
    if (!cfg.use_cj)
        e.q_tilde = CVec::Zero(dims.n_j);

    build_rate_soc(p, budget.Rbar_s);
    for (int k = 0; k < dims.K; ++k)
        build_cr_sinr_constraint(p, k, grams, noise, e, cfg);
    for (int l = 0; l < dims.L; ++l)
        for (int k = 0; k < dims.K; ++k)
            build_er_leakage_constraint(p, l, k, grams, noise, e, cfg);
    for (int k = 0; k < dims.K; ++k)
        build_eh_cr_constraint(p, k, grams, noise, e, cfg);
    for (int l = 0; l < dims.L; ++l)
        build_eh_er_constraint(p, l, grams, noise, e, cfg);
    build_power_constraints(p, budget);
    build_box_rows(p, cfg);
    p.validate();
    return p;
}

namespace
{

void put(RVec &x, const VarBlock &b, const CVec &v)
{
    const int n = block_size_complex(b);
    if (v.size() != n)
        throw DomainError("lift_solution: vector length mismatch for '" + b.name + "'");
    x.segment(b.offset, n) = v.real();
    x.segment(b.offset + n, n) = v.imag();
}

CVec get(const RVec &x, const VarBlock &b)
{
    const int n = block_size_complex(b);
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = cplx(x(b.offset + i), x(b.offset + n + i));
    return v;
}

} // namespace

RVec lift_solution(const ConicProblem &p, const BeamformingSolution &sol)
{
    RVec x = RVec::Zero(p.n_vars);
    for (std::size_t k = 0; k < sol.w.size(); ++k)
        put(x, p.block(wname(static_cast<int>(k))), sol.w[k]);
    if (const VarBlock *z = p.find("z"))
        put(x, *z, sol.z);
    if (const VarBlock *q = p.find("q"))
        put(x, *q, sol.q);
    const VarBlock &rho = p.block("rho");
    const VarBlock &sinv = p.block("s_inv");
    for (int k = 0; k < rho.size; ++k)
    {
        x(rho.offset + k) = sol.rho[k];
        x(sinv.offset + k) = 1.0 / sol.rho[k];
    }
    const VarBlock &es = p.block("Es"), &ee = p.block("Ee");
    x(es.offset) = sol.Ebar_s / es.unit;
    x(ee.offset) = sol.Ebar_e / ee.unit;
    x(p.block("r1").offset) = sol.r1;
    x(p.block("r2").offset) = sol.r2;
    return x;
}

BeamformingSolution extract_solution(const ConicProblem &p, const RVec &x, const SystemDims &dims)
{
    if (x.size() != p.n_vars)
        throw DomainError("extract_solution: length mismatch");
    BeamformingSolution s = BeamformingSolution::zeros(dims);
    for (int k = 0; k < dims.K; ++k)
        s.w[k] = get(x, p.block(wname(k)));
    if (const VarBlock *z = p.find("z"))
        s.z = get(x, *z);
    if (const VarBlock *q = p.find("q"))
        s.q = get(x, *q);
    const VarBlock &rho = p.block("rho");
    for (int k = 0; k < dims.K; ++k)
        s.rho[k] = x(rho.offset + k);
    const VarBlock &es = p.block("Es"), &ee = p.block("Ee");
    s.Ebar_s = es.unit * x(es.offset);
    s.Ebar_e = ee.unit * x(ee.offset);
    s.r1 = x(p.block("r1").offset);
    s.r2 = x(p.block("r2").offset);
    return s;
}

bool PsdFlags::all_pass() const
{
    auto all = [](const std::vector<bool> &v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
    return all(cr_sinr) && all(eh_cr) && all(er_leak) && all(eh_er);
}

bool PsdFlags::harvest_pass() const
{
    auto all = [](const std::vector<bool> &v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
    return all(eh_cr) && all(eh_er);
}

PsdFlags psd_flags(const GramSet &grams, const SocpConfig &cfg)
{
    PsdFlags f;
    for (std::size_t k = 0; k < grams.H_xs_minus.size(); ++k)
    {
        const bool h = is_psd(grams.H_xs_minus[k]);
        const CMat &g = cfg.paper_literal_signs ? grams.G_xs_plus[k] : grams.G_xs_minus[k];
        f.cr_sinr.push_back(h);
        f.eh_cr.push_back(h && (!cfg.use_cj || is_psd(g)));
    }
    for (std::size_t l = 0; l < grams.H_xe_minus.size(); ++l)
    {
        const bool h = is_psd(grams.H_xe_minus[l]);
        const bool gm = !cfg.use_cj || is_psd(grams.G_xe_minus[l]);
        const CMat &g = cfg.paper_literal_signs ? grams.G_xe_plus[l] : grams.G_xe_minus[l];
        f.er_leak.push_back((!cfg.use_an || h) && gm);
        f.eh_er.push_back(h && (!cfg.use_cj || is_psd(g)));
    }
    return f;
}

} // namespace swipt
