#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "swipt/socp_builder.hpp"

using namespace swipt;

namespace
{

CVec randn(std::mt19937_64 &rng, int n, double scale = 1.0)
{
    std::normal_distribution<double> N(0.0, scale);
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = cplx(N(rng), N(rng));
    return v;
}

CMat random_psd(std::mt19937_64 &rng, int n, int rank)
{
    CMat B(n, rank);
    for (int j = 0; j < rank; ++j)
        B.col(j) = randn(rng, n);
    return B * B.adjoint();
}

const SocBlock &cone(const ConicProblem &p, const std::string &label)
{
    for (const auto &s : p.socs)
        if (s.label == label)
            return s;
    FAIL("no cone " << label);
    throw 0;
}

const LinearRow &row(const ConicProblem &p, const std::string &label)
{
    for (const auto &r : p.nonneg)
        if (r.label == label)
            return r;
    FAIL("no row " << label);
    throw 0;
}

// c^T x + d - ||A x + b||, >= 0 inside the cone
double margin(const SocBlock &s, const RVec &x)
{
    return s.c.dot(x) + s.d - (s.A * x + s.b).norm();
}

struct Fixture
{
    Scenario sc;
    RobustBounds rb;
    GramSet grams;
    ExpansionPoint exp;
    PowerBudget budget;

    explicit Fixture(std::uint64_t seed, double eps = 0.01)
    {
        ScenarioParams p;
        p.radii = ErrorRadii::uniform(eps, eps);
        sc = make_scenario(p, seed);
        rb = compute_robust_bounds(sc.channels);
        grams = build_gram_set(sc.channels, rb);
        std::mt19937_64 rng(seed);
        for (int k = 0; k < sc.dims.K; ++k)
            exp.w_tilde.push_back(randn(rng, sc.dims.n_t, 1.0));
        exp.z_tilde = randn(rng, sc.dims.n_t, 0.5);
        exp.q_tilde = randn(rng, sc.dims.n_j, 1.0);
        exp.r1_tilde = 1.5;
        exp.r2_tilde = 0.9;
        exp.Es_tilde = 1e-9;
        budget.P_T = budget.P_J = 10.0;
    }

    ConicProblem assemble(const SocpConfig &cfg = {}) const
    {
        return assemble_socp(sc.channels, rb, grams, sc.noise, budget, exp, cfg);
    }
};

RVec set_vars(const ConicProblem &p, const std::map<std::string, double> &vals)
{
    RVec x = RVec::Zero(p.n_vars);
    for (const auto &[name, v] : vals)
    {
        const VarBlock &b = p.block(name);
        x.segment(b.offset, b.size).setConstant(v / b.unit);
    }
    return x;
}

} // namespace

TEST_CASE("Taylor surrogate hand case")
{
    // A = I, a = 0, w~ = 1, t~ = 1: F(w, t) = 2 Re{w} - t
    const TaylorQol F = taylor_qol(CMat::Identity(1, 1), 0.0, CVec::Ones(1), 1.0);
    for (double re : {-2.0, 0.0, 0.3, 5.0})
        for (double t : {0.5, 1.0, 7.0})
        {
            CVec w(1);
            w[0] = cplx(re, 1.7);
            CHECK(F(w, t) == doctest::Approx(2.0 * re - t).epsilon(1e-15));
        }
    CHECK_THROWS_AS(taylor_qol(CMat::Identity(1, 1), 2.0, CVec::Ones(1), 2.0), DomainError);
}

TEST_CASE("Taylor surrogate underestimates and touches")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    long violations = 0, touch_misses = 0;
    const int n_samples = 100000;
    for (int i = 0; i < n_samples; ++i)
    {
        const int n = 1 + i % 4;
        const CMat A = random_psd(rng, n, 1 + i % n);
        const double a = 4.0 * U(rng) - 2.0;
        const CVec wt = randn(rng, n);
        const double tt = a + 1e-3 + 3.0 * U(rng);
        const TaylorQol F = taylor_qol(A, a, wt, tt);

        // direct evaluation of w^H A w / (t - a)
        auto f = [&](const CVec &w, double t) { return (w.adjoint() * A * w)(0, 0).real() / (t - a); };
        const double ft = f(wt, tt);
        if (std::abs(F(wt, tt) - ft) > 1e-12 * std::max(1.0, std::abs(ft)))
            ++touch_misses;

        const CVec w = i % 5 == 0 ? CVec(wt + 1e-6 * randn(rng, n)) : randn(rng, n, 2.0);
        const double t = a + (i % 7 == 0 ? 1e-6 : 5.0 * U(rng) + 1e-9);
        const double fw = f(w, t);
        if (F(w, t) > fw + 1e-12 * std::max(1.0, std::abs(fw)))
            ++violations;
    }
    CHECK(violations == 0);
    CHECK(touch_misses == 0);
}

TEST_CASE("quad-over-lin and PSD helpers")
{
    std::mt19937_64 rng(3);
    const CMat A = random_psd(rng, 3, 2);
    const CVec w = randn(rng, 3);
    CHECK(quad_over_lin(A, 0.5, w, 2.5) == doctest::Approx((w.adjoint() * A * w)(0, 0).real() / 2.0));
    CHECK(is_psd(A));
    CHECK_FALSE(is_psd(A - 0.1 * CMat::Identity(3, 3)));
    const CMat M = psd_factor(A);
    CHECK((M.adjoint() * M - A).norm() <= 1e-12 * A.norm());
    CHECK_THROWS_AS(psd_factor(A - CMat::Identity(3, 3)), NumericError);
}

TEST_CASE("rate cone matches the product form")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(1e-9, 10.0);
    long violations = 0;
    for (double R : {0.0, 0.5, 1.0, 2.0, 3.3})
    {
        ConicProblem p = make_layout(SystemDims{}, SocpConfig{});
        build_rate_soc(p, R);
        const SocBlock &s = cone(p, "rate");
        const int i1 = p.block("r1").offset, i2 = p.block("r2").offset;
        const double target = std::exp2(R);
        for (int i = 0; i < 20000; ++i)
        {
            RVec x = RVec::Zero(p.n_vars);
            x(i1) = U(rng);
            x(i2) = i % 4 == 0 ? target / x(i1) : U(rng); // every fourth on the boundary
            const double m = margin(s, x);
            const double prod = x(i1) * x(i2) - target;
            const double scale = std::max(1.0, x(i1) + x(i2));
            if ((m >= 0.0 && prod < -1e-9 * scale) || (prod >= 0.0 && m < -1e-9 * scale))
                ++violations;
        }
    }
    CHECK(violations == 0);

    ConicProblem p = make_layout(SystemDims{}, SocpConfig{});
    build_rate_soc(p, 0.0);
    CHECK(margin(cone(p, "rate"), set_vars(p, {{"r1", 1.0}, {"r2", 1.0}})) == doctest::Approx(0.0));
    ConicProblem q = make_layout(SystemDims{}, SocpConfig{});
    build_rate_soc(q, 1.0);
    CHECK(margin(cone(q, "rate"), set_vars(q, {{"r1", 2.0}, {"r2", 1.0}})) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(build_rate_soc(q, -0.1), DomainError);
}

TEST_CASE("inverse split-ratio cone matches s * rho >= 1")
{
    const Fixture f(5);
    const ConicProblem p = f.assemble();
    const SocBlock &s = cone(p, "inv_rho_1");
    const int is = p.block("s_inv").offset + 1, ir = p.block("rho").offset + 1;
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> U(1e-9, 10.0);
    long violations = 0;
    for (int i = 0; i < 100000; ++i)
    {
        RVec x = RVec::Zero(p.n_vars);
        x(ir) = U(rng);
        x(is) = i % 4 == 0 ? 1.0 / x(ir) : U(rng);
        const double m = margin(s, x);
        const double prod = x(is) * x(ir) - 1.0;
        const double scale = std::max(1.0, x(is) + x(ir));
        if ((m >= 0.0 && prod < -1e-9 * scale) || (prod >= 0.0 && m < -1e-9 * scale))
            ++violations;
    }
    CHECK(violations == 0);

    // delta = 1e-3 W^1/2, rho = 0.5: delta^2 / rho = 2e-6, so s_inv = 2 sits on the boundary
    RVec x = RVec::Zero(p.n_vars);
    x(ir) = 0.5;
    x(is) = 2e-6 / 1e-6;
    CHECK(margin(s, x) == doctest::Approx(0.0).epsilon(1e-14));
    x(is) = 2.5;
    CHECK(margin(s, x) > 0.0);
}

TEST_CASE("variable census")
{
    const Fixture f(7);
    const ConicProblem p = f.assemble();
    int next = 0, primary = 0, aux = 0;
    for (const auto &b : p.var_index)
    {
        CHECK(b.offset == next);
        next += b.size;
        (b.name == "s_inv" ? aux : primary) += b.size;
    }
    CHECK(next == p.n_vars);
    CHECK(primary == 2 * (2 * 4 + 4 + 4) + 2 + 4);
    CHECK(primary == 38);
    CHECK(aux == 2);

    std::map<std::string, int> count;
    for (const auto &s : p.socs)
        ++count[s.label.substr(0, s.label.find('_') == std::string::npos ? s.label.size() : s.label.find('_'))];
    for (const auto &r : p.nonneg)
        ++count[r.label.substr(0, r.label.rfind('_'))];
    CHECK(count["rate"] == 1);
    CHECK(count["sinr"] == 2);
    CHECK(count["inv"] == 2);
    CHECK(count["leak"] == 4);
    CHECK(count["eh"] == 2);
    CHECK(count["eh_er"] == 2);
    CHECK(count["power"] == 2);
    CHECK(count["rho_min"] == 2);
    CHECK(count["rho_max"] == 2);
    CHECK(p.socs.size() == 1 + 2 + 2 + 4 + 2 + 2);
    CHECK(p.nonneg.size() == 2 + 4 + 2);
}

TEST_CASE("pinned variables are absent")
{
    const Fixture f(7);
    SocpConfig cfg;
    cfg.use_an = false;
    const ConicProblem a = f.assemble(cfg);
    CHECK(a.find("z") == nullptr);
    CHECK(a.find("q") != nullptr);
    cfg.use_an = true;
    cfg.use_cj = false;
    const ConicProblem b = f.assemble(cfg);
    CHECK(b.find("q") == nullptr);
    CHECK(b.n_vars == 38 + 2 - 8);
    CHECK(cone(b, "power_tx").A.cols() == b.n_vars);
}

TEST_CASE("objective weights")
{
    Fixture f(9);
    f.budget.tau = 1.0;
    const ConicProblem p = f.assemble();
    CHECK(p.objective(p.block("Ee").offset) == 0.0);
    CHECK(p.objective(p.block("Es").offset) > 0.0);
    f.budget.tau = 0.0;
    const ConicProblem q = f.assemble();
    CHECK(q.objective(q.block("Es").offset) == 0.0);
}

TEST_CASE("zero radii coincide with the non-robust construction")
{
    Fixture f(11, 0.0);
    const ConicProblem robust = f.assemble();
    GramSet plain = f.grams;
    plain.H_xs_minus = plain.H_xs_plus = plain.Hbar_k_gram;
    plain.G_xs_minus = plain.G_xs_plus = plain.Gbar_k_gram;
    plain.H_xe_minus = plain.H_xe_plus = plain.Hhat_l_gram;
    plain.G_xe_minus = plain.G_xe_plus = plain.Ghat_l_gram;
    const ConicProblem nominal = assemble_socp(f.sc.channels, f.rb, plain, f.sc.noise, f.budget, f.exp, {});
    REQUIRE(robust.socs.size() == nominal.socs.size());
    for (std::size_t i = 0; i < robust.socs.size(); ++i)
    {
        CHECK((robust.socs[i].A - nominal.socs[i].A).norm() == 0.0);
        CHECK(robust.socs[i].d == nominal.socs[i].d);
    }
}

TEST_CASE("power cones")
{
    ConicProblem p = make_layout(SystemDims{1, 1, 2, 2, 1}, SocpConfig{});
    PowerBudget b;
    b.P_T = 1.0;
    b.P_J = 2.0;
    build_power_constraints(p, b);
    const SocBlock &tx = cone(p, "power_tx");
    RVec x = RVec::Zero(p.n_vars);
    // zero vectors: ||x|| = 0 <= sqrt(P) with slack 1 in power
    CHECK(margin(tx, x) > 0.0);
    const int w = p.block("w0").offset;
    x(w) = 1.0;
    CHECK(std::abs(margin(tx, x)) <= 1e-15);
    x(w) = std::sqrt(1.01);
    CHECK(margin(tx, x) < 0.0);
    x(w) = 0.0;
    x(p.block("q").offset + 1) = std::sqrt(2.0);
    CHECK(std::abs(margin(cone(p, "power_jam"), x)) <= 1e-15);
}

TEST_CASE("surrogates touch the originals at the expansion point")
{
    Fixture f(13);
    const auto &g = f.grams;
    const auto &n = f.sc.noise;
    const auto &e = f.exp;
    auto quad = [](const CMat &A, const CVec &v) { return v.dot(A * v).real(); };
    const double rho = 0.4;

    // slacks that put every nonconvex constraint exactly on its boundary
    BeamformingSolution s = BeamformingSolution::zeros(f.sc.dims, rho);
    s.w = e.w_tilde;
    s.z = e.z_tilde;
    s.q = e.q_tilde;
    const double sig = n.sigma2_cr[0], del = n.delta2_cr[0];
    const double den = sig + quad(g.H_xs_plus[0], s.w[1]) + quad(g.H_xs_plus[0], s.z) +
                       quad(g.G_xs_plus[0], s.q) + del / rho;
    f.exp.r1_tilde = 1.0 + quad(g.H_xs_minus[0], s.w[0]) / den;
    const double s2 = n.sigma2_er[1];
    f.exp.r2_tilde = (s2 + quad(g.H_xe_minus[1], s.z) + quad(g.G_xe_minus[1], s.q)) /
                     (s2 + quad(g.H_xe_plus[1], s.w[0]) + quad(g.H_xe_plus[1], s.z) + quad(g.G_xe_plus[1], s.q));
    double a = sig + quad(g.H_xs_minus[1], s.z) + quad(g.G_xs_minus[1], s.q);
    for (const auto &w : s.w)
        a += quad(g.H_xs_minus[1], w);
    f.exp.Es_tilde = n.eta_cr[1] * a * (1.0 - rho);
    double ee = g.n_e[0] * n.sigma2_er[0] + quad(g.H_xe_minus[0], s.z) + quad(g.G_xe_minus[0], s.q);
    for (const auto &w : s.w)
        ee += quad(g.H_xe_minus[0], w);
    ee *= n.eta_er[0];
    REQUIRE(f.exp.r1_tilde > 1.0);
    REQUIRE(f.exp.Es_tilde > 0.0);

    s.r1 = f.exp.r1_tilde;
    s.r2 = f.exp.r2_tilde;
    s.Ebar_s = f.exp.Es_tilde;
    s.Ebar_e = ee;
    const ConicProblem p = f.assemble();
    const RVec x = lift_solution(p, s);
    CHECK(std::abs(margin(cone(p, "sinr_0"), x)) <= 1e-9);
    CHECK(std::abs(margin(cone(p, "inv_rho_0"), x)) <= 1e-12);
    CHECK(std::abs(margin(cone(p, "leak_1_0"), x)) <= 1e-9);
    CHECK(std::abs(margin(cone(p, "eh_cr_1"), x)) <= 1e-9);
    const LinearRow &r = row(p, "eh_er_0");
    CHECK(std::abs(r.a.dot(x) + r.b) <= 1e-9);
}

TEST_CASE("boundary cases of the harvest constraints")
{
    Fixture f(17);
    f.exp.w_tilde.assign(2, CVec::Zero(4));
    f.exp.z_tilde.setZero();
    f.exp.q_tilde.setZero();
    f.exp.r2_tilde = 1.0;
    const ConicProblem p = f.assemble();
    const auto &n = f.sc.noise;

    // zero point and zero vectors: Ee <= eta N_E sigma^2
    const LinearRow &r = row(p, "eh_er_1");
    const double cap = n.eta_er[1] * 2 * n.sigma2_er[1];
    RVec x = set_vars(p, {{"Ee", cap}});
    CHECK(std::abs(r.a.dot(x) + r.b) <= 1e-12);
    x = set_vars(p, {{"Ee", 1.001 * cap}});
    CHECK(r.a.dot(x) + r.b < 0.0);

    // z~ = q~ = 0, r2~ = 1: with all vectors zero the leakage cone holds iff r2 <= 1
    const SocBlock &leak = cone(p, "leak_0_1");
    CHECK(margin(leak, set_vars(p, {{"r2", 0.7}})) > 0.0);
    CHECK(std::abs(margin(leak, set_vars(p, {{"r2", 1.0}}))) <= 1e-12);
    CHECK(margin(leak, set_vars(p, {{"r2", 1.2}})) < 0.0);

    // rho = 1 leaves no harvest: e_s must vanish, so Es <= -Es~
    const SocBlock &eh = cone(p, "eh_cr_0");
    const double Et = f.exp.Es_tilde;
    CHECK(margin(eh, set_vars(p, {{"rho", 1.0}, {"Es", -Et}})) >= -1e-12);
    CHECK(margin(eh, set_vars(p, {{"rho", 1.0}, {"Es", 0.0}})) < 0.0);
}

TEST_CASE("lift and extract round trip")
{
    const Fixture f(19);
    const ConicProblem p = f.assemble();
    BeamformingSolution s = BeamformingSolution::zeros(f.sc.dims, 0.3);
    s.w = f.exp.w_tilde;
    s.z = f.exp.z_tilde;
    s.q = f.exp.q_tilde;
    s.r1 = 1.7;
    s.r2 = 0.6;
    s.Ebar_s = 3e-9;
    s.Ebar_e = 2e-5;
    const RVec x = lift_solution(p, s);
    CHECK(x(p.block("s_inv").offset) == doctest::Approx(1.0 / 0.3));
    const BeamformingSolution t = extract_solution(p, x, f.sc.dims);
    CHECK((t.w[1] - s.w[1]).norm() <= 1e-15);
    CHECK((t.q - s.q).norm() <= 1e-15);
    CHECK(t.Ebar_s == doctest::Approx(3e-9));
    CHECK(t.rho[0] == doctest::Approx(0.3));
}
