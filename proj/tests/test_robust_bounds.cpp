#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "swipt/robust_bounds.hpp"

using namespace swipt;

namespace
{

ChannelSet unit_channels(const SystemDims &d, double eps, double theta, std::uint64_t seed)
{
    Geometry g = Geometry::uniform(d, 1.0, 1.0, 1.0, 1.0);
    g.f_c = g.c / (4.0 * M_PI); // unit path loss at d = 1
    return generate_scenario(seed, d, g, ErrorRadii::uniform(eps, theta, RadiusScaling::absolute));
}

} // namespace

TEST_CASE("closed forms")
{
    SystemDims d{1, 1, 3, 2, 2};
    ChannelSet ch = unit_channels(d, 0.01, 0.02, 4);
    ch.hbar[0] = CVec::Zero(3);
    ch.hbar[0][1] = 1.0;
    const RobustBounds rb = compute_robust_bounds(ch);
    CHECK(rb.xi[0] == doctest::Approx(0.0201).epsilon(1e-14));
    CHECK(rb.xi_j[0] == doctest::Approx(1e-4 + 0.02 * ch.gbar[0].norm()).epsilon(1e-14));
    CHECK(rb.alpha[0] == doctest::Approx(4e-4 + 0.04 * ch.Hbar[0].norm()).epsilon(1e-14));
    CHECK(rb.alpha_j[0] == doctest::Approx(4e-4 + 0.04 * ch.Gbar[0].norm()).epsilon(1e-14));

    const RobustBounds z = compute_robust_bounds(ch.with_zero_radii());
    CHECK(z.xi[0] == 0.0);
    CHECK(z.xi_j[0] == 0.0);
    CHECK(z.alpha[0] == 0.0);
    CHECK(z.alpha_j[0] == 0.0);
}

TEST_CASE("bounds grow with the radius")
{
    SystemDims d;
    double prev = -1.0;
    for (double eps = 0.0; eps < 1.0; eps += 0.05)
    {
        const RobustBounds rb = compute_robust_bounds(unit_channels(d, eps, eps, 6));
        CHECK(rb.xi[1] >= prev);
        CHECK(rb.alpha[1] >= 0.0);
        prev = rb.xi[1];
    }
}

TEST_CASE("gram set structure")
{
    SystemDims d{2, 2, 4, 3, 2};
    ChannelSet ch = unit_channels(d, 0.1, 0.1, 8);
    ch.hbar[0] = CVec::Zero(4);
    ch.hbar[0][0] = 1.0;
    const RobustBounds rb = compute_robust_bounds(ch);
    const GramSet gs = build_gram_set(ch, rb);

    CMat e1 = CMat::Zero(4, 4);
    e1(0, 0) = 1.0;
    CHECK((gs.Hbar_k_gram[0] - e1).norm() == 0.0);
    for (int l = 0; l < 2; ++l)
    {
        CHECK(gs.Hhat_l_gram[l].trace().real() == doctest::Approx(ch.Hbar[l].squaredNorm()).epsilon(1e-13));
        CHECK(min_eigenvalue(gs.Hhat_l_gram[l]) >= -1e-12);
        CHECK(min_eigenvalue(gs.Ghat_l_gram[l]) >= -1e-12);
        // rank <= N_E: the two smallest of four eigenvalues vanish
        Eigen::SelfAdjointEigenSolver<CMat> es(gs.Hhat_l_gram[l]);
        CHECK(std::abs(es.eigenvalues()(1)) <= 1e-12 * es.eigenvalues()(3));
        CHECK((gs.H_xe_minus[l] - (gs.Hhat_l_gram[l] - rb.alpha[l] * CMat::Identity(4, 4))).norm() <= 1e-15);
        CHECK((gs.G_xe_plus[l] - (gs.Ghat_l_gram[l] + rb.alpha_j[l] * CMat::Identity(3, 3))).norm() <= 1e-15);
        CHECK((gs.H_xe_minus[l] - gs.H_xe_minus[l].adjoint()).norm() <= 1e-12);
    }
    for (int k = 0; k < 2; ++k)
    {
        CHECK((gs.H_xs_minus[k] - gs.H_xs_minus[k].adjoint()).norm() <= 1e-12);
        CHECK(gs.G_xs_plus[k].trace().real() ==
              doctest::Approx(ch.gbar[k].squaredNorm() + 3 * rb.xi_j[k]).epsilon(1e-13));
        // rank one, so the minus shift is indefinite for any positive radius
        CHECK(min_eigenvalue(gs.H_xs_minus[k]) == doctest::Approx(-rb.xi[k]).epsilon(1e-10));
    }
    CHECK(gs.n_e[1] == 2);

    const ChannelSet z = ch.with_zero_radii();
    const GramSet g0 = build_gram_set(z, compute_robust_bounds(z));
    CHECK((g0.H_xs_minus[1] - g0.Hbar_k_gram[1]).norm() == 0.0);
    CHECK((g0.G_xe_plus[0] - g0.Ghat_l_gram[0]).norm() == 0.0);
}

TEST_CASE("hermitian helpers")
{
    CMat A(2, 2);
    A << cplx(1, 0), cplx(2, 1), cplx(0, -3), cplx(4, 0);
    const CMat S = hermitian_part(A);
    CHECK((S - S.adjoint()).norm() == 0.0);
    CHECK(S(0, 1) == cplx(1.0, 2.0));
    CMat D = CMat::Zero(3, 3);
    D.diagonal() << 2.0, -1.5, 7.0;
    CHECK(min_eigenvalue(D) == doctest::Approx(-1.5));
}

TEST_CASE("sampled perturbations respect the bounds")
{
    std::mt19937_64 rng(2024);
    long draws = 0, violations = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 10; ++inst)
    {
        const ChannelSet ch = unit_channels(SystemDims{}, 0.05 + 0.1 * inst, 0.3, 100 + inst);
        const RobustBounds rb = compute_robust_bounds(ch);
        const auto c = oracle::robust_soundness(rng, ch, rb.xi, rb.xi_j, rb.alpha, rb.alpha_j, 10000);
        draws += c.draws;
        violations += c.violations;
        worst = std::max(worst, c.worst_ratio);
    }
    CHECK(draws == 10 * 10000 * 8);
    CHECK(violations == 0);
    // the aligned draws attain the bound
    CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
}
