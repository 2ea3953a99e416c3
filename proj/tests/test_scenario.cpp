#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "swipt/scenario.hpp"

using namespace swipt;

TEST_CASE("path loss against high-precision values")
{
    // 40-digit evaluations of c / (4 pi f_c) * d^(-kappa/2)
    CHECK(path_loss_amplitude(9.0, 9e8, 2.7) ==
          doctest::Approx(0.001365971044921087177).epsilon(1e-13));
    CHECK(path_loss_amplitude(1.0, 9e8, 2.7) ==
          doctest::Approx(0.02652582384864922263).epsilon(1e-13));
    CHECK(path_loss_amplitude(100.0, 9e8, 2.7) ==
          doctest::Approx(5.292597669871256335e-5).epsilon(1e-13));
}

TEST_CASE("path loss shape")
{
    const double pre = 3e8 / (4.0 * M_PI * 9e8);
    for (double d : {0.5, 3.0, 1e4})
        CHECK(path_loss_amplitude(d, 9e8, 0.0) == doctest::Approx(pre).epsilon(1e-15));
    double prev = INFINITY;
    for (double d = 1.0; d < 1e3; d *= 1.7)
    {
        const double h = path_loss_amplitude(d, 9e8, 2.7);
        CHECK(h > 0.0);
        CHECK(h < prev);
        prev = h;
    }
    CHECK_THROWS_AS(path_loss_amplitude(0.0, 9e8, 2.7), DomainError);
    CHECK_THROWS_AS(path_loss_amplitude(-1.0, 9e8, 2.7), DomainError);
    CHECK_THROWS_AS(path_loss_amplitude(1.0, 0.0, 2.7), DomainError);
}

TEST_CASE("dBm conversions")
{
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(dbm_to_watts(40.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12).epsilon(1e-14));
    for (double p = -120.0; p <= 60.0; p += 7.3)
        CHECK(std::abs(watts_to_dbm(dbm_to_watts(p)) - p) <= 1e-12 * std::max(1.0, std::abs(p)));
    CHECK_THROWS_AS(watts_to_dbm(0.0), DomainError);
    CHECK_THROWS_AS(watts_to_dbm(-1.0), DomainError);
}

TEST_CASE("scenario generation is deterministic per seed")
{
    ScenarioParams p;
    const Scenario a = make_scenario(p, 11), b = make_scenario(p, 11), c = make_scenario(p, 12);
    for (int k = 0; k < p.dims.K; ++k)
    {
        CHECK(a.channels.hbar[k] == b.channels.hbar[k]);
        CHECK(a.channels.gbar[k] == b.channels.gbar[k]);
        CHECK(a.channels.hbar[k] != c.channels.hbar[k]);
    }
    for (int l = 0; l < p.dims.L; ++l)
    {
        CHECK(a.channels.Hbar[l] == b.channels.Hbar[l]);
        CHECK(a.channels.Gbar[l] == b.channels.Gbar[l]);
    }
}

TEST_CASE("channel power follows the path loss")
{
    SystemDims dims;
    const Geometry g = Geometry::uniform(dims, 100.0, 100.0, 9.0, 9.0);
    const double h2 = std::pow(path_loss_amplitude(100.0, g.f_c, g.kappa), 2);
    const double H2 = std::pow(path_loss_amplitude(9.0, g.f_c, g.kappa), 2);
    const int n = 100000;
    double sh = 0.0, sH = 0.0;
    for (int s = 0; s < n; ++s)
    {
        const ChannelSet ch = generate_scenario(s, dims, g, ErrorRadii{});
        sh += ch.hbar[0].squaredNorm();
        sH += ch.Hbar[1].squaredNorm();
    }
    CHECK(sh / n == doctest::Approx(dims.n_t * h2).epsilon(0.02));
    CHECK(sH / n == doctest::Approx(dims.n_t * dims.n_e * H2).epsilon(0.02));
}

TEST_CASE("radii expansion")
{
    ScenarioParams p;
    p.radii = ErrorRadii::uniform(0.0, 0.0);
    const Scenario z = make_scenario(p, 3);
    for (double r : z.channels.eps_cr)
        CHECK(r == 0.0);
    for (double r : z.channels.theta_er_j)
        CHECK(r == 0.0);

    p.radii = ErrorRadii::uniform(0.02, 0.05, RadiusScaling::absolute);
    const Scenario a = make_scenario(p, 3);
    CHECK(a.channels.eps_cr[1] == 0.02);
    CHECK(a.channels.theta_er[0] == 0.05);

    p.radii.scaling = RadiusScaling::path_loss;
    const Scenario s = make_scenario(p, 3);
    CHECK(s.channels.eps_cr[0] == doctest::Approx(0.02 * path_loss_amplitude(100.0, 9e8, 2.7)));
    CHECK(s.channels.theta_er[0] == doctest::Approx(0.05 * path_loss_amplitude(9.0, 9e8, 2.7)));

    const ChannelSet zr = s.channels.with_zero_radii();
    CHECK(zr.eps_cr_j[0] == 0.0);
    CHECK(zr.hbar[0] == s.channels.hbar[0]);
}

TEST_CASE("bounded error sampler")
{
    CHECK(sample_bounded_error(0.0, 4, 1, 5).norm() == 0.0);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10000; ++i)
        CHECK(sample_bounded_error(0.05, 4, 1, rng).norm() <= 0.05 + 1e-12);
    for (int i = 0; i < 1000; ++i)
    {
        CHECK(sample_bounded_error(0.05, 4, 2, rng, 1.0).norm() == doctest::Approx(0.05).epsilon(1e-9));
        CHECK(sample_bounded_error(0.3, 3, 1, rng, 1.0).norm() == doctest::Approx(0.3).epsilon(1e-9));
    }
    CHECK_THROWS_AS(sample_bounded_error(-0.1, 4, 1, rng), DomainError);
}

TEST_CASE("validation rejects bad inputs")
{
    SystemDims d;
    d.n_t = 0;
    CHECK_THROWS_AS(d.validate(), DomainError);
    PowerBudget b;
    b.tau = 1.5;
    CHECK_THROWS_AS(b.validate(), DomainError);
    b = PowerBudget{};
    b.P_J = 0.0;
    CHECK_THROWS_AS(b.validate(), DomainError);
    ScenarioParams p;
    p.eta = 0.0;
    CHECK_THROWS_AS(make_scenario(p, 1), DomainError);
    p = ScenarioParams{};
    p.d_er = -2.0;
    CHECK_THROWS(make_scenario(p, 1));
}

TEST_CASE("scenario text round trip")
{
    ScenarioParams p;
    p.dims.K = 3;
    const Scenario a = make_scenario(p, 21);
    std::stringstream ss;
    write_scenario(ss, a);
    const Scenario b = read_scenario(ss);
    CHECK(b.dims == a.dims);
    for (int k = 0; k < 3; ++k)
        CHECK(b.channels.hbar[k] == a.channels.hbar[k]);
    CHECK(b.channels.Gbar[1] == a.channels.Gbar[1]);
    CHECK(b.noise.delta2_cr == a.noise.delta2_cr);
    CHECK(b.channels.theta_er == a.channels.theta_er);

    std::istringstream bad("swipt-scenario 2\n");
    CHECK_THROWS_AS(read_scenario(bad), FormatError);
}
