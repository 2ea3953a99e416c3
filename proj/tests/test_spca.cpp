#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swipt/spca.hpp"

using namespace swipt;

namespace
{

Scenario scenario(std::uint64_t seed, double eps = 0.01)
{
    ScenarioParams p;
    p.radii = ErrorRadii::uniform(eps, eps);
    return make_scenario(p, seed);
}

SpcaResult solve(const Scenario &sc, const PowerBudget &b, std::uint64_t seed, SpcaConfig cfg = {})
{
    return run_spca(sc.channels, sc.noise, b, cfg, seed);
}

} // namespace

TEST_CASE("zero secrecy target")
{
    const Scenario sc = scenario(2);
    PowerBudget b;
    b.Rbar_s = 0.0;
    const SpcaResult r = solve(sc, b, 2);
    REQUIRE(r.ok());
    CHECK(r.objective > 0.0);
    CHECK(r.solution.r1 * r.solution.r2 >= 1.0 - 1e-6);
}

TEST_CASE("runs are deterministic")
{
    const Scenario sc = scenario(4);
    const SpcaResult a = solve(sc, PowerBudget{}, 4), b = solve(sc, PowerBudget{}, 4);
    REQUIRE(a.ok());
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i)
        CHECK(a.trace.records[i].objective == b.trace.records[i].objective);
    CHECK((a.solution.w[0] - b.solution.w[0]).norm() == 0.0);
}

TEST_CASE("pure CR weight")
{
    const Scenario sc = scenario(6);
    PowerBudget b;
    b.tau = 1.0;
    const SpcaResult r = solve(sc, b, 6);
    REQUIRE(r.ok());
    CHECK(r.objective == doctest::Approx(r.solution.Ebar_s).epsilon(1e-12));
}

TEST_CASE("trace, feasibility and fixed point")
{
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
    {
        const Scenario sc = scenario(seed);
        const PowerBudget b;
        SpcaConfig cfg;
        const SpcaResult r = solve(sc, b, seed, cfg);
        if (!r.ok())
            continue;
        ++solved;
        CAPTURE(seed);
        const auto &rec = r.trace.records;
        REQUIRE(!rec.empty());
        for (std::size_t i = 1; i < rec.size(); ++i)
            CHECK(rec[i].objective >= rec[i - 1].objective - 1e-6 * std::abs(rec[i - 1].objective) - 1e-15);
        CHECK(r.trace.monotone(1e-6 * std::abs(rec.back().objective) + 1e-15));
        CHECK(r.objective == rec.back().objective);

        const ValidationReport v = validate_solution(r, sc.channels, sc.noise, b, 50, seed);
        CHECK(v.power_residual_tx <= 1e-8 * b.P_T);
        CHECK(v.power_residual_jam <= 1e-8 * b.P_J);
        CHECK(v.rate_slack >= -1e-6);
        CHECK(v.surrogate_residual <= 1e-6);

        if (r.status == RunStatus::converged && rec.size() >= 2)
        {
            const double last = rec.back().objective, prev = rec[rec.size() - 2].objective;
            CHECK(std::abs(last - prev) <= cfg.rel_obj_tol * std::abs(last) + 1e-15);
        }
    }
    CHECK(solved >= 5);
}

TEST_CASE("zero radii initialize reliably")
{
    int ok = 0;
    const int n = 100;
    for (std::uint64_t seed = 100; seed < 100 + n; ++seed)
    {
        const Scenario sc = scenario(seed, 0.0);
        const RobustBounds rb = compute_robust_bounds(sc.channels);
        const GramSet g = build_gram_set(sc.channels, rb);
        const InitResult init = find_initial_point(sc.channels, rb, g, sc.noise, PowerBudget{}, SpcaConfig{}, seed);
        ok += init.ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("configuration validation")
{
    SpcaConfig c;
    c.max_outer_iters = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = SpcaConfig{};
    c.damping = 1.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK(init_strategy_from_string("null_steering") == InitStrategy::null_steering);
    CHECK_THROWS(init_strategy_from_string("nope"));
}

TEST_CASE("trace CSV")
{
    IterationTrace t;
    t.records.push_back({1, 2.0, 1.0, 3.0, -1e-9, SolveStatus::optimal, 0.01, 12});
    t.records.push_back({2, 2.5, 1.5, 3.5, -1e-9, SolveStatus::optimal, 0.02, 10});
    t.records.push_back({3, 2.5001, 1.5, 3.5, -1e-9, SolveStatus::optimal, 0.02, 10});
    std::ostringstream os;
    t.write_csv(os);
    const std::string s = os.str();
    CHECK(s.substr(0, s.find('\n')) == "iteration,objective,Es,Ee,residual,status,time");
    CHECK(std::count(s.begin(), s.end(), '\n') == 4);
    CHECK(t.iterations_to_tolerance(1e-3) == 3);
    CHECK(t.max_drop() == 0.0);
    t.records[2].objective = 2.4;
    CHECK(t.max_drop() == doctest::Approx(0.1));
    CHECK_FALSE(t.monotone(0.05));
}
