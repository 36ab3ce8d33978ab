#include "mtinv/errors.hpp"
#include "mtinv/lp.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mtinv;
using mtinv::testing::Expect;

TEST_CASE("hand-built suite")
{
    for (const auto& tc : mtinv::testing::lp_cases()) {
        CAPTURE(tc.name);
        const LPSolution sol = solve_lp(tc.problem);
        switch (tc.expect) {
        case Expect::Optimal:
            REQUIRE(sol.status == LPStatus::Optimal);
            CHECK(sol.primal_residual <= 1e-8);
            CHECK(sol.dual_residual <= 1e-8);
            if (tc.objective) {
                CHECK(sol.objective == doctest::Approx(*tc.objective).epsilon(1e-8).scale(1.0));
            }
            break;
        case Expect::Infeasible:
            CHECK(sol.status == LPStatus::Infeasible);
            break;
        case Expect::Unbounded:
            CHECK(sol.status == LPStatus::Unbounded);
            break;
        }
    }
}

TEST_CASE("agreement with vertex enumeration on random bounded problems")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::uniform_int_distribution<int> nd(2, 6);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = nd(gen);
        const int m = nd(gen);
        LPProblem lp;
        lp.c = Eigen::VectorXd(n);
        lp.a_ub = Eigen::MatrixXd(m, n);
        lp.b_ub = Eigen::VectorXd(m);
        for (int j = 0; j < n; ++j) {
            lp.c[j] = d(gen);
        }
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                lp.a_ub(i, j) = d(gen);
            }
            lp.b_ub[i] = d(gen) + 0.5;
        }
        lp.upper = Eigen::VectorXd::Constant(n, 2.0);
        if (trial % 3 == 0) {
            lp.a_eq = Eigen::MatrixXd::Ones(1, n);
            lp.b_eq = Eigen::VectorXd::Constant(1, 1.0);
        }
        const auto oracle = mtinv::testing::vertex_enumeration(lp);
        const LPSolution sol = solve_lp(lp);
        CAPTURE(trial);
        if (!oracle) {
            CHECK(sol.status == LPStatus::Infeasible);
            continue;
        }
        REQUIRE(sol.status == LPStatus::Optimal);
        CHECK(std::abs(sol.objective - oracle->objective) <= 1e-7 * (1.0 + std::abs(oracle->objective)));
        CHECK(sol.primal_residual <= 1e-8);
    }
}

TEST_CASE("deterministic output")
{
    const auto cases = mtinv::testing::lp_cases();
    const LPSolution a = solve_lp(cases[2].problem);
    const LPSolution b = solve_lp(cases[2].problem);
    CHECK(a.x == b.x);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("input validation")
{
    LPProblem lp;
    CHECK_THROWS_AS(solve_lp(lp), ValidationError);
    lp.c = Eigen::VectorXd::Ones(2);
    lp.a_ub = Eigen::MatrixXd::Ones(1, 3);
    lp.b_ub = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_AS(solve_lp(lp), ValidationError);
    lp.a_ub = Eigen::MatrixXd::Ones(1, 2);
    lp.lower = Eigen::VectorXd::Constant(2, kInf);
    CHECK_THROWS_AS(solve_lp(lp), ValidationError);
    lp.lower = Eigen::VectorXd::Zero(2);
    lp.c[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_lp(lp), ValidationError);
}
