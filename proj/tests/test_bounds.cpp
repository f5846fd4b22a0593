#include <gumdp/bounds.hpp>
#include <gumdp/builtins.hpp>
#include <gumdp/exact.hpp>
#include <gumdp/sampler.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace gumdp;

TEST(ReturnVariance, Mf3TwoAtomLaw) {
    const Gumdp g = builtin_gumdp("mf3", true);
    const auto pi = StationaryPolicy::uniform(3, 2);
    const double gamma = 0.9;
    const double var = discounted_return_variance(g, pi, gamma, StateTarget{1});
    // (1 - gamma) J(s1) = gamma * Bernoulli(1/2).
    EXPECT_NEAR((1 - gamma) * (1 - gamma) * var, gamma * gamma * 0.25, 1e-12);
    EXPECT_NEAR(discounted_return_variance(g, pi, gamma, StateTarget{0}), 0.0, 1e-12);
}

TEST(ReturnVariance, UnreachableTargetIsZero) {
    const Gumdp g = builtin_gumdp("mf3", false);
    const int acts[] = {0, 0, 0};
    const auto pi = StationaryPolicy::deterministic(acts, 2);
    EXPECT_EQ(discounted_return_variance(g, pi, 0.9, StateActionTarget{2, 1}), 0.0);
    EXPECT_THROW(discounted_return_variance(g, pi, 0.9, StateActionTarget{3, 0}), ValidationError);
    EXPECT_THROW(discounted_return_variance(g, pi, 1.0, StateTarget{0}), ValidationError);
}

// Monte Carlo oracle, run before trusting the solver.
TEST(ReturnVariance, MatchesMonteCarlo) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        const int ns = 2 + trial % 3, na = 1 + trial % 2;
        const Gumdp g = oracle::random_gumdp(rng, ns, na, Objective::entropy(), false);
        const Matrix pim = oracle::random_policy(rng, ns, na);
        const StationaryPolicy pi(pim);
        const double gamma = trial % 2 ? 0.5 : 0.8;
        const int s = trial % ns, a = trial % na;
        DiscountedReturnSolver solver(extended_chain(g, pi), gamma);
        const auto exact = solver.moments(indicator_reward(g, StateActionTarget{s, a}));
        const auto mc = oracle::monte_carlo_return(g, pim, gamma, s, a, 40000, 1000 + trial);
        EXPECT_LE(std::abs(mc.variance - exact.variance), 4.0 * mc.variance_se + 1e-9) << "trial " << trial;
        // The oracle stops once gamma^t < 1e-8, dropping at most that tail.
        EXPECT_NEAR(mc.mean, exact.mean, 4.0 * std::sqrt(exact.variance / 40000) + 1e-8 / (1 - gamma));
        // The state target is the sum over actions.
        const auto state = solver.moments(indicator_reward(g, StateTarget{s}));
        const auto mcs = oracle::monte_carlo_return(g, pim, gamma, s, -1, 40000, 2000 + trial);
        EXPECT_LE(std::abs(mcs.variance - state.variance), 4.0 * mcs.variance_se + 1e-9) << "trial " << trial;
    }
}

TEST(VarianceLowerBound, Mf3Value) {
    const Gumdp g = builtin_gumdp("mf3", true);
    const auto pi = StationaryPolicy::uniform(3, 2);
    for (int K : {1, 2, 7, 100}) {
        const auto r = theorem2_lower_bound(g, pi, 0.9, K, 2.0);
        EXPECT_NEAR(r.value, 0.405 / K, 1e-12);
        EXPECT_EQ(r.per_term.size(), 3u);
        EXPECT_EQ(r.kind, BoundKind::theorem2);
    }
    EXPECT_NEAR(theorem2_lower_bound(g, pi, 0.9, 4, 2.0).value * 2, theorem2_lower_bound(g, pi, 0.9, 2, 2.0).value, 1e-15);
    EXPECT_THROW(theorem2_lower_bound(g, pi, 0.9, 1, 0.0), ValidationError);
    EXPECT_THROW(theorem2_lower_bound(g, pi, 0.9, 1, -1.0), ValidationError);
}

TEST(VarianceLowerBound, NonNegativeAndBelowMonteCarloGap) {
    for (const char* name : {"mf1", "mf2", "mf3"}) {
        for (bool so : {true, false}) {
            const Gumdp g = builtin_gumdp(name, so);
            const auto pi = *named_policy(g, "figure");
            const double c = *strong_convexity_constant(g.objective());
            const double gamma = 0.9;
            const int K = 2;
            const auto r = theorem2_lower_bound(g, pi, gamma, K, c);
            EXPECT_GE(r.value, 0.0);
            const auto s = EvalSettings::discounted(gamma, K, effective_horizon(gamma), 20000, 3);
            const auto est = estimate_finite_trials(g, pi, s);
            const double gap = est.value - infinite_trials_value(g, pi, s);
            EXPECT_LE(r.value, gap + 3.0 * est.std_error + 1e-7) << name << " state_only=" << so;
        }
    }
}

TEST(ConcentrationBound, Formula) {
    const auto r = theorem3_upper_bound(1.0, 3, 2, 100, 50, 0.9, 0.05);
    EXPECT_NEAR(r.value, std::sqrt(12.0 * std::log(2000.0) / 100.0) + 2.0 * std::pow(0.9, 50), 1e-12);
    EXPECT_NEAR(r.value, 0.96535115944, 1e-10);  // evaluated independently
    EXPECT_GT(r.value, 0.0);
    // K -> infinity leaves the truncation term.
    EXPECT_NEAR(theorem3_upper_bound(2.0, 3, 2, 1 << 30, 50, 0.9, 0.05).value, 4.0 * std::pow(0.9, 50), 1e-3);
    // H -> infinity diverges.
    EXPECT_GT(theorem3_upper_bound(1.0, 3, 2, 100, 1 << 30, 0.9, 0.05).value,
              theorem3_upper_bound(1.0, 3, 2, 100, 1000, 0.9, 0.05).value);
    EXPECT_THROW(theorem3_upper_bound(1.0, 3, 2, 100, 50, 0.9, 0.0), ValidationError);
    EXPECT_THROW(theorem3_upper_bound(1.0, 3, 2, 100, 50, 0.9, 1.5), ValidationError);
    EXPECT_THROW(theorem3_upper_bound(0.0, 3, 2, 100, 50, 0.9, 0.5), ValidationError);
    EXPECT_NO_THROW(theorem3_upper_bound(1.0, 3, 2, 100, 50, 0.9, 1.0));
}

TEST(MultichainLowerBound, Mf3IsTight) {
    const Gumdp g = builtin_gumdp("mf3", true);
    const auto pi = StationaryPolicy::uniform(3, 2);
    const double finf = infinite_trials_value(g, pi, EvalSettings::average(1, 1, 0));
    for (int K = 1; K <= 100; ++K) {
        const double gap = finite_trials_value_exact_average(g, pi, K) - finf;
        EXPECT_NEAR(theorem6_lower_bound(g, pi, K, 2.0).value, gap, 1e-12);
    }
}

TEST(MultichainLowerBound, VanishesWithoutBranching) {
    const Gumdp g = perturb_kernel(builtin_gumdp("mf1", false), 0.05);
    EXPECT_EQ(theorem6_lower_bound(g, StationaryPolicy::uniform(3, 2), 3, 1.0).value, 0.0);
    const Gumdp m = builtin_gumdp("mf3", true);
    const int left[] = {0, 0, 0};
    EXPECT_EQ(theorem6_lower_bound(m, StationaryPolicy::deterministic(left, 2), 3, 2.0).value, 0.0);
    EXPECT_THROW(theorem6_lower_bound(m, StationaryPolicy::uniform(3, 2), 3, 0.0), ValidationError);
}

// Property: the bound never exceeds the exact gap.
TEST(MultichainLowerBound, ValidOnBuiltinsAndRandomInstances) {
    for (const char* name : {"mf1", "mf2", "mf3"}) {
        for (bool so : {true, false}) {
            const Gumdp g = builtin_gumdp(name, so);
            const double c = *strong_convexity_constant(g.objective());
            for (const auto& pi : {StationaryPolicy::uniform(g.n_states(), g.n_actions()), *named_policy(g, "figure")}) {
                const double finf = infinite_trials_value(g, pi, EvalSettings::average(1, 1, 0));
                for (int K : {1, 2, 5, 20})
                    EXPECT_LE(theorem6_lower_bound(g, pi, K, c).value,
                              finite_trials_value_exact_average(g, pi, K) - finf + 1e-12)
                        << name;
            }
        }
    }
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const int ns = 2 + trial % 4, na = 1 + trial % 3;
        const bool so = trial % 2 == 0;
        const Eigen::Index dim = so ? ns : ns * na;
        const Gumdp g = oracle::random_gumdp(rng, ns, na, Objective::quadratic(Matrix::Identity(dim, dim)), so);
        const StationaryPolicy pi(oracle::random_policy(rng, ns, na));
        const double finf = infinite_trials_value(g, pi, EvalSettings::average(1, 1, 0));
        for (int K : {1, 3})
            EXPECT_LE(theorem6_lower_bound(g, pi, K, 2.0).value, finite_trials_value_exact_average(g, pi, K) - finf + 1e-12);
    }
}

TEST(Report, TextAndCsv) {
    const auto r = theorem3_upper_bound(1.0, 3, 2, 100, 50, 0.9, 0.05);
    const auto text = format_bound_report(r);
    EXPECT_NE(text.find("bound: theo3"), std::string::npos);
    EXPECT_NE(text.find("sampling"), std::string::npos);
    EXPECT_EQ(bound_report_csv_row(r).rfind("theo3,", 0), 0u);
    EXPECT_EQ(bound_report_csv_row(r).find(",100,50,0.9"), bound_report_csv_row(r).find(',', 6));
}
