#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "halab/bohr.hpp"
#include "halab/rng.hpp"
#include "oracles.hpp"

using namespace halab;

namespace {

std::vector<std::int64_t> bohr_oracle(std::int64_t n, const std::vector<std::int64_t>& gammas, const Rational& delta) {
    std::vector<std::int64_t> out;
    for (std::int64_t x = 0; x < n; ++x) {
        bool in = true;
        for (auto g : gammas) in = in && !(delta < oracle::circle_distance(Rational((g * x) % n, n)));
        if (in) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST(Bohr, SmallExample) {
    const std::vector<std::int64_t> g{1};
    const auto b = bohr_elements(8, g, Rational(1, 4));
    EXPECT_EQ(b.elements, (std::vector<std::int64_t>{0, 1, 2, 6, 7}));
    EXPECT_EQ(b.measure(), Rational(5, 8));
    EXPECT_TRUE(b.contains(-1));
    EXPECT_FALSE(b.contains(3));
}

TEST(Bohr, FullGroupCases) {
    const std::vector<std::int64_t> g{1}, z{0};
    EXPECT_EQ(bohr_elements(8, g, Rational(1, 2)).size(), 8);
    EXPECT_EQ(bohr_elements(8, z, Rational(1, 100)).size(), 8);
}

TEST(Bohr, MatchesDirectMembership) {
    CounterRng rng(3);
    const std::vector<Rational> radii{Rational(1, 2), Rational(1, 3), Rational(1, 10), Rational(1, 32)};
    for (std::int64_t n : {8, 101, 1009, 4096}) {
        for (int t = 0; t < 5; ++t) {
            std::vector<std::int64_t> g;
            for (int d = 0; d < 1 + static_cast<int>(rng.uniform(3)); ++d) g.push_back(static_cast<std::int64_t>(rng.uniform(static_cast<std::uint64_t>(n))));
            std::sort(g.begin(), g.end());
            g.erase(std::unique(g.begin(), g.end()), g.end());
            for (const auto& r : radii) {
                const auto b = bohr_elements(n, g, r);
                EXPECT_EQ(b.elements, bohr_oracle(n, g, r));
                EXPECT_TRUE(b.contains(0));
                for (auto x : b.elements) EXPECT_TRUE(b.contains(n - x));  // symmetric
            }
        }
    }
}

TEST(Bohr, NestedInRadius) {
    const std::vector<std::int64_t> g{1, 10};
    const auto outer = bohr_elements(101, g, Rational(1, 4));
    const auto inner = bohr_elements(101, g, Rational(1, 10));
    for (auto x : inner.elements) EXPECT_TRUE(outer.contains(x));
}

TEST(Bohr, BetaIsProbabilityNormalised) {
    const std::vector<std::int64_t> g{1};
    const auto b = bohr_elements(8, g, Rational(1, 4));
    const auto f = beta(b);
    EXPECT_NEAR(f[0].real(), 8.0 / 5.0, 1e-15);
    double total = 0;
    for (auto v : f.values()) total += v.real();
    EXPECT_NEAR(total / 8.0, 1.0, 1e-12);
}

TEST(Bohr, MeasureBoundHolds) {
    CounterRng rng(5);
    for (std::int64_t n : {101, 1009, 4096}) {
        for (int t = 0; t < 20; ++t) {
            std::vector<std::int64_t> g;
            for (int d = 0; d < 1 + static_cast<int>(rng.uniform(3)); ++d) g.push_back(1 + static_cast<std::int64_t>(rng.uniform(static_cast<std::uint64_t>(n - 1))));
            const Rational r(1, 2 + static_cast<std::int64_t>(rng.uniform(30)));
            const auto rep = measure_bound_check(bohr_elements(n, g, r));
            EXPECT_TRUE(rep.pass);
            ASSERT_TRUE(rep.bound.has_value());
            EXPECT_GE(rep.measure, *rep.bound);
        }
    }
    const std::vector<std::int64_t> g2{1, 10};
    const auto b = bohr_elements(101, g2, Rational(1, 10));
    EXPECT_EQ(b.elements, bohr_oracle(101, g2, Rational(1, 10)));
    EXPECT_TRUE(measure_bound_check(b).pass);
}

TEST(Bohr, ConstantFunctionIsAlreadySmooth) {
    const std::vector<std::int64_t> g{1};
    const auto outer = bohr_elements(64, g, Rational(1, 8));
    const auto inner = bohr_elements(64, g, Rational(1, 32));
    const auto d = smoothing_diagnostics(GroupFunction::constant(CyclicGroup(64), 2.0), outer, inner);
    EXPECT_NEAR(d.oscillation, 0.0, 1e-12);
    EXPECT_NEAR(d.l2_deviation, 0.0, 1e-12);
    EXPECT_NEAR(d.sup_norm, 2.0, 1e-15);
}

TEST(Bohr, SmoothingOscillationShrinksWithInnerRadius) {
    const std::vector<std::int64_t> g{1};
    CounterRng rng(9);
    const auto s = rng.subset(101, 20);
    const auto f = GroupFunction::indicator(CyclicGroup(101), s);
    const auto outer = bohr_elements(101, g, Rational(1, 8));
    double prev = INFINITY;
    for (std::int64_t q : {16, 32, 64, 128}) {
        const auto d = smoothing_diagnostics(f, outer, bohr_elements(101, g, Rational(1, q)));
        EXPECT_LE(d.oscillation, prev + 1e-12);
        prev = d.oscillation;
    }
    EXPECT_THROW((void)smoothing_diagnostics(f, outer, bohr_elements(101, std::vector<std::int64_t>{2}, Rational(1, 16))),
                 std::invalid_argument);
}

TEST(Bohr, SandersBudgetExamples) {
    const auto b1 = sanders_parameter_budget(1.0, 1.0, 3.0);
    EXPECT_NEAR(b1.dimension_budget, 3.0, 1e-12);
    const auto be = sanders_parameter_budget(std::numbers::e, 1.0, 3.0);
    EXPECT_NEAR(be.dimension_budget, 3.0 * std::numbers::e * 2 * 2, 1e-9);
    EXPECT_THROW((void)sanders_parameter_budget(0.5, 1.0), std::invalid_argument);
    EXPECT_THROW((void)sanders_parameter_budget(1.0, 0.0), std::invalid_argument);
}

TEST(Bohr, RejectsBadRadius) {
    const std::vector<std::int64_t> g{1};
    EXPECT_THROW((void)bohr_elements(8, g, Rational(0)), std::invalid_argument);
    EXPECT_THROW((void)bohr_elements(8, g, Rational(3, 2)), std::invalid_argument);
}
