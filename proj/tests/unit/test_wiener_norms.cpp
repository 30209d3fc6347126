#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "halab/group_core.hpp"
#include "halab/rng.hpp"
#include "halab/wiener_norms.hpp"
#include "oracles.hpp"

using namespace halab;

namespace {

CircleMap tent() { return CircleMap({Rational(0), Rational(1, 2), Rational(1)}, {Rational(1), Rational(-1)}, Rational(0), 0); }

CircleMap zigzag() {
    // Winding 1, three pieces with slopes 3, -1, 2.
    return CircleMap({Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)},
                     {Rational(3), Rational(-1), Rational(1)}, Rational(1, 7), 1);
}

}  // namespace

TEST(WienerGroup, FullSetAndSingleton) {
    for (std::int64_t n : {1, 5, 64, 101}) {
        std::vector<std::int64_t> all(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        EXPECT_NEAR(wiener_norm_group(GroupFunction::indicator(CyclicGroup(n), all)), 1.0, 1e-10);
        const std::vector<std::int64_t> one{n / 2};
        EXPECT_NEAR(wiener_norm_group(GroupFunction::indicator(CyclicGroup(n), one)), 1.0, 1e-10);
    }
}

TEST(WienerGroup, IndicatorBoundedByRootSize) {
    CounterRng rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto s = rng.subset(97, 1 + static_cast<std::int64_t>(rng.uniform(40)));
        const double a = wiener_norm_group(GroupFunction::indicator(CyclicGroup(97), s));
        EXPECT_LE(a, std::sqrt(static_cast<double>(s.size())) + 1e-9);
        EXPECT_GE(a, 1.0 - 1e-9);
    }
}

TEST(WienerGroup, Submultiplicative) {
    CounterRng rng(8);
    const CyclicGroup z(60);
    for (int t = 0; t < 30; ++t) {
        GroupFunction f(z), g(z);
        for (int x = 0; x < 60; ++x) {
            f[x] = {rng.unit() - 0.5, rng.unit() - 0.5};
            g[x] = {rng.unit() - 0.5, rng.unit() - 0.5};
        }
        EXPECT_LE(wiener_norm_group(f * g), wiener_norm_group(f) * wiener_norm_group(g) * (1 + 1e-12) + 1e-12);
    }
}

TEST(CircleMap, RejectsBadData) {
    EXPECT_THROW(CircleMap({Rational(0), Rational(1)}, {Rational(1, 2)}, Rational(0), 0), std::invalid_argument);
    EXPECT_THROW(CircleMap({Rational(0), Rational(1, 2)}, {Rational(1)}, Rational(0), 0), std::invalid_argument);
    EXPECT_THROW(CircleMap({Rational(0), Rational(1)}, {Rational(1), Rational(2)}, Rational(0), 1), std::invalid_argument);
}

TEST(CircleMap, ValuesAndLinearity) {
    const auto t = tent();
    EXPECT_EQ(t.value(Rational(1, 4)), Rational(1, 4));
    EXPECT_EQ(t.value(Rational(3, 4)), Rational(1, 4));
    EXPECT_FALSE(t.is_linear());
    EXPECT_TRUE(CircleMap::linear(3).is_linear());
    EXPECT_DOUBLE_EQ(zigzag().max_abs_slope(), 3.0);
}

TEST(ExpMapCoefficients, TentAgainstQuadrature) {
    const auto t = tent();
    for (std::int64_t n : {1, 2, 5}) {
        for (std::int64_t k = -6; k <= 6; ++k) {
            EXPECT_NEAR(std::abs(exp_map_coefficient(t, n, k) - oracle::exp_map_coefficient(t, n, k)), 0.0, 1e-6)
                << n << " " << k;
        }
    }
}

TEST(ExpMapCoefficients, GeneralMapAgainstQuadrature) {
    const auto z = zigzag();
    for (std::int64_t n : {1, 3}) {
        for (std::int64_t k = -8; k <= 8; ++k) {
            EXPECT_NEAR(std::abs(exp_map_coefficient(z, n, k) - oracle::exp_map_coefficient(z, n, k)), 0.0, 1e-6);
        }
    }
}

TEST(ExpMapCoefficients, LinearIsDelta) {
    const auto lin = CircleMap::linear(1);
    for (std::int64_t k = -4; k <= 4; ++k) {
        EXPECT_NEAR(std::abs(exp_map_coefficient(lin, 3, k) - Complex(k == 3 ? 1.0 : 0.0, 0)), 0.0, 1e-12);
    }
    EXPECT_NEAR(std::abs(exp_map_coefficient(tent(), 0, 0) - Complex(1, 0)), 0.0, 1e-12);
}

TEST(ExpMapCoefficients, BesselInequality) {
    for (const auto& phi : {tent(), zigzag()}) {
        double sum = 0;
        for (auto c : exp_map_coefficients(phi, 4, -400, 400)) sum += std::norm(c);
        EXPECT_LE(sum, 1.0 + 1e-9);
        EXPECT_GT(sum, 0.99);
    }
}

TEST(WienerCircle, IntervalBracketsAndTrivialCases) {
    const auto z0 = wiener_norm_circle(tent(), 0);
    EXPECT_NEAR(z0.lower, 1.0, 1e-12);
    EXPECT_NEAR(z0.upper, 1.0, 1e-12);
    const auto lin = wiener_norm_circle(CircleMap::linear(1), 7);
    EXPECT_NEAR(lin.lower, 1.0, 1e-9);
    EXPECT_TRUE(lin.contains(1.0, 1e-9));
    const auto t = wiener_norm_circle(tent(), 1, {1e-2, 1 << 16});
    EXPECT_TRUE(t.tolerance_met);
    EXPECT_LE(t.upper - t.lower, 1e-2);
    EXPECT_GE(t.lower, 1.0);
}

TEST(Theta, StartsAtOneAndIsMonotone) {
    const auto series = theta_series(tent(), 20);
    EXPECT_NEAR(series[0].lower, 1.0, 1e-12);
    EXPECT_NEAR(series[0].upper, 1.0, 1e-12);
    for (std::size_t i = 1; i < series.size(); ++i) {
        EXPECT_GE(series[i].lower, series[i - 1].lower);
        EXPECT_GE(series[i].upper, series[i - 1].upper);
    }
    EXPECT_THROW((void)theta_series(tent(), -1), std::invalid_argument);
}

TEST(PhiStar, Examples) {
    EXPECT_NEAR(phi_star(CircleMap::linear(1), 8, 2), std::numbers::pi / 2, 1e-12);
    EXPECT_NEAR(phi_star(tent(), 4, 1), std::numbers::pi / 2, 1e-12);
    EXPECT_EQ(phi_star_turns(tent(), 4, 1), Rational(1, 4));
    EXPECT_THROW((void)phi_star_turns(tent(), 4, 4), std::invalid_argument);
}
