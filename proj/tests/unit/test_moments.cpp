#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "halab/errors.hpp"
#include "halab/moments.hpp"
#include "halab/rng.hpp"
#include "oracles.hpp"

using namespace halab;

namespace {

CircleMap tent() { return CircleMap({Rational(0), Rational(1, 2), Rational(1)}, {Rational(1), Rational(-1)}, Rational(0), 0); }

std::vector<std::int64_t> sorted_subset(CounterRng& rng, std::int64_t n, std::int64_t size) {
    auto s = rng.subset(n, size);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

TEST(Moments, FirstMomentIsSize) {
    const std::vector<std::int64_t> s{0, 3, 7, 9};
    EXPECT_EQ(t_k_count(s, 11, 1), 4);
}

TEST(Moments, SmallExampleFrozen) {
    const std::vector<std::int64_t> s{0, 1};
    EXPECT_EQ(oracle::t_k(s, 5, 2), 6);
    EXPECT_EQ(t_k_count(s, 5, 2), 6);
    const auto r = t_k_brute(GroupFunction::indicator(CyclicGroup(5), s), 2);
    ASSERT_TRUE(r.exact.has_value());
    EXPECT_EQ(*r.exact, 6);
}

TEST(Moments, WholeGroupGivesCube) {
    for (std::int64_t n : {3, 8, 13}) {
        std::vector<std::int64_t> all;
        for (std::int64_t i = 0; i < n; ++i) all.push_back(i);
        EXPECT_EQ(t_k_count(all, n, 2), n * n * n);
        EXPECT_NEAR(t_k_spectral(GroupFunction::indicator(CyclicGroup(n), all), 2).value,
                    static_cast<double>(n * n * n), 1e-6);
    }
}

TEST(Moments, CountMatchesEnumeration) {
    CounterRng rng(21);
    for (int t = 0; t < 30; ++t) {
        const std::int64_t n = 5 + static_cast<std::int64_t>(rng.uniform(40));
        const auto s = sorted_subset(rng, n, 1 + static_cast<std::int64_t>(rng.uniform(std::min<std::int64_t>(n, 7))));
        for (int k = 1; k <= 3; ++k) EXPECT_EQ(t_k_count(s, n, k), oracle::t_k(s, n, k)) << n << " k=" << k;
    }
}

TEST(Moments, SpectralMatchesBrute) {
    CounterRng rng(4);
    for (std::int64_t n : {17, 101}) {
        for (int t = 0; t < 10; ++t) {
            const auto s = sorted_subset(rng, n, 4 + static_cast<std::int64_t>(rng.uniform(7)));
            const auto f = GroupFunction::indicator(CyclicGroup(n), s);
            for (int k = 1; k <= 3; ++k) {
                const double b = t_k_brute(f, k).value;
                EXPECT_LE(std::abs(t_k_spectral(f, k).value - b), 1e-8 * std::max(1.0, b));
            }
        }
    }
}

TEST(Moments, GeneralFunctionBruteMatchesSpectral) {
    CounterRng rng(9);
    const CyclicGroup z(12);
    GroupFunction f(z);
    for (int x = 0; x < 12; x += 2) f[x] = {rng.unit(), rng.unit() - 0.5};
    for (int k = 1; k <= 3; ++k) {
        const double b = t_k_brute(f, k).value;
        EXPECT_NEAR(t_k_spectral(f, k).value, b, 1e-9 * std::max(1.0, b));
    }
}

TEST(Moments, BudgetEnforced) {
    std::vector<std::int64_t> s(20);
    for (int i = 0; i < 20; ++i) s[static_cast<std::size_t>(i)] = i;
    EXPECT_THROW((void)t_k_count(s, 101, 3, 100.0), BudgetExceeded);
    EXPECT_THROW((void)t_k_brute(GroupFunction::indicator(CyclicGroup(101), s), 3, 100.0), BudgetExceeded);
    EXPECT_THROW((void)t_k_count(s, 101, 0), std::invalid_argument);
}

TEST(MomentsPhi, HalfEtaIsUnconstrained) {
    CounterRng rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto s = sorted_subset(rng, 31, 6);
        for (int k = 1; k <= 2; ++k) EXPECT_EQ(t_k_phi(s, 31, tent(), Rational(1, 2), k), t_k_count(s, 31, k));
    }
}

TEST(MomentsPhi, LinearMapIsUnconstrained) {
    // phi*(x) = x/N, so every additive relation mod N has integer phase sum.
    CounterRng rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto s = sorted_subset(rng, 29, 7);
        EXPECT_EQ(t_k_phi(s, 29, CircleMap::linear(1), Rational(0), 2), t_k_count(s, 29, 2));
    }
}

TEST(MomentsPhi, MatchesEnumerationAndIsMonotoneInEta) {
    CounterRng rng(13);
    const std::vector<Rational> etas{Rational(0), Rational(1, 100), Rational(1, 20), Rational(1, 7), Rational(1, 3),
                                     Rational(1, 2)};
    for (int t = 0; t < 15; ++t) {
        const std::int64_t n = 7 + static_cast<std::int64_t>(rng.uniform(30));
        const auto s = sorted_subset(rng, n, 2 + static_cast<std::int64_t>(rng.uniform(4)));
        std::vector<Rational> phases;
        for (auto x : s) phases.push_back(Rational(static_cast<std::int64_t>(rng.uniform(23)), 23) + Rational(x, n));
        for (int k = 1; k <= 2; ++k) {
            std::int64_t prev = 0;
            for (const auto& eta : etas) {
                const auto got = t_k_phi(s, n, PhaseData(phases), eta, k);
                EXPECT_EQ(got, oracle::t_k_phi(s, n, phases, eta, k));
                EXPECT_GE(got, prev);
                prev = got;
            }
            EXPECT_EQ(prev, t_k_count(s, n, k));
        }
    }
}

TEST(MomentsPhi, BoundaryCountsAsInside) {
    // In Z_4, 1 + 1 = 3 + 3; with phases 0 and 1/8 that relation has phase gap exactly 1/4.
    const std::vector<std::int64_t> s{1, 3};
    const std::vector<Rational> ph{Rational(0), Rational(1, 8)};
    const auto at = t_k_phi(s, 4, PhaseData(ph), Rational(1, 4), 2);
    const auto below = t_k_phi(s, 4, PhaseData(ph), Rational(1, 5), 2);
    EXPECT_EQ(at, oracle::t_k_phi(s, 4, ph, Rational(1, 4), 2));
    EXPECT_EQ(below, oracle::t_k_phi(s, 4, ph, Rational(1, 5), 2));
    EXPECT_GT(at, below);
}

TEST(MomentsPhi, TentRegressionFrozen) {
    const std::vector<std::int64_t> s{1, 2, 3};
    std::vector<Rational> ph;
    for (auto x : s) ph.push_back(phi_star_turns(tent(), 7, x));
    ASSERT_EQ(oracle::t_k_phi(s, 7, ph, Rational(1, 100), 2), 19);
    EXPECT_EQ(t_k_phi(s, 7, tent(), Rational(1, 100), 2), 19);
}

TEST(MomentsPhi, DoublePhasesRejected) {
    const std::vector<std::int64_t> s{1, 2};
    EXPECT_THROW((void)t_k_phi(s, 7, PhaseData(std::vector<double>{0.1, 0.2}), Rational(1, 10), 1), NonExactPhaseData);
    EXPECT_EQ(t_k_phi_approx(s, 7, std::vector<double>{0.1, 0.2}, 0.5, 1), 2);
}

TEST(MomentsPhi, MomentBoundValues) {
    // k = 2, s = 5, |L| = 10: the first bound saturates at 2^6 * 4 * 100, the
    // second picks up (k/|L|)^k |L|^{4k/s}.
    EXPECT_NEAR(lambda_ks_moment_bound(2, 5, 10), 25600.0, 1e-9);
    EXPECT_NEAR(lambda_ks_phi_moment_bound(2, 5, 10), 32768.0 * std::pow(10.0, 1.6), 1e-6);
}
