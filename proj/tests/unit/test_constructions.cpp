#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "halab/constructions.hpp"
#include "halab/errors.hpp"
#include "halab/rng.hpp"
#include "oracles.hpp"

using namespace halab;

namespace {

GroupFunction centred_indicator(std::int64_t p, const std::vector<std::int64_t>& a) {
    auto f = GroupFunction::indicator(CyclicGroup(p), a);
    const double density = static_cast<double>(a.size()) / static_cast<double>(p);
    for (auto& v : f.values()) v -= density;
    return f;
}

std::vector<double> sorted_moduli(const GroupFunction& f) {
    std::vector<double> m;
    const auto spec = dft(f);
    for (auto c : spec.coefficients()) m.push_back(std::abs(c));
    std::sort(m.begin(), m.end());
    return m;
}

}  // namespace

TEST(TranslateSum, MaterialisesTheSum) {
    CounterRng rng(1);
    const CyclicGroup z(31);
    GroupFunction f0(z);
    for (int x = 0; x < 31; ++x) f0[x] = rng.unit();
    const std::vector<std::int64_t> tr{0, 5, 5, 30};
    const auto f = translate_sum(f0, tr);
    for (int x = 0; x < 31; ++x) {
        Complex acc = 0;
        for (auto t : tr) acc += f0[x - t];
        EXPECT_NEAR(std::abs(f[x] - acc), 0.0, 1e-14);
    }
}

TEST(TranslateSum, SingleTranslateKeepsNorm) {
    const auto f0 = centred_indicator(101, {1, 7, 20, 55});
    // eta in (1/4, 1/2) gives k = 1.
    const auto r = random_translate_sum(f0, 0.3, 50, 7);
    EXPECT_EQ(r.k, 1);
    for (const auto& t : r.trials) EXPECT_NEAR(t.wiener_norm, r.base_norm, 1e-12);
}

TEST(TranslateSum, ZeroBaseGivesZero) {
    const auto r = random_translate_sum(GroupFunction(CyclicGroup(17)), 0.1, 10, 3);
    for (const auto& t : r.trials) EXPECT_EQ(t.wiener_norm, 0.0);
}

TEST(TranslateSum, MonteCarloGuardAndTrialInvariants) {
    const auto a = CounterRng(99).subset(101, 10);
    const auto r = random_translate_sum(centred_indicator(101, a), 10.0 / 101.0, 200, 42);
    EXPECT_EQ(r.k, 5);
    EXPECT_EQ(r.trials.size(), 200u);
    EXPECT_TRUE(r.mean_within_guard());
    EXPECT_TRUE(r.zero_mean_all());
    EXPECT_TRUE(r.sup_bounds_all());
    for (const auto& t : r.trials) {
        EXPECT_LE(t.mean_value, 1e-12);
        EXPECT_LE(t.sup_norm, std::min(static_cast<double>(r.k) * r.base_sup, t.wiener_norm) + 1e-9);
    }
}

TEST(TranslateSum, SeedReproducesTrials) {
    const auto f0 = centred_indicator(53, {2, 3, 11});
    const auto a = random_translate_sum(f0, 0.05, 20, 5);
    const auto b = random_translate_sum(f0, 0.05, 20, 5);
    for (std::size_t i = 0; i < a.trials.size(); ++i) EXPECT_EQ(a.trials[i].translates, b.trials[i].translates);
    EXPECT_THROW((void)random_translate_sum(f0, 0.5, 1, 0), std::invalid_argument);
}

TEST(Dirichlet, Examples) {
    const std::vector<Rational> third{Rational(1, 3)};
    auto r = dirichlet_approx(third, Rational(1, 3), 10);
    EXPECT_TRUE(r.found);
    EXPECT_EQ(r.q, 1);

    const std::vector<Rational> ints{Rational(2), Rational(-5)};
    r = dirichlet_approx(ints, Rational(1, 10), 100);
    EXPECT_EQ(r.q, 1);
    EXPECT_EQ(*r.achieved_exact, Rational(0));

    const std::vector<double> golden{0.618034};
    r = dirichlet_approx(golden, 0.1, 10);
    EXPECT_EQ(r.q, 5);
    EXPECT_NEAR(r.achieved, 0.09017, 1e-5);
}

TEST(Dirichlet, PigeonholeAlwaysSucceedsAndReverifies) {
    CounterRng rng(12);
    for (int t = 0; t < 100; ++t) {
        const int dim = 1 + static_cast<int>(rng.uniform(3));
        std::vector<Rational> theta;
        for (int i = 0; i < dim; ++i) theta.push_back(Rational(static_cast<std::int64_t>(rng.uniform(997)), 997));
        const Rational eps(1, 2 + static_cast<std::int64_t>(rng.uniform(8)));
        const std::int64_t bound = static_cast<std::int64_t>(std::pow(static_cast<double>(eps.den()), dim));
        const auto r = dirichlet_approx(theta, eps, bound);
        ASSERT_TRUE(r.found);
        EXPECT_GE(r.q, 1);
        EXPECT_LE(r.q, bound);
        Rational worst(0);
        for (const auto& th : theta) worst = std::max(worst, oracle::circle_distance(Rational(r.q) * th));
        EXPECT_EQ(worst, *r.achieved_exact);
        EXPECT_FALSE(eps < worst);
        for (std::int64_t q = 1; q < r.q; ++q) {  // least
            Rational w(0);
            for (const auto& th : theta) w = std::max(w, oracle::circle_distance(Rational(q) * th));
            EXPECT_LT(eps, w);
        }
    }
}

TEST(Dirichlet, PreconditionAndFailureModes) {
    const std::vector<Rational> th{Rational(1, 7), Rational(3, 7)};
    EXPECT_THROW((void)dirichlet_approx(th, Rational(1, 100), 10), std::invalid_argument);
    const auto r = dirichlet_approx(th, Rational(1, 100), 3, true);
    EXPECT_FALSE(r.found);
    EXPECT_THROW((void)dirichlet_approx(th, Rational(0), 10), std::invalid_argument);
}

TEST(Rescale, PermutesCharacters) {
    const std::vector<std::int64_t> a{1, 5, 9};
    EXPECT_EQ(rescale_set(a, 1, 101), a);
    EXPECT_EQ(rescale_set(a, 100, 101), (std::vector<std::int64_t>{92, 96, 100}));
    const auto b = rescale_set(a, 7, 101);
    EXPECT_EQ(b.size(), a.size());
    const CyclicGroup z(101);
    EXPECT_NEAR(wiener_norm_group(GroupFunction::indicator(z, a)), wiener_norm_group(GroupFunction::indicator(z, b)),
                1e-10);
    CounterRng rng(8);
    for (int t = 0; t < 20; ++t) {
        const auto s = rng.subset(257, 12);
        const auto q = 1 + static_cast<std::int64_t>(rng.uniform(256));
        const auto m1 = sorted_moduli(GroupFunction::indicator(CyclicGroup(257), s));
        const auto m2 = sorted_moduli(GroupFunction::indicator(CyclicGroup(257), rescale_set(s, q, 257)));
        for (std::size_t i = 0; i < m1.size(); ++i) EXPECT_NEAR(m1[i], m2[i], 1e-10);
    }
    EXPECT_THROW((void)rescale_set(a, 0, 101), std::invalid_argument);
    EXPECT_THROW((void)rescale_set(a, 202, 101), std::invalid_argument);
}

TEST(Littlewood, ClosedForms) {
    const std::vector<std::int64_t> zero{0}, pair{0, 1};
    EXPECT_NEAR(littlewood_integral(zero), 1.0, 1e-9);
    EXPECT_NEAR(littlewood_integral(pair), 4.0 / std::numbers::pi, 1e-6);
    EXPECT_THROW((void)littlewood_integral(pair, 8), std::invalid_argument);
}

TEST(Littlewood, DirichletKernelAgainstMidpointRule) {
    // |sum_{b<m} e^{ibx}| = |sin(mx/2) / sin(x/2)|, integrated independently.
    for (std::int64_t m : {8, 64, 128}) {
        std::vector<std::int64_t> block(static_cast<std::size_t>(m));
        for (std::int64_t b = 0; b < m; ++b) block[static_cast<std::size_t>(b)] = b;
        const int nodes = 1 << 21;
        long double acc = 0;
        for (int i = 0; i < nodes; ++i) {
            const long double x = 2 * std::numbers::pi_v<long double> * (i + 0.5L) / nodes;
            acc += std::fabs(std::sin(m * x / 2) / std::sin(x / 2));
        }
        const double reference = static_cast<double>(acc / nodes);
        EXPECT_NEAR(littlewood_integral(block), reference, 1e-5) << m;
    }
}

TEST(Littlewood, TrivialBounds) {
    CounterRng rng(6);
    for (int t = 0; t < 10; ++t) {
        auto s = rng.subset(60, 1 + static_cast<std::int64_t>(rng.uniform(15)));
        const double v = littlewood_integral(s);
        EXPECT_GE(v, 1.0 - 1e-6);
        EXPECT_LE(v, static_cast<double>(s.size()) + 1e-6);
    }
}

TEST(Littlewood, TranslationInvariant) {
    const std::vector<std::int64_t> a{0, 3, 4, 10}, b{-7, -4, -3, 3};
    EXPECT_NEAR(littlewood_integral(a), littlewood_integral(b), 1e-6);
}

TEST(Charsmall, PowersOfTwo) {
    const std::vector<std::int64_t> a{1, 2, 4, 8};
    const auto r = charsmall_pipeline(a, 10007);
    EXPECT_EQ(r.dimension, 4);
    EXPECT_TRUE(r.within_threshold);
    EXPECT_LE(static_cast<double>(r.max_scaled_basis), std::pow(10007.0, 0.75));
    EXPECT_TRUE(r.norms_agree);
    EXPECT_NEAR(r.norm, r.rescaled_norm, 1e-10);
    EXPECT_TRUE(r.representations_hold);
    EXPECT_TRUE(r.within_third);
    ASSERT_TRUE(r.norm_over_log_size.has_value());
    EXPECT_GE(*r.norm_over_log_size, 0.5);
}

TEST(Charsmall, DegenerateDimensionOne) {
    const std::vector<std::int64_t> a{0, 1};
    const auto r = charsmall_pipeline(a, 101);
    EXPECT_EQ(r.dimension, 1);
    EXPECT_TRUE(r.norms_agree);
    EXPECT_THROW((void)charsmall_pipeline(a, 100), std::invalid_argument);
}

TEST(Kahane, Shapes) {
    const auto tent = kahane_family(KahaneShape::symmetric_tent, 0);
    EXPECT_EQ(tent.breakpoints(), (std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1)}));
    EXPECT_EQ(tent.slopes(), (std::vector<Rational>{Rational(1), Rational(-1)}));
    EXPECT_EQ(tent.winding(), 0);
    EXPECT_THROW((void)kahane_family(KahaneShape::symmetric_tent, 1), std::invalid_argument);

    const auto lin = kahane_family(KahaneShape::linear, 1);
    EXPECT_TRUE(lin.is_linear());
    EXPECT_EQ(lin.segments(), 1u);

    const auto asym = kahane_family(KahaneShape::asymmetric, 0, Rational(2), Rational(-2));
    EXPECT_EQ(asym.winding(), 0);
    EXPECT_FALSE(asym.is_linear());
    const auto lo = wiener_norm_circle(asym, 4).lower, hi = wiener_norm_circle(asym, 64).lower;
    EXPECT_GT(hi, lo);
    EXPECT_THROW((void)kahane_family(KahaneShape::asymmetric, 0, Rational(2), Rational(2)), std::invalid_argument);
}
