#include "halab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "halab/errors.hpp"
#include "halab/moments.hpp"
#include "halab/rng.hpp"

namespace halab {
namespace {

using i128 = __int128;

// Exact ||q a/b|| <= eps with eps = p/r:  min(t, b - t) r <= p b, t = q a mod b.
bool close_enough(std::int64_t q, const Rational& theta, const Rational& eps, Rational* achieved) {
    const i128 b = theta.den();
    i128 t = (static_cast<i128>(q) * theta.num()) % b;
    if (t < 0) t += b;
    const i128 dist = std::min(t, b - t);
    if (achieved != nullptr) *achieved = Rational(static_cast<std::int64_t>(dist), static_cast<std::int64_t>(b));
    return dist * eps.den() <= static_cast<i128>(eps.num()) * b;
}

double pigeonhole_bound(double eps, std::size_t dim) {
    return std::pow(std::ceil(1.0 / eps), static_cast<double>(dim));
}

}  // namespace

GroupFunction translate_sum(const GroupFunction& f0, std::span<const std::int64_t> translates) {
    GroupFunction f(f0.group());
    for (auto shift : translates) {
        for (std::int64_t x = 0; x < f0.size(); ++x) f[x + shift] += f0.values()[static_cast<std::size_t>(x)];
    }
    return f;
}

bool TranslateSumReport::zero_mean_all() const noexcept {
    return std::all_of(trials.begin(), trials.end(), [](const TranslateTrial& t) { return t.mean_value <= 1e-12; });
}

bool TranslateSumReport::sup_bounds_all() const noexcept {
    const double triangle = static_cast<double>(k) * base_sup;
    return std::all_of(trials.begin(), trials.end(), [&](const TranslateTrial& t) {
        return t.sup_norm <= std::min(triangle, t.wiener_norm) + 1e-9;
    });
}

TranslateSumReport random_translate_sum(const GroupFunction& f0, double eta, int trials, std::uint64_t seed) {
    if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("random_translate_sum: eta must lie in (0, 1/2)");
    if (trials < 1) throw std::invalid_argument("random_translate_sum: need at least one trial");
    TranslateSumReport r;
    r.seed = seed;
    r.trial_count = trials;
    r.k = static_cast<std::int64_t>(std::floor(1.0 / (2.0 * eta)));
    const Spectrum base = dft(f0);
    r.base_norm = base.l1_norm();
    r.base_sup = f0.sup_norm();
    r.base_mean = std::abs(base[0]);
    r.expectation_bound = std::sqrt(static_cast<double>(r.k)) * r.base_norm;

    const auto n = static_cast<std::uint64_t>(f0.size());
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t within = 0;
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed ^ static_cast<std::uint64_t>(t));
        TranslateTrial trial;
        for (std::int64_t j = 0; j < r.k; ++j) trial.translates.push_back(static_cast<std::int64_t>(rng.uniform(n)));
        const GroupFunction f = translate_sum(f0, trial.translates);
        const Spectrum spec = dft(f);
        trial.wiener_norm = spec.l1_norm();
        trial.sup_norm = f.sup_norm();
        trial.mean_value = std::abs(spec[0]);
        sum += trial.wiener_norm;
        sum_sq += trial.wiener_norm * trial.wiener_norm;
        if (trial.wiener_norm <= r.expectation_bound) ++within;
        r.trials.push_back(std::move(trial));
    }
    const double m = static_cast<double>(trials);
    r.mean_norm = sum / m;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - m * r.mean_norm * r.mean_norm) / (m - 1.0));
        r.std_error = std::sqrt(var / m);
    }
    r.fraction_within = static_cast<double>(within) / m;
    return r;
}

ApproximationResult dirichlet_approx(std::span<const Rational> theta, const Rational& eps, std::int64_t q_max,
                                     bool allow_failure) {
    if (!(Rational(0) < eps)) throw std::invalid_argument("dirichlet_approx: eps must be positive");
    if (q_max < 1) throw std::invalid_argument("dirichlet_approx: q_max must be positive");
    if (!allow_failure && static_cast<double>(q_max) < pigeonhole_bound(eps.to_double(), theta.size())) {
        throw std::invalid_argument("dirichlet_approx: q_max below ceil(1/eps)^dim; pass allow_failure to search anyway");
    }
    ApproximationResult r;
    r.target = eps.to_double();
    r.search_bound = q_max;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        Rational worst(0);
        bool ok = true;
        for (const auto& t : theta) {
            Rational a;
            if (!close_enough(q, t, eps, &a)) {
                ok = false;
                break;
            }
            worst = std::max(worst, a);
        }
        if (ok) {
            r.found = true;
            r.q = q;
            r.achieved_exact = worst;
            r.achieved = worst.to_double();
            return r;
        }
    }
    if (!allow_failure) throw SearchFailed("dirichlet_approx: no q found despite the pigeonhole guarantee");
    return r;
}

ApproximationResult dirichlet_approx(std::span<const double> theta, double eps, std::int64_t q_max,
                                     bool allow_failure) {
    if (!(eps > 0.0)) throw std::invalid_argument("dirichlet_approx: eps must be positive");
    if (q_max < 1) throw std::invalid_argument("dirichlet_approx: q_max must be positive");
    if (!allow_failure && static_cast<double>(q_max) < pigeonhole_bound(eps, theta.size())) {
        throw std::invalid_argument("dirichlet_approx: q_max below ceil(1/eps)^dim; pass allow_failure to search anyway");
    }
    ApproximationResult r;
    r.target = eps;
    r.search_bound = q_max;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        double worst = 0.0;
        for (double t : theta) {
            worst = std::max(worst, phase_distance(static_cast<double>(q) * t, AngleUnit::fraction).value);
            if (worst > eps) break;
        }
        if (worst <= eps) {
            r.found = true;
            r.q = q;
            r.achieved = worst;
            return r;
        }
    }
    return r;
}

std::vector<std::int64_t> rescale_set(std::span<const std::int64_t> set, std::int64_t q, std::int64_t modulus) {
    if (std::gcd(q, modulus) != 1) throw std::invalid_argument("rescale_set: q must be a unit modulo p");
    std::vector<std::int64_t> out;
    for (auto a : set) out.push_back(static_cast<std::int64_t>((static_cast<i128>(q) * a) % modulus));
    return normalize_set(out, modulus);
}

double littlewood_integral(std::span<const std::int64_t> integers, std::int64_t quad_points) {
    if (integers.empty()) return 0.0;
    const auto [lo_it, hi_it] = std::minmax_element(integers.begin(), integers.end());
    const std::int64_t lo = *lo_it;
    const std::int64_t span = *hi_it - lo + 1;
    if (quad_points < 64 * span) throw std::invalid_argument("littlewood_integral: need at least 64 nodes per unit of spectral diameter");

    // Trapezoid on M equispaced nodes: the node values of sum e^{ibx} are an
    // inverse DFT of the (shifted) indicator of B on Z_M.
    auto trapezoid = [&](std::int64_t m) {
        Spectrum s{CyclicGroup(m)};
        for (auto b : integers) s.coefficients()[static_cast<std::size_t>(b - lo)] += 1.0;
        const GroupFunction values = idft(s, TransformMethod::fast);
        double acc = 0.0;
        for (const auto& v : values.values()) acc += std::abs(v);
        return acc / static_cast<double>(m);
    };

    constexpr std::int64_t kMaxNodes = std::int64_t{1} << 25;
    std::int64_t m = quad_points;
    double prev_t = trapezoid(m);
    double prev_r = prev_t;
    for (int level = 1; m * 2 <= kMaxNodes; ++level) {
        m *= 2;
        const double t = trapezoid(m);
        const double r = (4.0 * t - prev_t) / 3.0;
        if (level >= 2 && std::abs(r - prev_r) < 1e-6) return r;
        prev_t = t;
        prev_r = r;
    }
    throw std::runtime_error("littlewood_integral: no convergence within the refinement budget");
}

double littlewood_integral(std::span<const std::int64_t> integers) {
    if (integers.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(integers.begin(), integers.end());
    return littlewood_integral(integers, 64 * (*hi - *lo + 1));
}

CharsmallReport charsmall_pipeline(std::span<const std::int64_t> set, std::int64_t modulus) {
    if (!is_prime(modulus)) throw std::invalid_argument("charsmall_pipeline: modulus must be prime");
    CharsmallReport r;
    r.modulus = modulus;
    r.set = normalize_set(set, modulus);
    if (r.set.empty()) throw std::invalid_argument("charsmall_pipeline: empty set");
    const CyclicGroup g(modulus);

    r.basis = max_dissociated_subset(r.set, modulus, SubsetMode::exact);
    r.dimension = static_cast<std::int64_t>(r.basis.size());

    // Exhaustive dilation search: least q minimizing max |q lambda|.
    r.max_scaled_basis = INT64_MAX;
    for (std::int64_t q = 1; q < modulus; ++q) {
        std::int64_t worst = 0;
        for (auto l : r.basis) {
            worst = std::max(worst, std::abs(g.signed_rep(static_cast<std::int64_t>((static_cast<i128>(q) * l) % modulus))));
            if (worst >= r.max_scaled_basis) break;
        }
        if (worst < r.max_scaled_basis) {
            r.max_scaled_basis = worst;
            r.q = q;
        }
    }
    if (r.basis.empty()) {
        r.q = 1;
        r.max_scaled_basis = 0;
    }
    const double d = static_cast<double>(std::max<std::int64_t>(r.dimension, 1));
    r.dilation_threshold = std::pow(static_cast<double>(modulus), 1.0 - 1.0 / d);
    r.within_threshold = static_cast<double>(r.max_scaled_basis) <= r.dilation_threshold;

    for (auto a : r.set) {
        const std::int64_t b = g.signed_rep(static_cast<std::int64_t>((static_cast<i128>(r.q) * a) % modulus));
        r.rescaled.push_back(b);
        r.max_rescaled = std::max(r.max_rescaled, std::abs(b));
    }
    std::sort(r.rescaled.begin(), r.rescaled.end());
    r.within_third = 3 * r.max_rescaled <= modulus;

    const auto spec = FamilySpec::classical(modulus);
    r.representations_hold = true;
    for (auto a : r.set) {
        SpanningWitness w;
        if (std::binary_search(r.basis.begin(), r.basis.end(), a)) {
            w.x = a;
            w.basis = r.basis;
            w.coefficients.assign(r.basis.size(), 0);
            w.coefficients[static_cast<std::size_t>(std::lower_bound(r.basis.begin(), r.basis.end(), a) - r.basis.begin())] = 1;
        } else {
            w = spanning_witness(a, r.basis, spec);
        }
        r.representations_hold = r.representations_hold && witness_holds(w, spec);
        r.representations.push_back(std::move(w));
    }

    r.littlewood = littlewood_integral(r.rescaled);
    r.norm = wiener_norm_group(GroupFunction::indicator(g, r.set));
    r.rescaled_norm = wiener_norm_group(GroupFunction::indicator(g, r.rescaled));
    r.norms_agree = std::abs(r.norm - r.rescaled_norm) <= 1e-10;
    if (r.set.size() >= 2) r.norm_over_log_size = r.norm / std::log(static_cast<double>(r.set.size()));
    r.norm_over_littlewood = r.norm / r.littlewood;
    return r;
}

CircleMap kahane_family(KahaneShape shape, std::int64_t winding, Rational slope_a, Rational slope_b) {
    switch (shape) {
        case KahaneShape::linear:
            return CircleMap::linear(winding);
        case KahaneShape::symmetric_tent:
            if (winding != 0) throw std::invalid_argument("symmetric tent has winding 0");
            return CircleMap({Rational(0), Rational(1, 2), Rational(1)}, {Rational(1), Rational(-1)}, Rational(0), 0);
        case KahaneShape::asymmetric: {
            if (slope_a == slope_b) throw std::invalid_argument("asymmetric map needs two distinct slopes");
            // a t + b (1 - t) = winding
            const Rational t = (Rational(winding) - slope_b) / (slope_a - slope_b);
            if (!(Rational(0) < t && t < Rational(1))) {
                throw std::invalid_argument("slopes " + slope_a.str() + ", " + slope_b.str() +
                                            " cannot realize winding " + std::to_string(winding));
            }
            return CircleMap({Rational(0), t, Rational(1)}, {slope_a, slope_b}, Rational(0), winding);
        }
    }
    throw std::invalid_argument("unknown Kahane shape");
}

}  // namespace halab
