#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "halab/dissociation.hpp"
#include "halab/group_core.hpp"
#include "halab/rational.hpp"
#include "halab/wiener_norms.hpp"

namespace halab {

// ---------------------------------------------------------------------------
// Random translate sums f = sum_j f0(. - x_j)

/// x -> sum_j f0(x - x_j)
GroupFunction translate_sum(const GroupFunction& f0, std::span<const std::int64_t> translates);

struct TranslateTrial {
    std::vector<std::int64_t> translates;
    double wiener_norm = 0.0;  ///< ||f||_A
    double sup_norm = 0.0;     ///< ||f||_inf
    double mean_value = 0.0;   ///< |fhat(0)|
};

struct TranslateSumReport {
    std::uint64_t seed = 0;
    int trial_count = 0;
    std::int64_t k = 0;          ///< floor(1 / (2 eta))
    double base_norm = 0.0;      ///< ||f0||_A
    double base_sup = 0.0;       ///< ||f0||_inf
    double base_mean = 0.0;      ///< |f0hat(0)|
    double expectation_bound = 0.0;  ///< sqrt(k) ||f0||_A
    std::vector<TranslateTrial> trials;
    double mean_norm = 0.0;
    double std_error = 0.0;      ///< sample standard deviation / sqrt(trials)
    double fraction_within = 0.0;  ///< share of trials with ||f||_A <= sqrt(k) ||f0||_A

    /// mean_norm <= expectation_bound * (1 + 3 std_error)
    bool mean_within_guard() const noexcept { return mean_norm <= expectation_bound * (1.0 + 3.0 * std_error); }
    /// |fhat(0)| <= 1e-12 on every trial (only meaningful when |f0hat(0)| <= 1e-12).
    bool zero_mean_all() const noexcept;
    /// ||f||_inf <= min(k ||f0||_inf, ||f||_A) + 1e-9 on every trial.
    bool sup_bounds_all() const noexcept;
};

/// Draws k = floor(1/(2 eta)) uniform translates per trial. Trial t uses the
/// counter stream seed ^ t, so trials are reproducible in isolation.
TranslateSumReport random_translate_sum(const GroupFunction& f0, double eta, int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Simultaneous approximation: least q with max_i ||q theta_i|| <= eps

struct ApproximationResult {
    bool found = false;
    std::int64_t q = 0;
    double achieved = 0.0;
    std::optional<Rational> achieved_exact;
    double target = 0.0;
    std::int64_t search_bound = 0;
};

/// Exact variant, theta in turns. Unless allow_failure is set, requires
/// q_max >= ceil(1/eps)^dim (the pigeonhole guarantee) and throws
/// std::invalid_argument otherwise.
ApproximationResult dirichlet_approx(std::span<const Rational> theta, const Rational& eps, std::int64_t q_max,
                                     bool allow_failure = false);
/// Floating-point variant, theta in turns.
ApproximationResult dirichlet_approx(std::span<const double> theta, double eps, std::int64_t q_max,
                                     bool allow_failure = false);

// ---------------------------------------------------------------------------

/// {q a : a in A} in Z_p. Throws std::invalid_argument when gcd(q, p) != 1.
std::vector<std::int64_t> rescale_set(std::span<const std::int64_t> set, std::int64_t q, std::int64_t modulus);

/// (1/2pi) int_{-pi}^{pi} |sum_{b in B} e^{ibx}| dx by the periodic trapezoid
/// rule on quad_points nodes, doubled with Richardson extrapolation until
/// successive extrapolants differ by less than 1e-6. Requires
/// quad_points >= 64 (max B - min B + 1); throws std::runtime_error on
/// non-convergence.
double littlewood_integral(std::span<const std::int64_t> integers, std::int64_t quad_points);
/// Same, with quad_points = 64 (max B - min B + 1).
double littlewood_integral(std::span<const std::int64_t> integers);

struct CharsmallReport {
    std::int64_t modulus = 0;
    std::vector<std::int64_t> set;
    std::vector<std::int64_t> basis;  ///< maximum dissociated subset
    std::int64_t dimension = 0;
    std::int64_t q = 0;
    std::int64_t max_scaled_basis = 0;  ///< max |q lambda|, signed representatives
    double dilation_threshold = 0.0;    ///< p^{1 - 1/d}
    bool within_threshold = false;
    std::vector<std::int64_t> rescaled;  ///< signed representatives of qA
    std::int64_t max_rescaled = 0;
    bool within_third = false;           ///< qA inside [-p/3, p/3]
    std::vector<SpanningWitness> representations;  ///< a = sum eps_l l over the basis
    bool representations_hold = false;
    double littlewood = 0.0;
    double norm = 0.0;           ///< ||chi_A||_A
    double rescaled_norm = 0.0;  ///< ||chi_{qA}||_A
    bool norms_agree = false;    ///< to 1e-10
    std::optional<double> norm_over_log_size;
    double norm_over_littlewood = 0.0;
};

/// Requires p prime and |A| <= 20.
CharsmallReport charsmall_pipeline(std::span<const std::int64_t> set, std::int64_t modulus);

// ---------------------------------------------------------------------------

enum class KahaneShape {
    symmetric_tent,  ///< slopes +1, -1 on [0,1/2], [1/2,1]; winding 0
    asymmetric,      ///< slopes a, b with the breakpoint fixed by the winding
    linear,          ///< t -> winding t (not a Kahane example)
};

/// Throws std::invalid_argument on inconsistent slope/winding data.
CircleMap kahane_family(KahaneShape shape, std::int64_t winding, Rational slope_a = Rational(1),
                        Rational slope_b = Rational(-1));

}  // namespace halab
