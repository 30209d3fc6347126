#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "halab/group_core.hpp"
#include "halab/rational.hpp"

namespace halab {

/// B(Gamma, delta) = { x in Z_N : ||gamma x / N|| <= delta for all gamma in Gamma }.
/// Membership is decided exactly: min(r, N - r) * q <= p * N with
/// r = gamma x mod N and delta = p/q.
struct BohrSet {
    std::int64_t modulus = 1;
    std::vector<std::int64_t> frequencies;
    Rational radius{1, 2};
    std::vector<std::int64_t> elements;

    std::int64_t dimension() const noexcept { return static_cast<std::int64_t>(frequencies.size()); }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(elements.size()); }
    bool contains(std::int64_t x) const;
    /// |B| / N
    Rational measure() const { return Rational(size(), modulus); }
};

/// Throws std::invalid_argument unless 0 < delta <= 1 and Gamma is nonempty.
BohrSet bohr_elements(std::int64_t modulus, std::span<const std::int64_t> frequencies, const Rational& radius);

/// Normalized indicator: N/|B| on B, zero elsewhere.
GroupFunction beta(const BohrSet& bohr);

struct MeasureBoundReport {
    Rational measure;  ///< |B| / N
    std::optional<Rational> bound;  ///< delta^d when it fits in 64-bit terms
    bool pass = false; ///< measure >= bound
    double log_measure = 0.0;
    double log_bound = 0.0;
};

/// Exact check of mu(B) >= delta^d. Uses arbitrary precision for delta^d.
MeasureBoundReport measure_bound_check(const BohrSet& bohr);

struct SmoothingDiagnostics {
    /// sup_x max_{y in x+B'} |f*beta(y) - f*beta(x)|
    double oscillation = 0.0;
    /// sup_x ( mean_{y in x+B'} |f(y) - f*beta(y)|^2 )^{1/2}
    double l2_deviation = 0.0;
    double sup_norm = 0.0;
    /// max(oscillation, l2_deviation) / ||f||_inf, or 0 for f = 0.
    double implied_epsilon = 0.0;
};

/// Both left-hand sides of the Bohr-set smoothing statement for f, with the
/// outer set B defining beta and B_inner the neighbourhoods. Reporting only.
/// Throws std::invalid_argument when the two sets have different frequencies.
SmoothingDiagnostics smoothing_diagnostics(const GroupFunction& f, const BohrSet& outer, const BohrSet& inner);

struct SandersBudget {
    double a_f = 1.0;
    double eps = 1.0;
    double constant = 1.0;
    /// C eps^-2 A_f (1 + ln A_f)(1 + ln(A_f / eps))
    double dimension_budget = 0.0;
    /// C eps^-2 A_f (1 + ln(A_f / eps))
    double log_inv_delta_budget = 0.0;
    /// ln(1/delta') with delta' = eps delta / d at the budget values
    double log_inv_delta_inner = 0.0;

    /// (delta')^d > 1/p, evaluated in logarithms.
    bool nontrivial_for(double p) const { return dimension_budget * log_inv_delta_inner < std::log(p); }
};

SandersBudget sanders_parameter_budget(double a_f, double eps, double constant = 1.0);

}  // namespace halab
