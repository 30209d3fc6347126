#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "halab/group_core.hpp"
#include "halab/rational.hpp"

namespace halab {

/// sum_g |fhat(g)|
double wiener_norm_group(const GroupFunction& f);

/// Continuous piecewise-linear map of the circle with rational data.
///
/// The circle is parameterized by t in [0, 1) (fraction of a full turn) and
/// values are likewise measured in turns: phi(t) = offset + integral of the
/// slope. The total increment over one turn is the integer winding number,
/// so phi(t + 1) = phi(t) + winding.
class CircleMap {
public:
    /// Throws std::invalid_argument unless breakpoints run strictly from 0 to
    /// 1, there is one slope per segment, and the total increment equals
    /// `winding`.
    CircleMap(std::vector<Rational> breakpoints, std::vector<Rational> slopes, Rational offset,
              std::int64_t winding);

    /// t -> winding * t + offset
    static CircleMap linear(std::int64_t winding, Rational offset = Rational(0));

    const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<Rational>& slopes() const noexcept { return slopes_; }
    const Rational& offset() const noexcept { return offset_; }
    std::int64_t winding() const noexcept { return winding_; }
    std::size_t segments() const noexcept { return slopes_.size(); }

    /// phi at the segment's left endpoint, in turns.
    const Rational& segment_start_value(std::size_t j) const { return start_values_[j]; }

    /// phi(t) in turns, for any rational t (lifted with the winding number).
    Rational value(const Rational& t) const;
    double value(double t) const;

    double max_abs_slope() const noexcept;
    /// All segments share one slope.
    bool is_linear() const noexcept;

    friend bool operator==(const CircleMap&, const CircleMap&) = default;

private:
    std::vector<Rational> breakpoints_;
    std::vector<Rational> slopes_;
    Rational offset_;
    std::int64_t winding_;
    std::vector<Rational> start_values_;
};

/// Fourier coefficient chat_k of t -> e^{i n phi(t)} (circle in radians),
/// integrated in closed form segment by segment.
Complex exp_map_coefficient(const CircleMap& phi, std::int64_t n, std::int64_t k);

/// Coefficients for k = k_lo..k_hi inclusive.
std::vector<Complex> exp_map_coefficients(const CircleMap& phi, std::int64_t n, std::int64_t k_lo,
                                          std::int64_t k_hi);

struct NormInterval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    /// Truncation index: lower sums |k| <= cutoff.
    std::int64_t cutoff = 0;
    bool tolerance_met = false;

    bool contains(double v, double slack = 0.0) const noexcept {
        return lower - slack <= v && v <= upper + slack;
    }
};

struct CircleNormOptions {
    double tol = 1e-2;
    std::int64_t k_max = std::int64_t{1} << 16;
};

/// Certified bracket for ||e^{i n phi}||_{A(T)}.
///
/// lower = sum_{|k|<=K} |chat_k|, summed in ascending |k| with k<0 first on
/// ties. The tail sum_{|k|>K} |chat_k| is at most n max|slope| sqrt(2/K) by
/// Cauchy-Schwarz against the L2 norm of the derivative. K is the least value
/// with tail <= tol, capped at k_max (then tolerance_met is false).
NormInterval wiener_norm_circle(const CircleMap& phi, std::int64_t n, const CircleNormOptions& opts = {});

/// Running maxima Theta(0..n) of the circle norm brackets; element l brackets
/// max_{j<=l} ||e^{i j phi}||_A. Every l is evaluated.
std::vector<NormInterval> theta_series(const CircleMap& phi, std::int64_t n, const CircleNormOptions& opts = {});
NormInterval theta(const CircleMap& phi, std::int64_t n, const CircleNormOptions& opts = {});

/// phi at the circle point x/N (fraction of a turn), in radians.
double phi_star(const CircleMap& phi, std::int64_t modulus, std::int64_t x);
/// Same point, exact, in turns.
Rational phi_star_turns(const CircleMap& phi, std::int64_t modulus, std::int64_t x);

}  // namespace halab
