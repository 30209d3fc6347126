#include "halab/wiener_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace halab {
namespace {

using i128 = __int128;

i128 mod_floor(i128 a, i128 m) {
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

// Integer form of the segment data over a common denominator D (even), so
// that every phase needed for a coefficient is an exact integer multiple of
// 1/D. Built once per call.
struct ScaledMap {
    struct Segment {
        std::int64_t start;        // a_j * D
        std::int64_t length;       // (b_j - a_j) * D
        std::int64_t rise;         // m_j (b_j - a_j) * D
        std::int64_t start_value;  // phi(a_j) * D
        double slope;
        double length_turns;
    };
    std::int64_t denom = 2;
    std::vector<Segment> segments;

    explicit ScaledMap(const CircleMap& phi) {
        std::int64_t l = 1;
        for (std::size_t j = 0; j < phi.segments(); ++j) {
            const Rational len = phi.breakpoints()[j + 1] - phi.breakpoints()[j];
            l = checked_lcm(l, phi.breakpoints()[j].den());
            l = checked_lcm(l, len.den());
            l = checked_lcm(l, (phi.slopes()[j] * len).den());
            l = checked_lcm(l, phi.segment_start_value(j).den());
        }
        denom = 2 * l;
        for (std::size_t j = 0; j < phi.segments(); ++j) {
            const Rational len = phi.breakpoints()[j + 1] - phi.breakpoints()[j];
            const Rational d(denom);
            segments.push_back(Segment{
                (phi.breakpoints()[j] * d).num(),
                (len * d).num(),
                (phi.slopes()[j] * len * d).num(),
                (phi.segment_start_value(j) * d).num(),
                phi.slopes()[j].to_double(),
                len.to_double(),
            });
        }
    }

    Complex coefficient(std::int64_t n, std::int64_t k) const {
        Complex acc{};
        const i128 d = denom;
        for (const auto& s : segments) {
            // r = (n m - k)(b - a) in units of 1/D; both products are even
            const i128 r = static_cast<i128>(n) * s.rise - static_cast<i128>(k) * s.length;
            const i128 theta = static_cast<i128>(n) * s.start_value - static_cast<i128>(k) * s.start + r / 2;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod_floor(theta, d)) / static_cast<double>(d);
            double magnitude;
            if (r == 0) {
                magnitude = s.length_turns;
            } else {
                const double omega = static_cast<double>(n) * s.slope - static_cast<double>(k);
                const double rr = static_cast<double>(mod_floor(r, 2 * d)) / static_cast<double>(d);
                magnitude = std::sin(std::numbers::pi * rr) / (std::numbers::pi * omega);
            }
            acc += std::polar(magnitude, angle);
        }
        return acc;
    }
};

}  // namespace

double wiener_norm_group(const GroupFunction& f) { return dft(f).l1_norm(); }

CircleMap::CircleMap(std::vector<Rational> breakpoints, std::vector<Rational> slopes, Rational offset,
                     std::int64_t winding)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)), offset_(offset), winding_(winding) {
    if (breakpoints_.size() < 2 || breakpoints_.front() != Rational(0) || breakpoints_.back() != Rational(1)) {
        throw std::invalid_argument("circle map breakpoints must run from 0 to 1");
    }
    if (slopes_.size() + 1 != breakpoints_.size()) {
        throw std::invalid_argument("circle map needs exactly one slope per segment");
    }
    Rational value = offset_;
    for (std::size_t j = 0; j < slopes_.size(); ++j) {
        if (!(breakpoints_[j] < breakpoints_[j + 1])) {
            throw std::invalid_argument("circle map breakpoints must be strictly increasing");
        }
        start_values_.push_back(value);
        value += slopes_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    }
    if (value - offset_ != Rational(winding_)) {
        throw std::invalid_argument("circle map total increment " + (value - offset_).str() +
                                    " does not equal winding " + std::to_string(winding_));
    }
}

CircleMap CircleMap::linear(std::int64_t winding, Rational offset) {
    return CircleMap({Rational(0), Rational(1)}, {Rational(winding)}, offset, winding);
}

Rational CircleMap::value(const Rational& t) const {
    const std::int64_t turns = t.floor();
    const Rational u = t - Rational(turns);
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u);
    std::size_t j = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1;
    j = std::min(j, slopes_.size() - 1);
    return start_values_[j] + slopes_[j] * (u - breakpoints_[j]) + Rational(winding_) * Rational(turns);
}

double CircleMap::value(double t) const {
    const double turns = std::floor(t);
    const double u = t - turns;
    std::size_t j = 0;
    while (j + 1 < slopes_.size() && breakpoints_[j + 1].to_double() <= u) ++j;
    return start_values_[j].to_double() + slopes_[j].to_double() * (u - breakpoints_[j].to_double()) +
           static_cast<double>(winding_) * turns;
}

double CircleMap::max_abs_slope() const noexcept {
    double m = 0.0;
    for (const auto& s : slopes_) m = std::max(m, std::abs(s.to_double()));
    return m;
}

bool CircleMap::is_linear() const noexcept {
    return std::all_of(slopes_.begin(), slopes_.end(), [&](const Rational& s) { return s == slopes_.front(); });
}

Complex exp_map_coefficient(const CircleMap& phi, std::int64_t n, std::int64_t k) {
    return ScaledMap(phi).coefficient(n, k);
}

std::vector<Complex> exp_map_coefficients(const CircleMap& phi, std::int64_t n, std::int64_t k_lo,
                                          std::int64_t k_hi) {
    ScaledMap scaled(phi);
    std::vector<Complex> out;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) out.push_back(scaled.coefficient(n, k));
    return out;
}

NormInterval wiener_norm_circle(const CircleMap& phi, std::int64_t n, const CircleNormOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("wiener_norm_circle: tol must be positive");
    const double lip = std::abs(static_cast<double>(n)) * phi.max_abs_slope();
    auto tail = [&](std::int64_t cutoff) {
        if (lip == 0.0) return 0.0;
        return cutoff == 0 ? INFINITY : lip * std::sqrt(2.0 / static_cast<double>(cutoff));
    };

    std::int64_t cutoff = 0;
    if (lip > 0.0) {
        const double needed = std::ceil(2.0 * (lip / opts.tol) * (lip / opts.tol));
        const auto floor_k = static_cast<std::int64_t>(std::ceil(lip)) + 1;
        const double wanted = std::max(needed, static_cast<double>(floor_k));
        cutoff = wanted >= static_cast<double>(opts.k_max) ? opts.k_max : static_cast<std::int64_t>(wanted);
    }

    ScaledMap scaled(phi);
    double lower = std::abs(scaled.coefficient(n, 0));
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        lower += std::abs(scaled.coefficient(n, -k));
        lower += std::abs(scaled.coefficient(n, k));
    }
    NormInterval out;
    out.lower = lower;
    out.cutoff = cutoff;
    const double t = tail(cutoff);
    out.upper = lower + t;
    out.tolerance_met = t <= opts.tol;
    return out;
}

std::vector<NormInterval> theta_series(const CircleMap& phi, std::int64_t n, const CircleNormOptions& opts) {
    if (n < 0) throw std::invalid_argument("theta: n must be nonnegative");
    std::vector<NormInterval> out;
    NormInterval running;
    for (std::int64_t l = 0; l <= n; ++l) {
        NormInterval cur = wiener_norm_circle(phi, l, opts);
        if (l == 0) {
            running = cur;
        } else {
            running.lower = std::max(running.lower, cur.lower);
            running.upper = std::max(running.upper, cur.upper);
            running.cutoff = std::max(running.cutoff, cur.cutoff);
            running.tolerance_met = running.tolerance_met && cur.tolerance_met;
        }
        out.push_back(running);
    }
    return out;
}

NormInterval theta(const CircleMap& phi, std::int64_t n, const CircleNormOptions& opts) {
    return theta_series(phi, n, opts).back();
}

Rational phi_star_turns(const CircleMap& phi, std::int64_t modulus, std::int64_t x) {
    if (modulus < 1 || x < 0 || x >= modulus) throw std::invalid_argument("phi_star: residue out of range");
    return phi.value(Rational(x, modulus));
}

double phi_star(const CircleMap& phi, std::int64_t modulus, std::int64_t x) {
    return 2.0 * std::numbers::pi * phi_star_turns(phi, modulus, x).to_double();
}

}  // namespace halab
