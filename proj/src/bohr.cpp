#include "halab/bohr.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "halab/moments.hpp"

namespace halab {
namespace {

using boost::multiprecision::cpp_int;

bool member(std::int64_t modulus, std::span<const std::int64_t> gammas, const Rational& radius, std::int64_t x) {
    for (auto g : gammas) {
        const __int128 prod = static_cast<__int128>(g) * x;
        std::int64_t r = static_cast<std::int64_t>(prod % modulus);
        if (r < 0) r += modulus;
        const std::int64_t dist = std::min(r, modulus - r);
        if (static_cast<__int128>(dist) * radius.den() > static_cast<__int128>(radius.num()) * modulus) return false;
    }
    return true;
}

}  // namespace

bool BohrSet::contains(std::int64_t x) const {
    std::int64_t r = x % modulus;
    if (r < 0) r += modulus;
    return std::binary_search(elements.begin(), elements.end(), r);
}

BohrSet bohr_elements(std::int64_t modulus, std::span<const std::int64_t> frequencies, const Rational& radius) {
    if (!(Rational(0) < radius) || Rational(1) < radius) throw std::invalid_argument("Bohr radius must lie in (0, 1]");
    if (frequencies.empty()) throw std::invalid_argument("Bohr set needs at least one frequency");
    BohrSet b;
    b.modulus = modulus;
    b.frequencies = normalize_set(frequencies, modulus);
    b.radius = radius;
    for (std::int64_t x = 0; x < modulus; ++x) {
        if (member(modulus, b.frequencies, radius, x)) b.elements.push_back(x);
    }
    return b;
}

GroupFunction beta(const BohrSet& bohr) {
    const CyclicGroup g(bohr.modulus);
    GroupFunction f(g);
    const double height = static_cast<double>(bohr.modulus) / static_cast<double>(bohr.size());
    for (auto x : bohr.elements) f[x] = height;
    return f;
}

MeasureBoundReport measure_bound_check(const BohrSet& bohr) {
    MeasureBoundReport r;
    r.measure = bohr.measure();
    const auto d = static_cast<unsigned>(bohr.dimension());
    // |B| q^d >= p^d N
    const cpp_int lhs = cpp_int(bohr.size()) * boost::multiprecision::pow(cpp_int(bohr.radius.den()), d);
    const cpp_int rhs = boost::multiprecision::pow(cpp_int(bohr.radius.num()), d) * cpp_int(bohr.modulus);
    r.pass = lhs >= rhs;
    try {
        Rational bound(1);
        for (unsigned i = 0; i < d; ++i) bound *= bohr.radius;
        r.bound = bound;
    } catch (const std::overflow_error&) {
        r.bound.reset();
    }
    r.log_measure = std::log(r.measure.to_double());
    r.log_bound = static_cast<double>(d) * std::log(bohr.radius.to_double());
    return r;
}

SmoothingDiagnostics smoothing_diagnostics(const GroupFunction& f, const BohrSet& outer, const BohrSet& inner) {
    if (outer.frequencies != inner.frequencies || outer.modulus != inner.modulus) {
        throw std::invalid_argument("smoothing_diagnostics: inner Bohr set must share the frequency set");
    }
    if (f.size() != outer.modulus) throw std::invalid_argument("smoothing_diagnostics: function on wrong group");
    const GroupFunction smooth = convolve(f, beta(outer));
    const std::int64_t n = f.size();
    SmoothingDiagnostics out;
    out.sup_norm = f.sup_norm();
    for (std::int64_t x = 0; x < n; ++x) {
        double osc = 0.0, sq = 0.0;
        for (auto b : inner.elements) {
            osc = std::max(osc, std::abs(smooth[x + b] - smooth[x]));
            sq += std::norm(f[x + b] - smooth[x + b]);
        }
        out.oscillation = std::max(out.oscillation, osc);
        out.l2_deviation = std::max(out.l2_deviation, std::sqrt(sq / static_cast<double>(inner.size())));
    }
    if (out.sup_norm > 0.0) out.implied_epsilon = std::max(out.oscillation, out.l2_deviation) / out.sup_norm;
    return out;
}

SandersBudget sanders_parameter_budget(double a_f, double eps, double constant) {
    if (!(a_f >= 1.0)) throw std::invalid_argument("A_f must be at least 1");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
    if (!(constant > 0.0)) throw std::invalid_argument("constant must be positive");
    SandersBudget b;
    b.a_f = a_f;
    b.eps = eps;
    b.constant = constant;
    const double base = constant * a_f / (eps * eps);
    const double log_ratio = 1.0 + std::log(a_f / eps);
    b.dimension_budget = base * (1.0 + std::log(a_f)) * log_ratio;
    b.log_inv_delta_budget = base * log_ratio;
    b.log_inv_delta_inner = b.log_inv_delta_budget + std::log(b.dimension_budget) - std::log(eps);
    return b;
}

}  // namespace halab
