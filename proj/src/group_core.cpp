#include "halab/group_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace halab {
namespace {

constexpr std::int64_t kDirectThreshold = 64;

void require_same_group(const CyclicGroup& a, const CyclicGroup& b, const char* op) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(op) + ": mismatched moduli " + std::to_string(a.order()) +
                                    " and " + std::to_string(b.order()));
    }
}

// e^{sign * 2 pi i j / N} for j in [0, N)
std::vector<Complex> twiddles(std::int64_t n, int sign) {
    std::vector<Complex> w(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
        w[static_cast<std::size_t>(j)] =
            std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    }
    return w;
}

std::vector<Complex> transform_direct(std::span<const Complex> in, int sign) {
    const auto n = static_cast<std::int64_t>(in.size());
    const auto w = twiddles(n, sign);
    std::vector<Complex> out(in.size());
    for (std::int64_t g = 0; g < n; ++g) {
        Complex acc{};
        std::int64_t idx = 0;
        for (std::int64_t x = 0; x < n; ++x) {
            acc += in[static_cast<std::size_t>(x)] * w[static_cast<std::size_t>(idx)];
            idx += g;
            if (idx >= n) idx -= n;
        }
        out[static_cast<std::size_t>(g)] = acc;
    }
    return out;
}

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<Complex> transform_fast(std::span<const Complex> in, int sign) {
    const int n = static_cast<int>(in.size());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * in.size()));
    if (buf == nullptr) throw std::bad_alloc();
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (int i = 0; i < n; ++i) {
        buf[i][0] = in[static_cast<std::size_t>(i)].real();
        buf[i][1] = in[static_cast<std::size_t>(i)].imag();
    }
    fftw_execute(plan);
    std::vector<Complex> out(in.size());
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Complex(buf[i][0], buf[i][1]);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return out;
}

std::vector<Complex> transform(std::span<const Complex> in, int sign, TransformMethod method) {
    if (method == TransformMethod::automatic) {
        method = static_cast<std::int64_t>(in.size()) <= kDirectThreshold ? TransformMethod::direct
                                                                          : TransformMethod::fast;
    }
    return method == TransformMethod::direct ? transform_direct(in, sign) : transform_fast(in, sign);
}

}  // namespace

bool is_prime(std::int64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

CyclicGroup::CyclicGroup(std::int64_t modulus) : modulus_(modulus), prime_(halab::is_prime(modulus)) {
    if (modulus < 1) throw std::invalid_argument("cyclic group modulus must be >= 1");
}

GroupFunction::GroupFunction(CyclicGroup group)
    : group_(group), values_(static_cast<std::size_t>(group.order())) {}

GroupFunction::GroupFunction(CyclicGroup group, std::vector<Complex> values)
    : group_(group), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != group_.order()) {
        throw std::invalid_argument("group function length " + std::to_string(values_.size()) +
                                    " does not match modulus " + std::to_string(group_.order()));
    }
}

GroupFunction GroupFunction::constant(CyclicGroup group, Complex value) {
    return GroupFunction(group, std::vector<Complex>(static_cast<std::size_t>(group.order()), value));
}

GroupFunction GroupFunction::indicator(CyclicGroup group, std::span<const std::int64_t> set) {
    GroupFunction f(group);
    for (auto x : set) f[x] = 1.0;
    return f;
}

GroupFunction GroupFunction::translated(std::int64_t shift) const {
    GroupFunction out(group_);
    for (std::int64_t x = 0; x < size(); ++x) out[x + shift] = values_[static_cast<std::size_t>(x)];
    return out;
}

GroupFunction GroupFunction::operator*(const GroupFunction& other) const {
    require_same_group(group_, other.group_, "pointwise product");
    GroupFunction out(group_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] * other.values_[i];
    return out;
}

GroupFunction GroupFunction::operator+(const GroupFunction& other) const {
    require_same_group(group_, other.group_, "sum");
    GroupFunction out(group_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] + other.values_[i];
    return out;
}

GroupFunction GroupFunction::operator-(const GroupFunction& other) const {
    require_same_group(group_, other.group_, "difference");
    GroupFunction out(group_);
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] - other.values_[i];
    return out;
}

double GroupFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<std::int64_t> GroupFunction::support() const {
    std::vector<std::int64_t> s;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] != Complex{}) s.push_back(static_cast<std::int64_t>(i));
    }
    return s;
}

bool GroupFunction::is_indicator() const noexcept {
    for (const auto& v : values_) {
        if (v != Complex(0.0) && v != Complex(1.0)) return false;
    }
    return true;
}

Spectrum::Spectrum(CyclicGroup group) : group_(group), coefficients_(static_cast<std::size_t>(group.order())) {}

Spectrum::Spectrum(CyclicGroup group, std::vector<Complex> coefficients)
    : group_(group), coefficients_(std::move(coefficients)) {
    if (static_cast<std::int64_t>(coefficients_.size()) != group_.order()) {
        throw std::invalid_argument("spectrum length does not match modulus");
    }
}

double Spectrum::l1_norm() const noexcept {
    double s = 0.0;
    for (const auto& c : coefficients_) s += std::abs(c);
    return s;
}

double Spectrum::power_sum(double p) const noexcept {
    double s = 0.0;
    for (const auto& c : coefficients_) s += std::pow(std::abs(c), p);
    return s;
}

Spectrum dft(const GroupFunction& f, TransformMethod method) {
    auto out = transform(f.values(), -1, method);
    const double inv = 1.0 / static_cast<double>(f.size());
    for (auto& c : out) c *= inv;
    return Spectrum(f.group(), std::move(out));
}

GroupFunction idft(const Spectrum& spectrum, TransformMethod method) {
    return GroupFunction(spectrum.group(), transform(spectrum.coefficients(), +1, method));
}

GroupFunction convolve(const GroupFunction& f, const GroupFunction& g) {
    require_same_group(f.group(), g.group(), "convolve");
    const std::int64_t n = f.size();
    GroupFunction out(f.group());
    auto gv = g.values();
    auto ov = out.values();
    for (std::int64_t y = 0; y < n; ++y) {
        const Complex fy = f.values()[static_cast<std::size_t>(y)];
        if (fy == Complex{}) continue;
        // out(x) += f(y) g(x - y); walk x from y so that x - y runs 0..n-1
        for (std::int64_t j = 0; j < n; ++j) {
            std::int64_t x = y + j;
            if (x >= n) x -= n;
            ov[static_cast<std::size_t>(x)] += fy * gv[static_cast<std::size_t>(j)];
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : ov) v *= inv;
    return out;
}

Complex inner_product(const GroupFunction& f, const GroupFunction& g) {
    require_same_group(f.group(), g.group(), "inner product");
    Complex s{};
    for (std::int64_t x = 0; x < f.size(); ++x) {
        s += f.values()[static_cast<std::size_t>(x)] * std::conj(g.values()[static_cast<std::size_t>(x)]);
    }
    return s / static_cast<double>(f.size());
}

Complex inner_product(const Spectrum& f, const Spectrum& g) {
    require_same_group(f.group(), g.group(), "inner product");
    Complex s{};
    for (std::int64_t x = 0; x < f.size(); ++x) {
        s += f.coefficients()[static_cast<std::size_t>(x)] *
             std::conj(g.coefficients()[static_cast<std::size_t>(x)]);
    }
    return s;
}

PhaseDistance phase_distance(double u, AngleUnit unit) {
    if (!std::isfinite(u)) throw std::invalid_argument("phase_distance: non-finite input");
    double t = unit == AngleUnit::radians ? u / (2.0 * std::numbers::pi) : u;
    double d = std::abs(t - std::nearbyint(t));
    return PhaseDistance{std::min(d, 0.5), std::nullopt};
}

PhaseDistance phase_distance_exact(std::int64_t numerator, std::int64_t denominator) {
    if (denominator <= 0) throw std::invalid_argument("phase_distance_exact: denominator must be positive");
    std::int64_t r = numerator % denominator;
    if (r < 0) r += denominator;
    Rational d(std::min(r, denominator - r), denominator);
    return PhaseDistance{d.to_double(), d};
}

PhaseDistance phase_distance_exact(const Rational& turns) {
    return phase_distance_exact(turns.num(), turns.den());
}

}  // namespace halab
