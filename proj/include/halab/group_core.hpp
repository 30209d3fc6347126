#pragma once

/// Cyclic group Z_N, functions on it and the normalized Fourier transform.
///
/// Normalization is fixed throughout the library: Haar measure has total mass
/// one, so
///
///     fhat(g)   = (1/N) sum_x f(x) e^{-2 pi i g x / N}
///     (f*g)(x)  = (1/N) sum_y f(y) g(x - y)
///     ||f||_A   = sum_g |fhat(g)|
///
/// and Parseval reads (1/N) sum_x f(x) conj(g(x)) = sum_g fhat(g) conj(ghat(g)).

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "halab/rational.hpp"

namespace halab {

using Complex = std::complex<double>;

class CyclicGroup {
public:
    explicit CyclicGroup(std::int64_t modulus);

    std::int64_t order() const noexcept { return modulus_; }
    bool is_prime() const noexcept { return prime_; }
    /// Canonical representative in [0, N).
    std::int64_t reduce(std::int64_t x) const noexcept {
        std::int64_t r = x % modulus_;
        return r < 0 ? r + modulus_ : r;
    }
    /// Representative in (-N/2, N/2].
    std::int64_t signed_rep(std::int64_t x) const noexcept {
        std::int64_t r = reduce(x);
        return 2 * r > modulus_ ? r - modulus_ : r;
    }

    friend bool operator==(const CyclicGroup& a, const CyclicGroup& b) noexcept {
        return a.modulus_ == b.modulus_;
    }

private:
    std::int64_t modulus_;
    bool prime_;
};

bool is_prime(std::int64_t n) noexcept;

class GroupFunction {
public:
    explicit GroupFunction(CyclicGroup group);
    GroupFunction(CyclicGroup group, std::vector<Complex> values);

    static GroupFunction constant(CyclicGroup group, Complex value);
    /// chi_S; residues are reduced mod N, duplicates collapse.
    static GroupFunction indicator(CyclicGroup group, std::span<const std::int64_t> set);

    const CyclicGroup& group() const noexcept { return group_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }
    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }

    Complex operator[](std::int64_t x) const { return values_[static_cast<std::size_t>(group_.reduce(x))]; }
    Complex& operator[](std::int64_t x) { return values_[static_cast<std::size_t>(group_.reduce(x))]; }

    /// x -> f(x - shift)
    GroupFunction translated(std::int64_t shift) const;
    /// Pointwise product.
    GroupFunction operator*(const GroupFunction& other) const;
    GroupFunction operator+(const GroupFunction& other) const;
    GroupFunction operator-(const GroupFunction& other) const;

    double sup_norm() const noexcept;
    /// Residues where the value is not exactly zero, ascending.
    std::vector<std::int64_t> support() const;
    /// True when every value is exactly 0 or 1.
    bool is_indicator() const noexcept;

private:
    CyclicGroup group_;
    std::vector<Complex> values_;
};

class Spectrum {
public:
    explicit Spectrum(CyclicGroup group);
    Spectrum(CyclicGroup group, std::vector<Complex> coefficients);

    const CyclicGroup& group() const noexcept { return group_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(coefficients_.size()); }
    std::span<const Complex> coefficients() const noexcept { return coefficients_; }
    std::span<Complex> coefficients() noexcept { return coefficients_; }

    Complex operator[](std::int64_t gamma) const {
        return coefficients_[static_cast<std::size_t>(group_.reduce(gamma))];
    }

    /// sum_g |fhat(g)|
    double l1_norm() const noexcept;
    /// sum_g |fhat(g)|^p
    double power_sum(double p) const noexcept;

private:
    CyclicGroup group_;
    std::vector<Complex> coefficients_;
};

enum class TransformMethod {
    automatic,  ///< direct for small N, fast path otherwise
    direct,     ///< O(N^2) reference evaluation
    fast,       ///< O(N log N), arbitrary N including primes
};

Spectrum dft(const GroupFunction& f, TransformMethod method = TransformMethod::automatic);
GroupFunction idft(const Spectrum& spectrum, TransformMethod method = TransformMethod::automatic);

/// (1/N) sum_y f(y) g(x - y), evaluated directly. Throws std::invalid_argument
/// on mismatched moduli.
GroupFunction convolve(const GroupFunction& f, const GroupFunction& g);

/// (1/N) sum_x f(x) conj(g(x))
Complex inner_product(const GroupFunction& f, const GroupFunction& g);
/// sum_g fhat(g) conj(ghat(g))
Complex inner_product(const Spectrum& f, const Spectrum& g);

/// Circle distance to the nearest full turn, as a fraction of a turn, in [0, 1/2].
/// `exact` is present only when the input was rational.
struct PhaseDistance {
    double value = 0.0;
    std::optional<Rational> exact;
};

enum class AngleUnit { radians, fraction };

/// Throws std::invalid_argument for non-finite input.
PhaseDistance phase_distance(double u, AngleUnit unit = AngleUnit::radians);
/// min(r, den - r) / den with r = numerator mod den. Requires den > 0.
PhaseDistance phase_distance_exact(std::int64_t numerator, std::int64_t denominator);
/// Exact distance for a phase given in turns.
PhaseDistance phase_distance_exact(const Rational& turns);

}  // namespace halab
