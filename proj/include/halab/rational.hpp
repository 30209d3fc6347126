#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace halab {

/// Exact rational with 64-bit numerator and denominator.
///
/// Always normalized (gcd 1, positive denominator). Every operation checks
/// for overflow through 128-bit intermediates and throws std::overflow_error
/// instead of wrapping, so a comparison result is either exact or absent.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1);

    /// Parses "p/q" or "p". Throws std::invalid_argument on malformed input
    /// or a zero denominator.
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    std::int64_t floor() const noexcept;
    /// Representative of this value modulo 1, in [0, 1).
    Rational frac() const;
    /// Representative modulo `period`, in [0, period).
    Rational mod(std::int64_t period) const;
    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }
    bool is_integer() const noexcept { return den_ == 1; }
    bool is_zero() const noexcept { return num_ == 0; }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

}  // namespace halab
