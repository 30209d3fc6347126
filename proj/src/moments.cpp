#include "halab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "halab/errors.hpp"

namespace halab {
namespace {

using i128 = __int128;

void require_k(int k) {
    if (k < 1) throw std::invalid_argument("moment order k must be positive");
}

void check_budget(std::size_t support, int k, double budget) {
    const double required = std::pow(static_cast<double>(support), k);
    if (required > budget) throw BudgetExceeded("k-tuple budget", required, budget);
}

// Calls visit(sum mod N, index tuple) for every k-tuple of positions in
// [0, m), with sums of `values` accumulated incrementally.
template <typename Visit>
void for_each_tuple(std::span<const std::int64_t> values, std::int64_t modulus, int k, Visit&& visit) {
    const std::size_t m = values.size();
    if (m == 0) return;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    std::vector<std::int64_t> partial(static_cast<std::size_t>(k) + 1, 0);
    for (int d = 0; d < k; ++d) {
        partial[static_cast<std::size_t>(d) + 1] = (partial[static_cast<std::size_t>(d)] + values[0]) % modulus;
    }
    while (true) {
        visit(partial[static_cast<std::size_t>(k)], std::span<const std::size_t>(idx));
        int d = k - 1;
        while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == m) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
        for (int e = d; e < k; ++e) {
            partial[static_cast<std::size_t>(e) + 1] =
                (partial[static_cast<std::size_t>(e)] + values[idx[static_cast<std::size_t>(e)]]) % modulus;
        }
    }
}

// Ordered pairs (a, b) from a sorted phase list with circular distance
// (a - b mod period) within `reach` on either side.
template <typename T, typename Period>
std::int64_t count_close_pairs(const std::vector<T>& sorted, Period period, T reach, bool all_close) {
    const auto m = static_cast<std::int64_t>(sorted.size());
    if (all_close) return m * m;
    auto count_range = [&](T lo, T hi) -> std::int64_t {  // inclusive range inside [0, period)
        auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
        auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
        return last > first ? static_cast<std::int64_t>(last - first) : 0;
    };
    std::int64_t total = 0;
    for (const T& a : sorted) {
        T lo = a - reach;
        T hi = a + reach;
        if (lo < T(0)) {
            total += count_range(T(0), hi) + count_range(lo + period, period - (std::is_integral_v<T> ? T(1) : T(0)));
        } else if (hi >= static_cast<T>(period)) {
            total += count_range(lo, static_cast<T>(period)) + count_range(T(0), hi - period);
        } else {
            total += count_range(lo, hi);
        }
    }
    return total;
}

}  // namespace

std::vector<std::int64_t> normalize_set(std::span<const std::int64_t> set, std::int64_t modulus) {
    if (modulus < 1) throw std::invalid_argument("modulus must be positive");
    std::vector<std::int64_t> out;
    out.reserve(set.size());
    for (auto x : set) {
        std::int64_t r = x % modulus;
        out.push_back(r < 0 ? r + modulus : r);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::int64_t t_k_count(std::span<const std::int64_t> set, std::int64_t modulus, int k, double budget) {
    require_k(k);
    const auto elems = normalize_set(set, modulus);
    check_budget(elems.size(), k, budget);
    i128 total = 0;
    const double tuples = std::pow(static_cast<double>(elems.size()), k);
    if (static_cast<double>(modulus) <= 4.0 * tuples + 1024.0) {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(modulus), 0);
        for_each_tuple(elems, modulus, k, [&](std::int64_t s, auto) { ++counts[static_cast<std::size_t>(s)]; });
        for (auto c : counts) total += static_cast<i128>(c) * c;
    } else {
        std::vector<std::int64_t> sums;
        sums.reserve(static_cast<std::size_t>(tuples));
        for_each_tuple(elems, modulus, k, [&](std::int64_t s, auto) { sums.push_back(s); });
        std::sort(sums.begin(), sums.end());
        for (std::size_t i = 0; i < sums.size();) {
            std::size_t j = i;
            while (j < sums.size() && sums[j] == sums[i]) ++j;
            total += static_cast<i128>(j - i) * static_cast<i128>(j - i);
            i = j;
        }
    }
    if (total > INT64_MAX) throw std::overflow_error("T_k count exceeds 64 bits");
    return static_cast<std::int64_t>(total);
}

MomentResult t_k_brute(const GroupFunction& f, int k, double budget) {
    require_k(k);
    const auto support = f.support();
    check_budget(support.size(), k, budget);
    const std::int64_t n = f.size();
    MomentResult out;
    out.k = k;
    out.method = MomentMethod::brute;

    if (f.is_indicator()) {
        out.exact = t_k_count(support, n, k, budget);
        out.value = static_cast<double>(*out.exact);
        return out;
    }

    std::vector<Complex> weights(static_cast<std::size_t>(n));
    std::vector<double> magnitudes(static_cast<std::size_t>(n), 0.0);
    std::vector<Complex> vals;
    for (auto x : support) vals.push_back(f[x]);
    for_each_tuple(support, n, k, [&](std::int64_t s, std::span<const std::size_t> idx) {
        Complex w(1.0);
        for (auto i : idx) w *= vals[i];
        weights[static_cast<std::size_t>(s)] += w;
        magnitudes[static_cast<std::size_t>(s)] += std::abs(w);
    });
    double value = 0.0, scale = 0.0;
    for (std::int64_t s = 0; s < n; ++s) {
        value += std::norm(weights[static_cast<std::size_t>(s)]);
        scale += magnitudes[static_cast<std::size_t>(s)] * magnitudes[static_cast<std::size_t>(s)];
    }
    out.value = value;
    out.cancellation_warning = std::abs(value) < 1e-6 * scale;
    return out;
}

MomentResult t_k_spectral(const GroupFunction& f, int k) {
    require_k(k);
    const auto spectrum = dft(f);
    double s = 0.0;
    for (const auto& c : spectrum.coefficients()) s += std::pow(std::norm(c), k);
    MomentResult out;
    out.k = k;
    out.method = MomentMethod::spectral;
    out.value = std::pow(static_cast<double>(f.size()), 2 * k - 1) * s;
    return out;
}

std::int64_t t_k_phi(std::span<const std::int64_t> set, std::int64_t modulus, const PhaseData& phases,
                     const Rational& eta, int k, double budget) {
    require_k(k);
    const auto* exact = std::get_if<std::vector<Rational>>(&phases);
    if (exact == nullptr) {
        throw NonExactPhaseData("t_k_phi needs exact rational phases; use t_k_phi_approx (tolerance 1e-9, not certified)");
    }
    const auto elems = normalize_set(set, modulus);
    if (exact->size() != elems.size()) throw std::invalid_argument("t_k_phi: one phase per set element required");
    if (eta < Rational(0)) throw std::invalid_argument("t_k_phi: eta must be nonnegative");
    check_budget(elems.size(), k, budget);

    std::int64_t denom = 1;
    for (const auto& p : *exact) denom = checked_lcm(denom, p.den());
    std::vector<std::int64_t> units;
    for (const auto& p : *exact) units.push_back((p.frac() * Rational(denom)).num());

    // ||d/D|| <= eta  <=>  circular distance in units <= floor(eta * D)
    const Rational reach_r = eta * Rational(denom);
    const std::int64_t reach = reach_r.floor();
    const bool all_close = 2 * static_cast<i128>(reach) + 1 >= denom;

    // key = sum * D + phase; group by sum
    std::vector<std::pair<std::int64_t, std::int64_t>> entries;
    entries.reserve(static_cast<std::size_t>(std::pow(static_cast<double>(elems.size()), k)));
    for_each_tuple(elems, modulus, k, [&](std::int64_t s, std::span<const std::size_t> idx) {
        i128 ph = 0;
        for (auto i : idx) ph += units[i];
        entries.emplace_back(s, static_cast<std::int64_t>(ph % denom));
    });
    std::sort(entries.begin(), entries.end());

    std::int64_t total = 0;
    std::vector<std::int64_t> group;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        group.clear();
        while (j < entries.size() && entries[j].first == entries[i].first) group.push_back(entries[j++].second);
        total += count_close_pairs<std::int64_t>(group, denom, reach, all_close);
        i = j;
    }
    return total;
}

std::int64_t t_k_phi(std::span<const std::int64_t> set, std::int64_t modulus, const CircleMap& phi,
                     const Rational& eta, int k, double budget) {
    const auto elems = normalize_set(set, modulus);
    std::vector<Rational> phases;
    for (auto x : elems) phases.push_back(phi_star_turns(phi, modulus, x));
    return t_k_phi(elems, modulus, PhaseData(std::move(phases)), eta, k, budget);
}

std::int64_t t_k_phi_approx(std::span<const std::int64_t> set, std::int64_t modulus, std::span<const double> phases,
                            double eta, int k, double tolerance, double budget) {
    require_k(k);
    const auto elems = normalize_set(set, modulus);
    if (phases.size() != elems.size()) throw std::invalid_argument("t_k_phi_approx: one phase per set element required");
    check_budget(elems.size(), k, budget);
    std::vector<double> units;
    for (double p : phases) units.push_back(p - std::floor(p));
    const double reach = eta + tolerance;

    std::vector<std::pair<std::int64_t, double>> entries;
    for_each_tuple(elems, modulus, k, [&](std::int64_t s, std::span<const std::size_t> idx) {
        double ph = 0.0;
        for (auto i : idx) ph += units[i];
        entries.emplace_back(s, ph - std::floor(ph));
    });
    std::sort(entries.begin(), entries.end());
    std::int64_t total = 0;
    std::vector<double> group;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        group.clear();
        while (j < entries.size() && entries[j].first == entries[i].first) group.push_back(entries[j++].second);
        total += count_close_pairs<double>(group, 1.0, reach, reach >= 0.5);
        i = j;
    }
    return total;
}

double lambda_ks_moment_bound(int k, int s, std::int64_t size) {
    const double l = static_cast<double>(size);
    const double second = std::pow(k / l, k) * std::pow(l, static_cast<double>(k) / s);
    return std::pow(2.0, 3 * k) * std::pow(k, k) * std::pow(l, k) * std::max(1.0, second);
}

double lambda_ks_phi_moment_bound(int k, int s, std::int64_t size) {
    const double l = static_cast<double>(size);
    const double second = std::pow(k / l, k) * std::pow(l, 4.0 * k / s);
    return std::pow(2.0, 4 * k + 2) * std::pow(k, k + 1) * std::pow(l, k) * std::max(1.0, second);
}

}  // namespace halab
