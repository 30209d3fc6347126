#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "halab/group_core.hpp"
#include "halab/rational.hpp"
#include "halab/wiener_norms.hpp"

namespace halab {

/// Default cap on the number of k-tuples materialized by the counting kernels.
inline constexpr double kDefaultTupleBudget = 1e9;

enum class MomentMethod { brute, spectral };

struct MomentResult {
    int k = 1;
    double value = 0.0;
    /// Present for brute-force counts of indicator functions.
    std::optional<std::int64_t> exact;
    MomentMethod method = MomentMethod::brute;
    /// Brute force on a general complex f whose result is tiny relative to
    /// the total absolute weight; relative comparisons are then meaningless.
    bool cancellation_warning = false;
};

/// T_k(f) = sum over x_1+..+x_k = x'_1+..+x'_k of f(x_1)..f(x_k) conj(f(x'_1))..conj(f(x'_k)).
///
/// Enumerates the |supp f|^k half-tuples into a table of k-fold sums and pairs
/// equal sums. Throws BudgetExceeded when |supp f|^k > budget.
MomentResult t_k_brute(const GroupFunction& f, int k, double budget = kDefaultTupleBudget);

/// T_k(chi_S) as an exact count, without materializing a function on Z_N.
/// Suitable for sets in very large groups.
std::int64_t t_k_count(std::span<const std::int64_t> set, std::int64_t modulus, int k,
                       double budget = kDefaultTupleBudget);

/// N^{2k-1} sum_g |fhat(g)|^{2k}
MomentResult t_k_spectral(const GroupFunction& f, int k);

/// Phases of the elements of S, in turns, either exact or floating point.
using PhaseData = std::variant<std::vector<Rational>, std::vector<double>>;

/// Number of 2k-tuples from S with x_1+..+x_k = x_{k+1}+..+x_{2k} (mod N) and
/// ||phase(x_1)+..+phase(x_k) - phase(x_{k+1}) - .. - phase(x_{2k})|| <= eta.
///
/// `set` is taken as given (reduced, deduplicated, ascending); `phases[i]`
/// belongs to the i-th element of that normalized set. The phase test is
/// exact integer arithmetic; boundary tuples count as inside. Throws
/// NonExactPhaseData when handed floating-point phases (use
/// t_k_phi_approx for those).
std::int64_t t_k_phi(std::span<const std::int64_t> set, std::int64_t modulus, const PhaseData& phases,
                     const Rational& eta, int k, double budget = kDefaultTupleBudget);

/// Exact count with phases phi*(x) taken from a rational circle map.
std::int64_t t_k_phi(std::span<const std::int64_t> set, std::int64_t modulus, const CircleMap& phi,
                     const Rational& eta, int k, double budget = kDefaultTupleBudget);

/// Floating-point variant: the phase test is ||.|| <= eta + tolerance.
/// Not certified near the boundary.
std::int64_t t_k_phi_approx(std::span<const std::int64_t> set, std::int64_t modulus, std::span<const double> phases,
                            double eta, int k, double tolerance = 1e-9, double budget = kDefaultTupleBudget);

/// Sorted, deduplicated residues in [0, N).
std::vector<std::int64_t> normalize_set(std::span<const std::int64_t> set, std::int64_t modulus);

/// Right-hand side 2^{3k} k^k |L|^k max{1, (k/|L|)^k |L|^{k/s}} of the T_k
/// bound for members of the family Lambda(k, s).
double lambda_ks_moment_bound(int k, int s, std::int64_t size);
/// Right-hand side 2^{4k+2} k^{k+1} |L|^k max{1, (k/|L|)^k |L|^{4k/s}} of the
/// T_k^{phi,eta/2} bound for members of Lambda^{phi,eta}(2k, s).
double lambda_ks_phi_moment_bound(int k, int s, std::int64_t size);

}  // namespace halab
