#pragma once

/// Dissociated sets and their generalizations in Z_N.
///
/// A relation on L = {l_1 < .. < l_m} is a nonzero integer vector c with
/// sum c_i l_i = 0 (mod N). The three notions differ in the admissible
/// vectors:
///
///   classical       c_i in {-1, 0, 1}
///   lambda_ks       |c_i| <= s, sum |c_i| <= 2k
///   lambda_ks_phi   as lambda_ks, and additionally ||sum c_i phi*(l_i)|| <= eta
///
/// L is a member (dissociated) when no admissible relation exists.
/// Relations are reported in a canonical form: first nonzero entry positive,
/// least total weight first (lambda notions), then lexicographically least
/// under the coefficient order 0 < 1 < -1 < 2 < -2 < ...

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halab/rational.hpp"
#include "halab/wiener_norms.hpp"

namespace halab {

inline constexpr double kDefaultSearchBudget = 1e8;

enum class Notion { classical, lambda_ks, lambda_ks_phi };

std::string to_string(Notion notion);

struct FamilySpec {
    Notion notion = Notion::classical;
    std::int64_t modulus = 1;
    int k = 1;
    int s = 1;
    Rational eta{1};
    std::optional<CircleMap> phi;

    static FamilySpec classical(std::int64_t modulus);
    static FamilySpec lambda_ks(std::int64_t modulus, int k, int s);
    static FamilySpec lambda_ks_phi(std::int64_t modulus, int k, int s, Rational eta, CircleMap phi);

    /// Throws std::invalid_argument on inconsistent parameters
    /// (eta outside (0, 1], missing map, nonpositive k or s).
    void validate() const;
    /// Bound on sum |c_i|.
    int weight_cap() const noexcept { return 2 * k; }
};

struct DissociativityCertificate {
    bool dissociated = true;
    /// Normalized set the verdict refers to (ascending residues).
    std::vector<std::int64_t> elements;
    /// Coefficient per element; present iff dependent.
    std::vector<std::int64_t> relation;
};

/// Throws BudgetExceeded when the search space is over budget
/// (classical: 3^ceil(m/2) table entries; lambda notions: number of
/// admissible coefficient vectors).
DissociativityCertificate check_membership(std::span<const std::int64_t> set, const FamilySpec& spec,
                                           double budget = kDefaultSearchBudget);

/// Re-checks an asserted relation by direct arithmetic: admissible
/// coefficients, not all zero, linear sum zero mod N, phase condition.
bool relation_holds(std::span<const std::int64_t> elements, std::span<const std::int64_t> relation,
                    const FamilySpec& spec);

enum class SubsetMode { greedy, exact };

/// Greedy: inclusion-maximal classical dissociated subset, scanning S in
/// ascending order. Exact: maximum cardinality, lexicographically least
/// among maximum ones; requires |S| <= 20.
std::vector<std::int64_t> max_dissociated_subset(std::span<const std::int64_t> set, std::int64_t modulus,
                                                 SubsetMode mode);
std::int64_t additive_dimension(std::span<const std::int64_t> set, std::int64_t modulus, SubsetMode mode);

/// Inclusion-maximal member of the family inside `candidates`, built by an
/// ascending scan that keeps x whenever no admissible relation involves it.
std::vector<std::int64_t> greedy_family_subset(std::span<const std::int64_t> candidates, const FamilySpec& spec,
                                               double budget = kDefaultSearchBudget);

/// Dependence created by adjoining x to L:
///   x_coefficient * x = sum_j coefficients[j] * L[j]   (mod N)
/// with x_coefficient > 0, and for lambda_ks_phi
///   || x_coefficient phi*(x) - sum_j coefficients[j] phi*(L[j]) || <= eta.
/// Classical witnesses have x_coefficient = 1 and coefficients in {-1,0,1}.
struct SpanningWitness {
    std::int64_t x = 0;
    std::int64_t x_coefficient = 1;
    std::vector<std::int64_t> basis;
    std::vector<std::int64_t> coefficients;
};

/// Throws std::invalid_argument when x is in L, SearchFailed when no witness
/// exists (L was not maximal, a caller bug).
SpanningWitness spanning_witness(std::int64_t x, std::span<const std::int64_t> basis, const FamilySpec& spec,
                                 double budget = kDefaultSearchBudget);
bool witness_holds(const SpanningWitness& witness, const FamilySpec& spec);

struct DimBoundReport {
    bool hypothesis_met = false;  ///< K^2 <= |S|
    std::int64_t size = 0;
    double wiener_norm = 0.0;     ///< K
    std::int64_t dimension = 0;   ///< exact
    double scale = 0.0;           ///< K^2 (1 + ln(|S|/K^2))
    double ratio = 0.0;           ///< dimension / scale
    double constant = 0.0;        ///< C
    bool pass = false;            ///< hypothesis_met && ratio <= C
};

/// Checks dim(S) <= C K^2 (1 + ln(|S|/K^2)) with the exact dimension.
DimBoundReport verify_dim_bound(std::span<const std::int64_t> set, std::int64_t modulus, double constant);

}  // namespace halab
