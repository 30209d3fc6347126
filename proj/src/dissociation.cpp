#include "halab/dissociation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "halab/errors.hpp"
#include "halab/group_core.hpp"
#include "halab/moments.hpp"

namespace halab {
namespace {

using i128 = __int128;

std::int64_t mod(i128 a, std::int64_t m) {
    i128 r = a % m;
    return static_cast<std::int64_t>(r < 0 ? r + m : r);
}

// ---------------------------------------------------------------------------
// Classical: meet in the middle over sign vectors.
//
// Digits 0,1,2 encode coefficients 0,+1,-1, so ascending codes (first
// coordinate most significant) enumerate vectors in canonical lex order.

std::int64_t digit_value(std::uint64_t d) { return d == 0 ? 0 : (d == 1 ? 1 : -1); }

std::vector<std::int64_t> decode(std::uint64_t code, std::size_t len) {
    std::vector<std::int64_t> out(len);
    for (std::size_t i = len; i-- > 0;) {
        out[i] = digit_value(code % 3);
        code /= 3;
    }
    return out;
}

std::uint64_t pow3(std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= 3;
    return r;
}

// First nonzero digit of a code is +1 (digit 1). Code 0 has none.
bool leads_positive(std::uint64_t code, std::size_t len) {
    auto v = decode(code, len);
    for (auto c : v) {
        if (c != 0) return c > 0;
    }
    return false;
}

std::int64_t code_sum(std::uint64_t code, std::span<const std::int64_t> part, std::int64_t modulus) {
    i128 s = 0;
    for (std::size_t i = part.size(); i-- > 0;) {
        s += digit_value(code % 3) * static_cast<i128>(part[i]);
        code /= 3;
    }
    return mod(s, modulus);
}

enum class SignedSearch {
    relation,  // nonzero, canonical sign, sum == target
    any,       // any vector (zero allowed), sum == target
};

std::optional<std::vector<std::int64_t>> find_signed_combination(std::span<const std::int64_t> values,
                                                                 std::int64_t modulus, std::int64_t target,
                                                                 SignedSearch mode, double budget) {
    const std::size_t n = values.size();
    const std::size_t h1 = (n + 1) / 2;
    const std::size_t h2 = n - h1;
    const double required = std::pow(3.0, static_cast<double>(h1));
    if (required > budget) throw BudgetExceeded("classical meet-in-the-middle table", required, budget);

    auto first = values.subspan(0, h1);
    auto second = values.subspan(h1);

    struct Slot {
        std::uint64_t any = UINT64_MAX;
        std::uint64_t canonical = UINT64_MAX;  // nonzero, leads positive
    };
    std::unordered_map<std::int64_t, Slot> table;
    table.reserve(static_cast<std::size_t>(pow3(h2)));
    for (std::uint64_t code = 0; code < pow3(h2); ++code) {
        auto& slot = table[code_sum(code, second, modulus)];
        if (slot.any == UINT64_MAX) slot.any = code;
        if (slot.canonical == UINT64_MAX && code != 0 && leads_positive(code, h2)) slot.canonical = code;
    }

    for (std::uint64_t a = 0; a < pow3(h1); ++a) {
        bool use_canonical = false;
        if (mode == SignedSearch::relation) {
            if (a == 0) {
                use_canonical = true;
            } else if (!leads_positive(a, h1)) {
                continue;
            }
        }
        auto it = table.find(mod(static_cast<i128>(target) - code_sum(a, first, modulus), modulus));
        if (it == table.end()) continue;
        std::uint64_t b = use_canonical ? it->second.canonical : it->second.any;
        if (b == UINT64_MAX) continue;
        auto left = decode(a, h1);
        auto right = decode(b, h2);
        left.insert(left.end(), right.begin(), right.end());
        return left;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lambda(k,s) and Lambda^{phi,eta}(k,s): bounded-weight enumeration.

struct PhaseUnits {
    std::int64_t denom = 1;
    std::int64_t reach = 0;  // ||d/denom|| <= eta  <=>  circular(d) <= reach
    std::vector<std::int64_t> units;

    bool close(i128 total) const {
        std::int64_t r = mod(total, denom);
        return std::min(r, denom - r) <= reach;
    }
};

PhaseUnits phase_units(std::span<const std::int64_t> values, const FamilySpec& spec) {
    PhaseUnits out;
    std::vector<Rational> phases;
    for (auto v : values) phases.push_back(phi_star_turns(*spec.phi, spec.modulus, v));
    for (const auto& p : phases) out.denom = checked_lcm(out.denom, p.den());
    for (const auto& p : phases) out.units.push_back((p.frac() * Rational(out.denom)).num());
    out.reach = (spec.eta * Rational(out.denom)).floor();
    return out;
}

double count_weighted_vectors(std::size_t n, int s, int cap) {
    // ways[w] = vectors over the coordinates seen so far with sum |c_i| = w
    std::vector<double> ways(static_cast<std::size_t>(cap) + 1, 0.0);
    ways[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> next(ways.size(), 0.0);
        for (int w = 0; w <= cap; ++w) {
            if (ways[static_cast<std::size_t>(w)] == 0.0) continue;
            for (int v = 0; v <= s && w + v <= cap; ++v) {
                next[static_cast<std::size_t>(w + v)] += ways[static_cast<std::size_t>(w)] * (v == 0 ? 1.0 : 2.0);
            }
        }
        ways = std::move(next);
    }
    double total = 0.0;
    for (double w : ways) total += w;
    return total;
}

std::optional<std::vector<std::int64_t>> find_weighted_relation(std::span<const std::int64_t> values,
                                                                const FamilySpec& spec,
                                                                std::optional<std::size_t> required_index,
                                                                double budget) {
    const std::size_t n = values.size();
    const int s = spec.s;
    const int cap = spec.weight_cap();
    const double required = count_weighted_vectors(n, s, cap);
    if (required > budget) throw BudgetExceeded("bounded-weight relation enumeration", required, budget);

    std::optional<PhaseUnits> phases;
    if (spec.notion == Notion::lambda_ks_phi) phases = phase_units(values, spec);

    std::vector<std::int64_t> coeffs(n, 0);
    std::function<bool(std::size_t, int, i128, i128, bool)> dfs = [&](std::size_t i, int remaining, i128 sum,
                                                                      i128 phase, bool started) -> bool {
        if (i == n) {
            if (remaining != 0 || mod(sum, spec.modulus) != 0) return false;
            return !phases || phases->close(phase);
        }
        if (static_cast<double>(remaining) > static_cast<double>(n - i) * s) return false;
        const bool must_be_nonzero = required_index && *required_index == i;
        // coefficient order 0, 1, -1, 2, -2, ...
        for (int mag = 0; mag <= std::min(s, remaining); ++mag) {
            for (int sign : {1, -1}) {
                if (mag == 0 && sign < 0) continue;
                const int c = sign * mag;
                if (c == 0 && must_be_nonzero) continue;
                if (!started && c < 0) continue;
                coeffs[i] = c;
                const i128 ph = phases ? phase + static_cast<i128>(c) * phases->units[i] : 0;
                if (dfs(i + 1, remaining - mag, sum + static_cast<i128>(c) * values[i], ph, started || c != 0)) {
                    return true;
                }
            }
        }
        coeffs[i] = 0;
        return false;
    };

    for (int weight = 1; weight <= cap; ++weight) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        if (dfs(0, weight, 0, 0, false)) return coeffs;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Signed-sum sets for classical subset construction. x can join a
// dissociated L iff x is not a {-1,0,1}-combination of L.

class SignedSums {
public:
    explicit SignedSums(std::int64_t modulus) : modulus_(modulus), has_(static_cast<std::size_t>(modulus), 0) {
        has_[0] = 1;
    }

    bool contains(std::int64_t x) const { return has_[static_cast<std::size_t>(x)] != 0; }

    void add(std::int64_t lambda) {
        std::vector<char> next = has_;
        for (std::int64_t v = 0; v < modulus_; ++v) {
            if (!has_[static_cast<std::size_t>(v)]) continue;
            next[static_cast<std::size_t>((v + lambda) % modulus_)] = 1;
            next[static_cast<std::size_t>((v - lambda % modulus_ + modulus_) % modulus_)] = 1;
        }
        has_ = std::move(next);
    }

private:
    std::int64_t modulus_;
    std::vector<char> has_;
};

}  // namespace

std::string to_string(Notion notion) {
    switch (notion) {
        case Notion::classical: return "classical";
        case Notion::lambda_ks: return "lambda_ks";
        case Notion::lambda_ks_phi: return "lambda_ks_phi";
    }
    return "unknown";
}

FamilySpec FamilySpec::classical(std::int64_t modulus) {
    FamilySpec f;
    f.modulus = modulus;
    return f;
}

FamilySpec FamilySpec::lambda_ks(std::int64_t modulus, int k, int s) {
    FamilySpec f;
    f.notion = Notion::lambda_ks;
    f.modulus = modulus;
    f.k = k;
    f.s = s;
    return f;
}

FamilySpec FamilySpec::lambda_ks_phi(std::int64_t modulus, int k, int s, Rational eta, CircleMap phi) {
    FamilySpec f;
    f.notion = Notion::lambda_ks_phi;
    f.modulus = modulus;
    f.k = k;
    f.s = s;
    f.eta = eta;
    f.phi = std::move(phi);
    return f;
}

void FamilySpec::validate() const {
    if (modulus < 1) throw std::invalid_argument("family modulus must be positive");
    if (notion == Notion::classical) return;
    if (k < 1 || s < 1) throw std::invalid_argument("family parameters k and s must be positive");
    if (notion == Notion::lambda_ks_phi) {
        if (!(Rational(0) < eta) || Rational(1) < eta) throw std::invalid_argument("family eta must lie in (0, 1]");
        if (!phi) throw std::invalid_argument("lambda_ks_phi family needs a circle map");
    }
}

DissociativityCertificate check_membership(std::span<const std::int64_t> set, const FamilySpec& spec,
                                           double budget) {
    spec.validate();
    DissociativityCertificate cert;
    cert.elements = normalize_set(set, spec.modulus);
    std::optional<std::vector<std::int64_t>> relation;
    if (spec.notion == Notion::classical) {
        relation = find_signed_combination(cert.elements, spec.modulus, 0, SignedSearch::relation, budget);
    } else {
        relation = find_weighted_relation(cert.elements, spec, std::nullopt, budget);
    }
    if (relation) {
        cert.dissociated = false;
        cert.relation = std::move(*relation);
    }
    return cert;
}

bool relation_holds(std::span<const std::int64_t> elements, std::span<const std::int64_t> relation,
                    const FamilySpec& spec) {
    if (elements.size() != relation.size()) return false;
    if (std::all_of(relation.begin(), relation.end(), [](std::int64_t c) { return c == 0; })) return false;
    std::int64_t weight = 0;
    i128 sum = 0;
    for (std::size_t i = 0; i < relation.size(); ++i) {
        const std::int64_t c = relation[i];
        const std::int64_t bound = spec.notion == Notion::classical ? 1 : spec.s;
        if (c > bound || c < -bound) return false;
        weight += c < 0 ? -c : c;
        sum += static_cast<i128>(c) * elements[i];
    }
    if (spec.notion != Notion::classical && weight > spec.weight_cap()) return false;
    if (mod(sum, spec.modulus) != 0) return false;
    if (spec.notion == Notion::lambda_ks_phi) {
        Rational phase(0);
        for (std::size_t i = 0; i < relation.size(); ++i) {
            phase += Rational(relation[i]) * phi_star_turns(*spec.phi, spec.modulus, mod(elements[i], spec.modulus));
        }
        if (spec.eta < *phase_distance_exact(phase).exact) return false;
    }
    return true;
}

std::vector<std::int64_t> max_dissociated_subset(std::span<const std::int64_t> set, std::int64_t modulus,
                                                 SubsetMode mode) {
    const auto elems = normalize_set(set, modulus);
    if (mode == SubsetMode::greedy) {
        SignedSums sums(modulus);
        std::vector<std::int64_t> out;
        for (auto x : elems) {
            if (sums.contains(x)) continue;
            out.push_back(x);
            sums.add(x);
        }
        return out;
    }

    if (elems.size() > 20) throw BudgetExceeded("exact additive dimension set size", static_cast<double>(elems.size()), 20);
    std::vector<std::int64_t> best, current;
    // Include-first DFS visits subsets in lexicographic order, so the first
    // set reaching the maximum size is the lexicographically least one.
    std::function<void(std::size_t, const SignedSums&)> dfs = [&](std::size_t i, const SignedSums& sums) {
        if (current.size() > best.size()) best = current;
        std::size_t addable = 0;
        for (std::size_t j = i; j < elems.size(); ++j) addable += sums.contains(elems[j]) ? 0 : 1;
        if (current.size() + addable <= best.size()) return;
        for (std::size_t j = i; j < elems.size(); ++j) {
            if (sums.contains(elems[j])) continue;
            SignedSums next = sums;
            next.add(elems[j]);
            current.push_back(elems[j]);
            dfs(j + 1, next);
            current.pop_back();
        }
    };
    dfs(0, SignedSums(modulus));
    return best;
}

std::int64_t additive_dimension(std::span<const std::int64_t> set, std::int64_t modulus, SubsetMode mode) {
    return static_cast<std::int64_t>(max_dissociated_subset(set, modulus, mode).size());
}

std::vector<std::int64_t> greedy_family_subset(std::span<const std::int64_t> candidates, const FamilySpec& spec,
                                               double budget) {
    spec.validate();
    if (spec.notion == Notion::classical) {
        return max_dissociated_subset(candidates, spec.modulus, SubsetMode::greedy);
    }
    std::vector<std::int64_t> members;
    for (auto x : normalize_set(candidates, spec.modulus)) {
        std::vector<std::int64_t> trial = members;
        trial.push_back(x);  // ascending scan keeps trial sorted
        if (!find_weighted_relation(trial, spec, trial.size() - 1, budget)) members = std::move(trial);
    }
    return members;
}

SpanningWitness spanning_witness(std::int64_t x, std::span<const std::int64_t> basis, const FamilySpec& spec,
                                 double budget) {
    spec.validate();
    SpanningWitness w;
    w.x = mod(x, spec.modulus);
    w.basis = normalize_set(basis, spec.modulus);
    if (std::binary_search(w.basis.begin(), w.basis.end(), w.x)) {
        throw std::invalid_argument("spanning_witness: x already belongs to the basis");
    }
    if (spec.notion == Notion::classical) {
        auto eps = find_signed_combination(w.basis, spec.modulus, w.x, SignedSearch::any, budget);
        if (!eps) throw SearchFailed("no classical spanning witness: basis is not maximal for x");
        w.x_coefficient = 1;
        w.coefficients = std::move(*eps);
        return w;
    }
    std::vector<std::int64_t> values{w.x};
    values.insert(values.end(), w.basis.begin(), w.basis.end());
    auto rel = find_weighted_relation(values, spec, 0, budget);
    if (!rel) throw SearchFailed("no spanning witness within the family constraints: basis is not maximal for x");
    w.x_coefficient = (*rel)[0];
    for (std::size_t j = 1; j < rel->size(); ++j) w.coefficients.push_back(-(*rel)[j]);
    return w;
}

bool witness_holds(const SpanningWitness& witness, const FamilySpec& spec) {
    if (witness.x_coefficient <= 0 || witness.coefficients.size() != witness.basis.size()) return false;
    std::vector<std::int64_t> elems{witness.x};
    elems.insert(elems.end(), witness.basis.begin(), witness.basis.end());
    std::vector<std::int64_t> rel{witness.x_coefficient};
    for (auto c : witness.coefficients) rel.push_back(-c);
    if (spec.notion == Notion::classical) {
        if (witness.x_coefficient != 1) return false;
        for (auto c : witness.coefficients) {
            if (c < -1 || c > 1) return false;
        }
        i128 s = 0;
        for (std::size_t j = 0; j < witness.basis.size(); ++j) s += static_cast<i128>(witness.coefficients[j]) * witness.basis[j];
        return mod(s - witness.x, spec.modulus) == 0;
    }
    return relation_holds(elems, rel, spec);
}

DimBoundReport verify_dim_bound(std::span<const std::int64_t> set, std::int64_t modulus, double constant) {
    DimBoundReport r;
    const auto elems = normalize_set(set, modulus);
    const CyclicGroup g(modulus);
    r.size = static_cast<std::int64_t>(elems.size());
    r.constant = constant;
    r.wiener_norm = wiener_norm_group(GroupFunction::indicator(g, elems));
    const double k2 = r.wiener_norm * r.wiener_norm;
    r.hypothesis_met = r.size > 0 && k2 <= static_cast<double>(r.size) * (1.0 + 1e-12);
    if (!r.hypothesis_met) return r;
    r.dimension = additive_dimension(elems, modulus, SubsetMode::exact);
    r.scale = k2 * (1.0 + std::log(std::max(1.0, static_cast<double>(r.size) / k2)));
    r.ratio = static_cast<double>(r.dimension) / r.scale;
    r.pass = r.ratio <= constant;
    return r;
}

}  // namespace halab
