#include <algorithm>
#include <cmath>
#include <numeric>

#include "halab/constructions.hpp"
#include "halab/dissociation.hpp"
#include "halab/errors.hpp"
#include "halab/labcli.hpp"
#include "halab/moments.hpp"

namespace halab {
namespace {

constexpr std::int64_t kEtaDenominator = 1'000'000'000'000;

// Q^{-1/2} / divisor as a rational: exact when Q is a perfect square,
// otherwise rounded down to a multiple of 1e-12.
std::pair<Rational, bool> inverse_sqrt(double q, std::int64_t divisor) {
    const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(q)));
    if (r > 0 && static_cast<double>(r) * static_cast<double>(r) == q) return {Rational(1, divisor * r), true};
    const double v = 1.0 / (std::sqrt(q) * static_cast<double>(divisor));
    return {Rational(static_cast<std::int64_t>(std::floor(v * static_cast<double>(kEtaDenominator))), kEtaDenominator),
            false};
}

std::int64_t factorial(int s) {
    std::int64_t f = 1;
    for (int i = 2; i <= s; ++i) f *= i;
    return f;
}

Json witness_json(const SpanningWitness& w) {
    return {{"x", w.x}, {"x_coefficient", w.x_coefficient}, {"coefficients", w.coefficients}};
}

std::string pad(std::int64_t x) {
    std::string s = std::to_string(x);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

}  // namespace

void run_main_scan(const MainScanParams& p, Report& report) {
    if (!is_prime(p.N)) throw std::invalid_argument("main scan: N must be prime");
    if (p.s < 1 || !(p.Q >= 1.0)) throw std::invalid_argument("main scan: need s >= 1 and Q >= 1");
    const double log_n = std::log(static_cast<double>(p.N));
    const int k_paper = 2 + static_cast<int>(std::floor(log_n));
    const int k = p.k.value_or(k_paper);
    if (k < 1) throw std::invalid_argument("main scan: k must be positive");
    const auto s_fact = factorial(p.s);
    Json& data = report.data();

    report.anchor("tuple_lower_bound", "T_k^{phi, Q^{-1/2}/2}(S) >= |S|^{2k} / (2 N nu^{2k-1})");
    report.anchor("q_condition", "Q >= 4 N^{6k} >= 4 |S|^{-2} N^2 nu^{4k-4}");
    report.anchor("family", "Lambda^{phi, Q^{-1/2}}(2k, s), greedy maximal in Z_N");
    report.anchor("witness", "|| s_* phi*(x) - sum_j s_j phi*(lambda_j) || <= Q^{-1/2}, 0 < |s_*| <= s");
    report.anchor("size", "|Lambda| << nu^2 log N");
    report.anchor("dirichlet", "max_j || q phi*(lambda_j) || <= 1 / (4 N k s!)");
    report.anchor("final", "|| q s! phi*(x) || <= 1/N");
    report.anchor("parameters", "2 alpha c + 2 <= alpha and 2 beta c + 2 d <= beta");
    report.anchor("family_moment", "T_k^{phi,eta/2}(Lambda) <= 2^{4k+2} k^{k+1} |Lambda|^k max{1, (k/|Lambda|)^k |Lambda|^{4k/s}}");

    data["regime"] = {{"mode", "diagnostic"},
                      {"k", k},
                      {"k_paper", k_paper},
                      {"k_overridden", k != k_paper},
                      {"N", p.N},
                      {"s", p.s},
                      {"Q", p.Q},
                      {"phi", circle_map_to_json(p.phi)}};

    // Parameter quadruple, exact.
    {
        const Rational two(2);
        const Rational lhs1 = two * p.alpha * p.c + two;
        const Rational lhs2 = two * p.beta_exp * p.c + two * p.d;
        report.record("parameters", "2*alpha*c+2 <= alpha", lhs1.to_double(), p.alpha.to_double(), "<=",
                      lhs1 <= p.alpha);
        report.record("parameters", "2*beta*c+2d <= beta", lhs2.to_double(), p.beta_exp.to_double(), "<=",
                      lhs2 <= p.beta_exp);
        const double loglog = std::log(log_n);
        data["parameters"] = {
            {"alpha", p.alpha.str()},
            {"beta", p.beta_exp.str()},
            {"c", p.c.str()},
            {"d", p.d.str()},
            {"nu_log_exponent", (p.alpha * p.c).str()},
            {"nu_loglog_exponent", (p.beta_exp * p.c + p.d).str()},
            {"log_Q_paper", loglog > 0 ? std::pow(log_n, p.alpha.to_double()) * std::pow(loglog, p.beta_exp.to_double())
                                       : std::nan("")}};
    }

    // Theta up to ceil(Q), capped.
    const auto n_max = std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(p.Q)), p.theta_cap);
    const auto series = theta_series(p.phi, n_max, p.norm_options);
    Json theta_rows = Json::array();
    for (std::size_t n = 0; n < series.size(); ++n) {
        theta_rows.push_back({{"n", n}, {"lower", series[n].lower}, {"upper", series[n].upper}});
    }
    const double nu = std::max(1.0, series.back().lower);
    data["theta"] = {{"n_max", n_max}, {"capped", n_max < std::ceil(p.Q)}, {"nu_lower", nu}, {"series", theta_rows}};

    // (cond:Q_simple), in logarithms.
    const double log_q = std::log(p.Q);
    const double need1 = std::log(4.0) + 6.0 * k * log_n;
    const double need2 = std::log(4.0) + (4.0 * k - 4.0) * std::log(nu);  // |S| = N
    const bool q_simple = log_q >= need1 && need1 >= need2;
    data["q_condition"] = {{"log_Q", log_q}, {"log_4N6k", need1}, {"log_rhs2", need2}, {"met", q_simple}};

    // Tuple counting on S = Z_N.
    std::vector<std::int64_t> group(static_cast<std::size_t>(p.N));
    std::iota(group.begin(), group.end(), 0);
    const auto [eta_count, count_exact] = inverse_sqrt(p.Q, 2);
    try {
        const auto count = t_k_phi(group, p.N, p.phi, eta_count, k, p.budget);
        const double rhs = std::pow(static_cast<double>(p.N), 2.0 * k) /
                           (2.0 * static_cast<double>(p.N) * std::pow(nu, 2.0 * k - 1.0));
        data["tuple_count"] = {{"eta", eta_count.str()}, {"eta_exact", count_exact}, {"count", count},
                               {"bound", rhs}, {"holds", static_cast<double>(count) >= rhs}};
        if (q_simple) report.check_ge("tuple-count", "T_k^{phi,eta/2}(Z_N) >= bound", static_cast<double>(count), rhs);
    } catch (const BudgetExceeded& e) {
        report.fail_stage("tuple_count", e.what());
    }

    // Greedy maximal family member.
    const auto [eta_family, family_exact] = inverse_sqrt(p.Q, 1);
    const auto spec = FamilySpec::lambda_ks_phi(p.N, 2 * k, p.s, eta_family, p.phi);
    std::vector<std::int64_t> lambda;
    try {
        lambda = greedy_family_subset(group, spec, p.budget);
    } catch (const BudgetExceeded& e) {
        report.fail_stage("family", e.what());
        return;
    }
    const double size_scale = nu * nu * log_n;
    data["family"] = {{"eta", eta_family.str()},
                      {"eta_exact", family_exact},
                      {"lambda", lambda},
                      {"size", lambda.size()},
                      {"size_over_nu2_logN", static_cast<double>(lambda.size()) / size_scale}};
    try {
        const auto cert = check_membership(lambda, spec, p.budget);
        report.record("family", "Lambda is a family member", cert.dissociated ? 1 : 0, 1, "==", cert.dissociated);
        data["family"]["certificate"] = {{"verdict", cert.dissociated},
                                         {"relation", cert.relation},
                                         {"notion", to_string(spec.notion)},
                                         {"params", {{"N", p.N}, {"k", 2 * k}, {"s", p.s}, {"eta", eta_family.str()}}}};
    } catch (const BudgetExceeded& e) {
        data["family"]["certificate"] = {{"verdict", nullptr}, {"skipped", e.what()}};
    }
    if (p.s >= 5 && !lambda.empty()) {
        try {
            const auto count = t_k_phi(lambda, p.N, p.phi, eta_family / Rational(2), k, p.budget);
            report.check_le("family", "T_k^{phi,eta/2}(Lambda) <= bound", static_cast<double>(count),
                            lambda_ks_phi_moment_bound(k, p.s, static_cast<std::int64_t>(lambda.size())));
        } catch (const BudgetExceeded& e) {
            data["family"]["moment_check_skipped"] = e.what();
        }
    }

    // Spanning witnesses for every x.
    bool witnesses_ok = true;
    Json witness_rows = Json::array();
    for (std::int64_t x = 0; x < p.N; ++x) {
        SpanningWitness w;
        const auto it = std::lower_bound(lambda.begin(), lambda.end(), x);
        if (it != lambda.end() && *it == x) {
            w.x = x;
            w.basis = lambda;
            w.coefficients.assign(lambda.size(), 0);
            w.coefficients[static_cast<std::size_t>(it - lambda.begin())] = 1;
        } else {
            try {
                w = spanning_witness(x, lambda, spec, p.budget);
            } catch (const BudgetExceeded& e) {
                report.fail_stage("witness", "x = " + std::to_string(x) + ": " + e.what());
                return;
            } catch (const SearchFailed& e) {
                witnesses_ok = false;
                report.record("x-" + pad(x), "witness re-verifies", 0, 1, "==", false);
                witness_rows.push_back({{"x", x}, {"error", e.what()}});
                continue;
            }
        }
        const bool ok = witness_holds(w, spec);
        witnesses_ok = witnesses_ok && ok;
        report.record("x-" + pad(x), "witness re-verifies", ok ? 1 : 0, 1, "==", ok);
        witness_rows.push_back(witness_json(w));
    }
    data["witnesses"] = witness_rows;

    // Dirichlet step on {phi*(lambda)}.
    std::vector<Rational> phases;
    for (auto l : lambda) phases.push_back(phi_star_turns(p.phi, p.N, l));
    const Rational eps(1, 4 * p.N * k * s_fact);
    const auto approx = dirichlet_approx(phases, eps, p.dirichlet_cap, true);
    data["dirichlet"] = {{"eps", eps.str()},
                         {"found", approx.found},
                         {"q", approx.q},
                         {"achieved", approx.achieved_exact ? approx.achieved_exact->str() : ""},
                         {"search_cap", p.dirichlet_cap},
                         {"log_pigeonhole_bound", static_cast<double>(lambda.size()) * std::log(1.0 / eps.to_double())}};
    if (!approx.found) {
        report.fail_stage("dirichlet", "no q <= " + std::to_string(p.dirichlet_cap));
        return;
    }
    const double q = static_cast<double>(approx.q);
    data["dirichlet"]["q_le_Q"] = q <= p.Q;
    data["dirichlet"]["s_fact_q_over_sqrtQ"] = static_cast<double>(s_fact) * q / std::sqrt(p.Q);
    data["dirichlet"]["paper_condition_met"] = static_cast<double>(s_fact) * q / std::sqrt(p.Q) <= 0.5 / static_cast<double>(p.N);

    // Final phase check.
    const Rational limit(1, p.N);
    Json final_rows = Json::array();
    bool all_final = true;
    for (std::int64_t x = 0; x < p.N; ++x) {
        const Rational v = Rational(approx.q) * Rational(s_fact) * phi_star_turns(p.phi, p.N, x);
        const Rational dist = *phase_distance_exact(v).exact;
        const bool ok = dist <= limit;
        all_final = all_final && ok;
        final_rows.push_back({{"x", x}, {"distance", dist.str()}, {"pass", ok}});
        if (witnesses_ok) report.record("x-" + pad(x), "||q s! phi*(x)|| <= 1/N", dist.to_double(), limit.to_double(), "<=", ok);
    }
    data["final"] = {{"asserted", witnesses_ok}, {"all_pass", all_final}, {"rows", final_rows}};
}

void run_lebedev_extract_eval(const LebedevExtractParams& p, Report& report) {
    if (!is_prime(p.N)) throw std::invalid_argument("lebedev extract: N must be prime");
    if (p.Q < 1 || !(p.theta_of_Q >= 1.0)) throw std::invalid_argument("lebedev extract: need Q >= 1 and Theta(Q) >= 1");
    report.anchor("hypothesis", "|| Q phi*(x) || <= 1/N for all x in Z_N");
    report.anchor("eta", "eta = 1/(64 Theta(Q)^2)");
    report.anchor("side_condition", "eta >= (log N)^{-1/4} (log log N)^{1/2}");
    report.anchor("conclusion", "Theta(Q)^2 >> (log N)^{1/2} (log log N)^{-1} eta^{3/2} (1 + log(eta^2 (log N)^{1/2} (log log N)^{-1}))^{-1/2}");

    const Rational limit(1, p.N);
    Rational worst(0);
    for (std::int64_t x = 0; x < p.N; ++x) {
        worst = std::max(worst, *phase_distance_exact(Rational(p.Q) * phi_star_turns(p.phi, p.N, x)).exact);
    }
    report.record("hypothesis", "max_x ||Q phi*(x)|| <= 1/N", worst.to_double(), limit.to_double(), "<=", worst <= limit);

    const double theta2 = p.theta_of_Q * p.theta_of_Q;
    const double eta = 1.0 / (64.0 * theta2);
    const double log_n = std::log(static_cast<double>(p.N));
    const double loglog = std::log(log_n);
    const double side_rhs = std::pow(log_n, -0.25) * std::sqrt(loglog);
    const double inner = eta * eta * std::sqrt(log_n) / loglog;
    const double log_factor = 1.0 + std::log(inner);
    const double rhs = log_factor > 0.0
                           ? std::sqrt(log_n) / loglog * std::pow(eta, 1.5) / std::sqrt(log_factor)
                           : std::nan("");
    report.data() = {{"Q", p.Q},
                     {"N", p.N},
                     {"N_le_Q", p.N <= p.Q},
                     {"phi", circle_map_to_json(p.phi)},
                     {"theta_of_Q", p.theta_of_Q},
                     {"eta", eta},
                     {"hypothesis_max_distance", worst.str()},
                     {"side_condition", {{"lhs", eta}, {"rhs", side_rhs}, {"holds", eta >= side_rhs}}},
                     {"conclusion",
                      {{"lhs", theta2},
                       {"rhs_constant_1", rhs},
                       {"log_factor", log_factor},
                       {"log_factor_positive", log_factor > 0.0},
                       {"implied_constant", log_factor > 0.0 ? theta2 / rhs : std::nan("")}}}};
}

}  // namespace halab
