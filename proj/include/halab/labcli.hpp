#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "halab/rational.hpp"
#include "halab/wiener_norms.hpp"

namespace halab {

using Json = nlohmann::json;

/// Malformed or unknown configuration; maps to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// ---------------------------------------------------------------------------
// Configuration

enum class ParamType { integer, real, rational, boolean, string, integer_list, rational_list, circle_map };

struct ParamSpec {
    std::string name;
    ParamType type;
    Json fallback;
    std::string help;
};

/// Validated, typed parameter values for one experiment.
class Params {
public:
    std::int64_t integer(const std::string& key) const;
    double real(const std::string& key) const;
    Rational rational(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::string string(const std::string& key) const;
    std::vector<std::int64_t> integers(const std::string& key) const;
    std::vector<Rational> rationals(const std::string& key) const;
    CircleMap circle_map(const std::string& key) const;
    const Json& raw(const std::string& key) const;

private:
    friend Params bind_params(const std::vector<ParamSpec>&, const Json&);
    std::map<std::string, Json> values_;
};

/// Checks every key against the schema (unknown keys and ill-typed values
/// throw ConfigError) and fills in defaults.
Params bind_params(const std::vector<ParamSpec>& schema, const Json& params);

/// A flat JSON object. The reserved keys "experiment", "seed" and "output"
/// are lifted out; everything else is an experiment parameter.
struct ExperimentConfig {
    std::string experiment;
    Json params = Json::object();
    std::uint64_t seed = 0;
    std::optional<std::string> output;
    Json raw = Json::object();  ///< the file as given

    static ExperimentConfig from_json(const Json& doc);
};

/// "p/q" or "p" strings, or JSON integers. Throws ConfigError.
Rational parse_rational_param(const Json& value, const std::string& key);

/// {breakpoints:["p/q",..], slopes:[..], offset:"p/q", winding:int}, or one of
/// the names "tent", "linear".
CircleMap circle_map_from_json(const Json& value);
Json circle_map_to_json(const CircleMap& phi);

// ---------------------------------------------------------------------------
// Reports

struct Assertion {
    std::string instance_id;
    std::string quantity;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string relation;  ///< "<=", ">=", "==", "~=" (within tolerance), "in"
    bool pass = false;
};

class Report {
public:
    Report(std::string experiment, Json config, std::uint64_t seed);

    /// Formula string for a checked quantity.
    void anchor(const std::string& quantity, const std::string& formula);

    bool check_le(const std::string& id, const std::string& quantity, double lhs, double rhs);
    bool check_ge(const std::string& id, const std::string& quantity, double lhs, double rhs);
    /// |lhs - rhs| <= tol
    bool check_close(const std::string& id, const std::string& quantity, double lhs, double rhs, double tol);
    /// For comparisons decided exactly by the caller.
    bool record(const std::string& id, const std::string& quantity, double lhs, double rhs, std::string relation,
                bool pass);

    /// Free-form result payload.
    Json& data() { return data_; }
    /// Marks a stage as incomplete; the report stays valid but cannot pass.
    void fail_stage(const std::string& stage, const std::string& message);

    const std::string& experiment() const noexcept { return experiment_; }
    const std::vector<Assertion>& assertions() const noexcept { return assertions_; }
    bool passed() const noexcept;
    /// First failing assertion, as "instance_id/quantity".
    std::optional<std::string> first_failure() const;

    /// Everything except the timestamp; assertions sorted by instance_id.
    Json body() const;
    /// SHA-256 of body().dump(), hex.
    std::string hash() const;
    /// {envelope: {generated_at, report_hash}, report: body()}
    Json document(const std::string& timestamp) const;
    /// Header plus one row per assertion.
    std::string csv() const;

private:
    std::string experiment_;
    Json config_;
    std::uint64_t seed_;
    Json anchors_ = Json::object();
    std::vector<Assertion> assertions_;
    Json data_ = Json::object();
    Json errors_ = Json::array();
};

std::string sha256_hex(const std::string& bytes);

// ---------------------------------------------------------------------------
// Registry

struct Experiment {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> schema;
    std::function<void(const Params&, std::uint64_t seed, Report&)> run;
};

const std::vector<Experiment>& registry();
const Experiment* find_experiment(const std::string& name);

struct RunOutcome {
    int exit_code = 0;
    std::optional<Report> report;
    std::string message;
};

/// Runs a configured experiment. Exit code 0 when every assertion passes, 1
/// on an assertion failure or failed stage, 2 on a usage or configuration
/// error (no report in that case).
RunOutcome run_experiment(const ExperimentConfig& config);

/// Writes <dir>/<experiment>.json and <dir>/<experiment>.csv.
void write_outputs(const Report& report, const std::string& dir, const std::string& timestamp);

// ---------------------------------------------------------------------------
// Main-theorem scan

struct MainScanParams {
    CircleMap phi = CircleMap::linear(1);
    std::int64_t N = 31;
    std::optional<int> k;  ///< defaults to 2 + floor(ln N)
    int s = 5;
    double Q = 1e4;
    Rational alpha{11, 5};
    Rational beta_exp{-3, 5};
    Rational c{1, 22};
    Rational d{-3, 11};
    std::int64_t theta_cap = 32;
    CircleNormOptions norm_options{};
    double budget = 1e8;
    std::int64_t dirichlet_cap = 10'000'000;
};

/// Diagnostic run of the scan at the given (toy) parameters. Every stage is
/// reported; a stage that exhausts its budget is flagged and later stages
/// that depend on it are skipped.
void run_main_scan(const MainScanParams& params, Report& report);

struct LebedevExtractParams {
    std::int64_t Q = 1;
    std::int64_t N = 2;
    CircleMap phi = CircleMap::linear(1);
    double theta_of_Q = 1.0;
};

/// Reporting only; the conclusion carries an implicit constant, evaluated here as 1.
void run_lebedev_extract_eval(const LebedevExtractParams& params, Report& report);

}  // namespace halab
