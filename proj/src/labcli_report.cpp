#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <charconv>
#include <sstream>

#include "halab/labcli.hpp"

namespace halab {
namespace {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

Report::Report(std::string experiment, Json config, std::uint64_t seed)
    : experiment_(std::move(experiment)), config_(std::move(config)), seed_(seed) {}

void Report::anchor(const std::string& quantity, const std::string& formula) { anchors_[quantity] = formula; }

bool Report::check_le(const std::string& id, const std::string& quantity, double lhs, double rhs) {
    return record(id, quantity, lhs, rhs, "<=", lhs <= rhs);
}

bool Report::check_ge(const std::string& id, const std::string& quantity, double lhs, double rhs) {
    return record(id, quantity, lhs, rhs, ">=", lhs >= rhs);
}

bool Report::check_close(const std::string& id, const std::string& quantity, double lhs, double rhs, double tol) {
    return record(id, quantity, lhs, rhs, "~=" + format_number(tol), std::abs(lhs - rhs) <= tol);
}

bool Report::record(const std::string& id, const std::string& quantity, double lhs, double rhs, std::string relation,
                    bool pass) {
    assertions_.push_back({id, quantity, lhs, rhs, std::move(relation), pass});
    return pass;
}

void Report::fail_stage(const std::string& stage, const std::string& message) {
    errors_.push_back({{"stage", stage}, {"message", message}});
}

bool Report::passed() const noexcept {
    return errors_.empty() &&
           std::all_of(assertions_.begin(), assertions_.end(), [](const Assertion& a) { return a.pass; });
}

std::optional<std::string> Report::first_failure() const {
    if (!errors_.empty()) return "stage " + errors_[0]["stage"].get<std::string>();
    for (const auto& a : assertions_) {
        if (!a.pass) return a.instance_id + "/" + a.quantity;
    }
    return std::nullopt;
}

Json Report::body() const {
    auto sorted = assertions_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Assertion& a, const Assertion& b) { return a.instance_id < b.instance_id; });
    Json rows = Json::array();
    std::size_t failures = 0;
    for (const auto& a : sorted) {
        rows.push_back({{"instance_id", a.instance_id},
                        {"quantity", a.quantity},
                        {"lhs", a.lhs},
                        {"rhs", a.rhs},
                        {"relation", a.relation},
                        {"pass", a.pass}});
        if (!a.pass) ++failures;
    }
    return {{"experiment", experiment_},
            {"config", config_},
            {"seed", seed_},
            {"anchors", anchors_},
            {"assertions", rows},
            {"summary", {{"assertions", sorted.size()}, {"failures", failures}, {"passed", passed()}}},
            {"errors", errors_},
            {"data", data_}};
}

std::string Report::hash() const { return sha256_hex(body().dump()); }

Json Report::document(const std::string& timestamp) const {
    return {{"envelope", {{"generated_at", timestamp}, {"report_hash", hash()}}}, {"report", body()}};
}

std::string Report::csv() const {
    auto sorted = assertions_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Assertion& a, const Assertion& b) { return a.instance_id < b.instance_id; });
    std::ostringstream out;
    out << "experiment,instance_id,quantity,lhs,rhs,relation,pass\n";
    for (const auto& a : sorted) {
        out << csv_field(experiment_) << ',' << csv_field(a.instance_id) << ',' << csv_field(a.quantity) << ','
            << format_number(a.lhs) << ',' << format_number(a.rhs) << ',' << csv_field(a.relation) << ','
            << (a.pass ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace halab
