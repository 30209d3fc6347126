#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "halab/labcli.hpp"

using namespace halab;

namespace {

RunOutcome run(const Json& doc) { return run_experiment(ExperimentConfig::from_json(doc)); }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Config, ReservedKeysAreLifted) {
    const auto c = ExperimentConfig::from_json({{"experiment", "charsmall"}, {"seed", 9}, {"output", "x"}, {"p", 101}});
    EXPECT_EQ(c.experiment, "charsmall");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(*c.output, "x");
    EXPECT_EQ(c.params, Json({{"p", 101}}));
    EXPECT_THROW(ExperimentConfig::from_json(Json::array()), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json({{"seed", "nine"}}), ConfigError);
}

TEST(Config, SchemaBinding) {
    const std::vector<ParamSpec> schema{{"n", ParamType::integer, 5, ""},
                                        {"eta", ParamType::rational, "1/4", ""},
                                        {"xs", ParamType::rational_list, Json::array({"1/2", 3}), ""}};
    const auto p = bind_params(schema, {{"eta", "2.2"}});
    EXPECT_EQ(p.integer("n"), 5);
    EXPECT_EQ(p.rational("eta"), Rational(11, 5));
    EXPECT_EQ(p.rationals("xs"), (std::vector<Rational>{Rational(1, 2), Rational(3)}));
    EXPECT_THROW((void)bind_params(schema, {{"m", 1}}), ConfigError);
    EXPECT_THROW((void)bind_params(schema, {{"n", "five"}}), ConfigError);
    EXPECT_THROW((void)bind_params(schema, {{"eta", "1/0"}}), ConfigError);
}

TEST(Config, CircleMapRoundTrip) {
    const auto tent = circle_map_from_json("tent");
    EXPECT_EQ(circle_map_from_json(circle_map_to_json(tent)), tent);
    const Json custom = {{"breakpoints", {"0", "1/3", "1"}}, {"slopes", {"2", "1/2"}}, {"offset", "1/5"}, {"winding", 1}};
    const auto m = circle_map_from_json(custom);
    EXPECT_EQ(circle_map_from_json(circle_map_to_json(m)), m);
    EXPECT_THROW((void)circle_map_from_json("sawtooth"), ConfigError);
    EXPECT_THROW((void)circle_map_from_json({{"breakpoints", {"0", "1"}}, {"slopes", {"1"}}, {"colour", 1}}), ConfigError);
    EXPECT_THROW((void)circle_map_from_json({{"breakpoints", {"0", "1"}}, {"slopes", {"1/2"}}}), ConfigError);
}

TEST(Report, HashIgnoresTimestampAndTracksContent) {
    Report a("x", Json::object(), 1), b("x", Json::object(), 1);
    a.check_le("i-1", "q", 1.0, 2.0);
    b.check_le("i-1", "q", 1.0, 2.0);
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.document("t1")["envelope"]["report_hash"], b.document("t2")["envelope"]["report_hash"]);
    b.check_ge("i-2", "q", 1.0, 2.0);
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_TRUE(a.passed());
    EXPECT_FALSE(b.passed());
    EXPECT_EQ(*b.first_failure(), "i-2/q");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, AssertionsSortedById) {
    Report r("x", Json::object(), 0);
    r.check_le("b", "q", 0, 1);
    r.check_le("a", "q", 0, 1);
    const auto body = r.body();
    EXPECT_EQ(body["assertions"][0]["instance_id"], "a");
    EXPECT_EQ(r.csv().substr(0, 50), "experiment,instance_id,quantity,lhs,rhs,relation,p");
}

TEST(Report, FailedStageFails) {
    Report r("x", Json::object(), 0);
    r.check_le("a", "q", 0, 1);
    r.fail_stage("scan", "budget");
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(*r.first_failure(), "stage scan");
}

TEST(Registry, HasTheFifteenExperiments) {
    const std::vector<std::string> names{"dft-oracle", "tk-oracle", "dim-bound", "rudin-calibration",
                                         "tkest-inequality", "complement-identity", "bohr-measure",
                                         "sanders-diagnostics", "translate-expectation", "dirichlet", "charsmall",
                                         "littlewood-growth", "kahane-growth", "main-scan", "lebedev-extract"};
    EXPECT_EQ(registry().size(), names.size());
    for (const auto& n : names) EXPECT_NE(find_experiment(n), nullptr) << n;
}

TEST(RunExperiment, ExitCodes) {
    EXPECT_EQ(run({{"experiment", "no-such"}}).exit_code, 2);
    EXPECT_EQ(run({{"experiment", "charsmall"}, {"bogus", 1}}).exit_code, 2);
    EXPECT_EQ(run({{"experiment", "main-scan"}, {"Q", "1/0"}}).exit_code, 2);
    const auto ok = run({{"experiment", "complement-identity"}, {"seed", 3}});
    EXPECT_EQ(ok.exit_code, 0);
    ASSERT_TRUE(ok.report.has_value());
    EXPECT_EQ(count_lines(ok.report->csv()), 51u);
}

TEST(RunExperiment, SameSeedSameHash) {
    const Json doc{{"experiment", "tk-oracle"}, {"seed", 42}, {"trials", 4}};
    EXPECT_EQ(run(doc).report->hash(), run(doc).report->hash());
    Json other = doc;
    other["seed"] = 43;
    EXPECT_NE(run(doc).report->hash(), run(other).report->hash());
}

TEST(RunExperiment, WritesJsonAndCsv) {
    const auto out = run({{"experiment", "dirichlet"}, {"seed", 1}, {"trials", 3}});
    ASSERT_EQ(out.exit_code, 0);
    const auto dir = std::filesystem::temp_directory_path() / "halab-test-out";
    std::filesystem::remove_all(dir);
    write_outputs(*out.report, dir.string(), "2000-01-01T00:00:00Z");
    std::ifstream js(dir / "dirichlet.json");
    const auto doc = Json::parse(js);
    EXPECT_EQ(doc["envelope"]["report_hash"], out.report->hash());
    EXPECT_EQ(doc["report"], out.report->body());
    std::ifstream csv(dir / "dirichlet.csv");
    std::stringstream ss;
    ss << csv.rdbuf();
    EXPECT_EQ(count_lines(ss.str()), out.report->assertions().size() + 1);
    std::filesystem::remove_all(dir);
}

TEST(MainScan, LinearMapDiagnostic) {
    MainScanParams p;
    p.phi = CircleMap::linear(1);
    p.N = 31;
    p.k = 2;
    Report r("main-scan", Json::object(), 0);
    run_main_scan(p, r);
    EXPECT_TRUE(r.passed()) << r.first_failure().value_or("");
}
