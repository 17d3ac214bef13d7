#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "esshare/runner.hpp"
#include "json.hpp"

using namespace esshare;
namespace fs = std::filesystem;

namespace {

const char* kScenarioDoc = R"({
  "rus": [
    {"id": "ru1", "s_cap": 150, "d_reserved": 0, "r": 20, "alpha": 0.05},
    {"id": "ru2", "s_cap": 150, "d_reserved": 0, "r": 26, "alpha": 0.05},
    {"id": "ru3", "s_cap": 150, "d_reserved": 0, "r": 32, "alpha": 0.05}
  ],
  "sfcs": [
    {"id": "m1", "a": 70, "q": 200},
    {"id": "m2", "a": 60, "q": 120}
  ],
  "config": {"sweep_step": 0.01, "fit_price": 22, "seed": 5}
})";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("esshare_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string write_scenario(const TempDir& dir, const std::string& content) {
    const auto file = dir.path / "scenario.json";
    std::ofstream out(file);
    out << content;
    return file.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("auction run writes summary and plot data") {
    TempDir dir("auction");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::Auction;
    config.scenario_path = write_scenario(dir, kScenarioDoc);
    config.output_dir = (dir.path / "out").string();

    CHECK(run(config) == kExitOk);
    CHECK(fs::exists(dir.path / "out" / "summary.json"));
    CHECK(fs::exists(dir.path / "out" / "trace.csv"));
    CHECK(fs::exists(dir.path / "out" / "allocation.csv"));
    CHECK(fs::exists(dir.path / "out" / "pairing.csv"));

    const auto doc = nlohmann::json::parse(slurp(dir.path / "out" / "summary.json"));
    CHECK(doc["p_star"].get<double>() >= doc["p_min"].get<double>());
    CHECK(doc["p_star"].get<double>() <= doc["p_max"].get<double>());
    CHECK(doc["participants"].size() == doc["J"].get<std::size_t>() - 1);

    const auto trace = slurp(dir.path / "out" / "trace.csv");
    CHECK(trace.rfind("iter,p_t,Z", 0) == 0);
}

TEST_CASE("exit codes map the failure families") {
    TempDir dir("exitcodes");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::Auction;
    config.output_dir = (dir.path / "out").string();

    SUBCASE("validation failure") {
        config.scenario_path = write_scenario(dir, R"({
          "rus": [
            {"id": "x", "s_cap": 100, "d_reserved": 0, "r": 30, "alpha": 0},
            {"id": "y", "s_cap": 100, "d_reserved": 0, "r": 35, "alpha": 0.1}
          ],
          "sfcs": [{"id": "m", "a": 50, "q": 100}, {"id": "n", "a": 45, "q": 100}]
        })");
        CHECK(run(config) == kExitValidation);
    }
    SUBCASE("malformed document") {
        config.scenario_path = write_scenario(dir, "{ broken");
        CHECK(run(config) == kExitValidation);
    }
    SUBCASE("no intersection") {
        config.scenario_path = write_scenario(dir, R"({
          "rus": [
            {"id": "x", "s_cap": 100, "d_reserved": 0, "r": 30, "alpha": 0.1},
            {"id": "y", "s_cap": 100, "d_reserved": 0, "r": 35, "alpha": 0.1}
          ],
          "sfcs": [{"id": "m", "a": 10, "q": 100}, {"id": "n", "a": 8, "q": 100}]
        })");
        CHECK(run(config) == kExitNoIntersection);
    }
    SUBCASE("missing file") {
        config.scenario_path = (dir.path / "nope.json").string();
        CHECK(run(config) == kExitValidation);
    }
}

TEST_CASE("flag overrides beat scenario-file values") {
    TempDir dir("overrides");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::Auction;
    config.scenario_path = write_scenario(dir, kScenarioDoc);
    config.output_dir = (dir.path / "a").string();
    CHECK(run(config) == kExitOk);
    const auto base = nlohmann::json::parse(slurp(dir.path / "a" / "summary.json"));

    config.output_dir = (dir.path / "b").string();
    config.overrides.sweep_step = 0.5;
    config.overrides.burden_rule = BurdenRule::ProportionalReserve;
    CHECK(run(config) == kExitOk);
    const auto changed = nlohmann::json::parse(slurp(dir.path / "b" / "summary.json"));

    CHECK(base["sweep_step"].get<double>() == 0.01);
    CHECK(changed["sweep_step"].get<double>() == 0.5);
    CHECK(changed["burden_rule"].get<std::string>() == "proportional-r");

    SUBCASE("bad override value fails validation") {
        config.overrides.sweep_step = -1.0;
        CHECK(run(config) == kExitValidation);
    }
}

TEST_CASE("curves dump emits both curves and the cut") {
    TempDir dir("curves");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::CurvesDump;
    config.scenario_path = write_scenario(dir, kScenarioDoc);
    config.output_dir = (dir.path / "out").string();
    CHECK(run(config) == kExitOk);

    const auto csv = slurp(dir.path / "out" / "curves.csv");
    CHECK(csv.find("supply,") != std::string::npos);
    CHECK(csv.find("demand,") != std::string::npos);
    CHECK(csv.find("J,K,p_min,p_max") != std::string::npos);
}

TEST_CASE("timeseries run covers the horizon") {
    TempDir dir("timeseries");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::Timeseries;
    config.scenario_path = write_scenario(dir, kScenarioDoc);
    config.output_dir = (dir.path / "out").string();
    config.overrides.horizon = 3;
    CHECK(run(config) == kExitOk);

    const auto doc = nlohmann::json::parse(slurp(dir.path / "out" / "summary.json"));
    CHECK(doc["horizon"].get<std::size_t>() == 3);
    const auto csv = slurp(dir.path / "out" / "timeseries.csv");
    CHECK(csv.rfind("t,ru_id,b,x_offered,Q,eta,U", 0) == 0);
}

TEST_CASE("audit passes on a truthful-optimal scenario") {
    TempDir dir("audit");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::Audit;
    config.scenario_path = write_scenario(dir, R"({
      "rus": [
        {"id": "ru1", "s_cap": 1500, "d_reserved": 0, "r": 24, "alpha": 0.05},
        {"id": "ru2", "s_cap": 1500, "d_reserved": 0, "r": 30, "alpha": 0.05},
        {"id": "ru3", "s_cap": 1500, "d_reserved": 0, "r": 36, "alpha": 0.05}
      ],
      "sfcs": [{"id": "m1", "a": 140, "q": 2000}, {"id": "m2", "a": 130, "q": 3200}]
    })");
    config.output_dir = (dir.path / "out").string();
    config.audit_grid = 50;
    CHECK(run(config) == kExitOk);

    const auto doc = nlohmann::json::parse(slurp(dir.path / "out" / "summary.json"));
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["ic_violations"].empty());
    CHECK(doc["ir_violations"].empty());
}

TEST_CASE("audit flags allocation-rule gaming under proportional burdens") {
    // Oversupplied market where the auctioneer weighs burdens by the declared
    // reservation prices: under-reporting shrinks an RU's burden share, so the
    // misreport search must find gains and the process must exit with code 2.
    TempDir dir("audit_violation");
    RunConfig config;
    config.quiet = true;
    config.subcommand = Subcommand::Audit;
    config.scenario_path = write_scenario(dir, R"({
      "rus": [
        {"id": "ru1", "s_cap": 200, "d_reserved": 0, "r": 20, "alpha": 0.05},
        {"id": "ru2", "s_cap": 200, "d_reserved": 0, "r": 30, "alpha": 0.05},
        {"id": "ru3", "s_cap": 200, "d_reserved": 0, "r": 40, "alpha": 0.05}
      ],
      "sfcs": [{"id": "m1", "a": 120, "q": 250}, {"id": "m2", "a": 110, "q": 400}],
      "config": {"burden_rule": "proportional-r"}
    })");
    config.output_dir = (dir.path / "out").string();
    CHECK(run(config) == kExitAuditViolation);

    const auto doc = nlohmann::json::parse(slurp(dir.path / "out" / "summary.json"));
    CHECK_FALSE(doc["passed"].get<bool>());
    CHECK(doc["ic_violations"].size() > 0);
    CHECK(doc["ir_violations"].empty());

    // The same market under equal burdens is strategy proof.
    config.overrides.burden_rule = BurdenRule::Equal;
    config.output_dir = (dir.path / "out_equal").string();
    CHECK(run(config) == kExitOk);
}

TEST_CASE("identical runs produce byte-identical outputs") {
    TempDir dir("determinism");
    const auto scenario_path = write_scenario(dir, kScenarioDoc);

    for (auto sub : {Subcommand::Auction, Subcommand::Compare}) {
        RunConfig config;
        config.quiet = true;
        config.subcommand = sub;
        config.scenario_path = scenario_path;
        config.output_dir = (dir.path / "x").string();
        REQUIRE(run(config) == kExitOk);
        config.output_dir = (dir.path / "y").string();
        REQUIRE(run(config) == kExitOk);

        for (const auto& entry : fs::directory_iterator(dir.path / "x")) {
            const auto name = entry.path().filename();
            CHECK(slurp(entry.path()) == slurp(dir.path / "y" / name));
        }
        fs::remove_all(dir.path / "x");
        fs::remove_all(dir.path / "y");
    }
}
