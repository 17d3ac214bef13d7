// Command-line front end for the storage-sharing auction engine.
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esshare/runner.hpp"

namespace {

void add_common_options(CLI::App* cmd, esshare::RunConfig& config, std::string& floor,
                        std::string& burden) {
    cmd->add_option("--scenario", config.scenario_path, "Scenario file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", config.output_dir, "Output directory for summary.json and CSVs");
    cmd->add_option("--step", config.overrides.sweep_step,
                    "Price sweep step (default: interval/1000)");
    cmd->add_option("--floor", floor,
                    "Price floor rule: second-highest-included | second-lowest | first-excluded");
    cmd->add_option("--burden", burden, "Burden rule: equal | proportional-r | proportional-x");
    cmd->add_option("--fit", config.overrides.fit_price, "Feed-in-tariff price");
    cmd->add_option("--seed", config.overrides.seed, "Random seed for demand sampling");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"esshare - joint energy-storage sharing auction simulator"};
    app.require_subcommand(1);

    esshare::RunConfig config;
    std::string floor;
    std::string burden;

    auto* auction = app.add_subcommand("auction", "Run one static auction");
    add_common_options(auction, config, floor, burden);

    auto* curves = app.add_subcommand("curves-dump", "Emit aggregate supply/demand step curves");
    add_common_options(curves, config, floor, burden);

    auto* timeseries = app.add_subcommand("timeseries", "Run the slot-by-slot auction");
    add_common_options(timeseries, config, floor, burden);
    timeseries->add_option("--horizon", config.overrides.horizon, "Number of time slots");

    auto* compare = app.add_subcommand("compare", "Proposed vs ED vs FIT across demand levels");
    add_common_options(compare, config, floor, burden);
    compare->add_option("--demands", config.demand_sweep,
                        "Total demand levels (default 200..450 step 50)");
    compare->add_option("--alphas", config.alphas, "Reluctance sweep values");

    auto* audit = app.add_subcommand("audit", "Individual-rationality and misreport audits");
    add_common_options(audit, config, floor, burden);
    audit->add_option("--grid", config.audit_grid, "Misreport grid points per RU");
    audit->add_option("--tolerance", config.audit_tolerance, "Relative gain tolerance");

    CLI11_PARSE(app, argc, argv);

    if (auction->parsed()) config.subcommand = esshare::Subcommand::Auction;
    if (curves->parsed()) config.subcommand = esshare::Subcommand::CurvesDump;
    if (timeseries->parsed()) config.subcommand = esshare::Subcommand::Timeseries;
    if (compare->parsed()) config.subcommand = esshare::Subcommand::Compare;
    if (audit->parsed()) config.subcommand = esshare::Subcommand::Audit;

    try {
        if (!floor.empty()) {
            config.overrides.price_floor_rule = esshare::price_floor_rule_from_string(floor);
        }
        if (!burden.empty()) {
            config.overrides.burden_rule = esshare::burden_rule_from_string(burden);
        }
    } catch (const esshare::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return esshare::kExitValidation;
    }

    return esshare::run(config);
}
