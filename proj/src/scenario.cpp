#include "esshare/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace esshare {

namespace {

using ordered_json = nlohmann::ordered_json;

double require_number(const ordered_json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) {
        throw ParseError(where + ": missing key '" + key + "'");
    }
    if (!obj[key].is_number()) {
        throw ParseError(where + "." + key + ": expected a number");
    }
    return obj[key].get<double>();
}

std::string require_string(const ordered_json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw ParseError(where + ": missing string key '" + key + "'");
    }
    return obj[key].get<std::string>();
}

std::vector<double> number_list(const ordered_json& arr, const std::string& where) {
    if (!arr.is_array()) {
        throw ParseError(where + ": expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) {
            throw ParseError(where + ": expected an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> number_matrix(const ordered_json& arr, const std::string& where) {
    if (!arr.is_array()) {
        throw ParseError(where + ": expected an array of arrays");
    }
    std::vector<std::vector<double>> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(number_list(arr[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

TemporalConfig parse_temporal(const ordered_json& node) {
    TemporalConfig tc;
    if (node.contains("horizon")) {
        if (!node["horizon"].is_number_unsigned()) {
            throw ParseError("temporal.horizon: expected a nonnegative integer");
        }
        tc.horizon = node["horizon"].get<std::size_t>();
    }
    if (node.contains("lock_consumed")) {
        if (!node["lock_consumed"].is_boolean()) {
            throw ParseError("temporal.lock_consumed: expected a boolean");
        }
        tc.lock_consumed = node["lock_consumed"].get<bool>();
    }
    if (node.contains("demand")) {
        const auto& d = node["demand"];
        if (!d.is_object()) {
            throw ParseError("temporal.demand: expected an object");
        }
        tc.demand.mode = demand_mode_from_string(require_string(d, "mode", "temporal.demand"));
        if (d.contains("lo")) tc.demand.lo = require_number(d, "lo", "temporal.demand");
        if (d.contains("hi")) tc.demand.hi = require_number(d, "hi", "temporal.demand");
        if (d.contains("matrix")) tc.demand.matrix = number_matrix(d["matrix"], "temporal.demand.matrix");
        if (d.contains("totals")) tc.demand.totals = number_list(d["totals"], "temporal.demand.totals");
    }
    if (node.contains("tou_r")) tc.tou_r = number_list(node["tou_r"], "temporal.tou_r");
    if (node.contains("tou_a")) tc.tou_a = number_list(node["tou_a"], "temporal.tou_a");
    if (node.contains("r_schedule")) tc.r_schedule = number_matrix(node["r_schedule"], "temporal.r_schedule");
    if (node.contains("a_schedule")) tc.a_schedule = number_matrix(node["a_schedule"], "temporal.a_schedule");
    return tc;
}

void check_distinct_prices(const std::vector<double>& prices, const std::string& path,
                           const std::string& what, std::vector<Violation>& out) {
    for (std::size_t i = 0; i < prices.size(); ++i) {
        for (std::size_t j = i + 1; j < prices.size(); ++j) {
            if (prices[i] == prices[j]) {
                out.push_back({path, "tied " + what + " (" + std::to_string(prices[i]) +
                                         ") at positions " + std::to_string(i) + " and " +
                                         std::to_string(j)});
            }
        }
    }
}

}  // namespace

const char* to_string(PriceFloorRule rule) {
    switch (rule) {
        case PriceFloorRule::SecondHighestIncluded: return "second-highest-included";
        case PriceFloorRule::SecondLowest: return "second-lowest";
        case PriceFloorRule::FirstExcluded: return "first-excluded";
    }
    return "second-highest-included";
}

const char* to_string(BurdenRule rule) {
    switch (rule) {
        case BurdenRule::Equal: return "equal";
        case BurdenRule::ProportionalReserve: return "proportional-r";
        case BurdenRule::ProportionalOffer: return "proportional-x";
    }
    return "equal";
}

const char* to_string(DemandMode mode) {
    switch (mode) {
        case DemandMode::Uniform: return "uniform";
        case DemandMode::Schedule: return "schedule";
        case DemandMode::ScheduleTotal: return "schedule-total";
    }
    return "uniform";
}

PriceFloorRule price_floor_rule_from_string(const std::string& s) {
    if (s == "second-highest-included") return PriceFloorRule::SecondHighestIncluded;
    if (s == "second-lowest") return PriceFloorRule::SecondLowest;
    if (s == "first-excluded") return PriceFloorRule::FirstExcluded;
    throw ParseError("unknown price_floor_rule '" + s + "'");
}

BurdenRule burden_rule_from_string(const std::string& s) {
    if (s == "equal") return BurdenRule::Equal;
    if (s == "proportional-r") return BurdenRule::ProportionalReserve;
    if (s == "proportional-x") return BurdenRule::ProportionalOffer;
    throw ParseError("unknown burden_rule '" + s + "'");
}

DemandMode demand_mode_from_string(const std::string& s) {
    if (s == "uniform") return DemandMode::Uniform;
    if (s == "schedule") return DemandMode::Schedule;
    if (s == "schedule-total") return DemandMode::ScheduleTotal;
    throw ParseError("unknown demand mode '" + s + "'");
}

MarketScenario load_scenario(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("scenario document must be a JSON object");
    }

    MarketScenario scenario;

    if (!doc.contains("rus") || !doc["rus"].is_array()) {
        throw ParseError("scenario: missing 'rus' array");
    }
    for (std::size_t i = 0; i < doc["rus"].size(); ++i) {
        const auto& node = doc["rus"][i];
        const std::string where = "rus[" + std::to_string(i) + "]";
        if (!node.is_object()) {
            throw ParseError(where + ": expected an object");
        }
        ResidentialUnit ru;
        ru.id = require_string(node, "id", where);
        ru.s_cap = require_number(node, "s_cap", where);
        ru.d_reserved = require_number(node, "d_reserved", where);
        ru.r = require_number(node, "r", where);
        ru.alpha = require_number(node, "alpha", where);
        ru.b_max = ru.s_cap - ru.d_reserved;
        scenario.rus.push_back(std::move(ru));
    }

    if (!doc.contains("sfcs") || !doc["sfcs"].is_array()) {
        throw ParseError("scenario: missing 'sfcs' array");
    }
    for (std::size_t i = 0; i < doc["sfcs"].size(); ++i) {
        const auto& node = doc["sfcs"][i];
        const std::string where = "sfcs[" + std::to_string(i) + "]";
        if (!node.is_object()) {
            throw ParseError(where + ": expected an object");
        }
        FacilityController sfc;
        sfc.id = require_string(node, "id", where);
        sfc.a = require_number(node, "a", where);
        sfc.q = require_number(node, "q", where);
        scenario.sfcs.push_back(std::move(sfc));
    }

    if (doc.contains("config")) {
        const auto& cfg = doc["config"];
        if (!cfg.is_object()) {
            throw ParseError("config: expected an object");
        }
        if (cfg.contains("sweep_step")) {
            scenario.config.sweep_step = require_number(cfg, "sweep_step", "config");
        }
        if (cfg.contains("price_floor_rule")) {
            scenario.config.price_floor_rule =
                price_floor_rule_from_string(require_string(cfg, "price_floor_rule", "config"));
        }
        if (cfg.contains("burden_rule")) {
            scenario.config.burden_rule =
                burden_rule_from_string(require_string(cfg, "burden_rule", "config"));
        }
        if (cfg.contains("fit_price")) {
            scenario.config.fit_price = require_number(cfg, "fit_price", "config");
        }
        if (cfg.contains("seed")) {
            if (!cfg["seed"].is_number_unsigned()) {
                throw ParseError("config.seed: expected a nonnegative integer");
            }
            scenario.config.seed = cfg["seed"].get<std::uint64_t>();
        }
    }

    if (doc.contains("temporal")) {
        if (!doc["temporal"].is_object()) {
            throw ParseError("temporal: expected an object");
        }
        scenario.temporal = parse_temporal(doc["temporal"]);
    }

    // Sort agents by price and carry any per-agent schedule columns along.
    std::vector<std::size_t> ru_order(scenario.rus.size());
    std::vector<std::size_t> sfc_order(scenario.sfcs.size());
    for (std::size_t i = 0; i < ru_order.size(); ++i) ru_order[i] = i;
    for (std::size_t i = 0; i < sfc_order.size(); ++i) sfc_order[i] = i;
    std::stable_sort(ru_order.begin(), ru_order.end(), [&](std::size_t a, std::size_t b) {
        return scenario.rus[a].r < scenario.rus[b].r;
    });
    std::stable_sort(sfc_order.begin(), sfc_order.end(), [&](std::size_t a, std::size_t b) {
        return scenario.sfcs[a].a > scenario.sfcs[b].a;
    });
    auto permute_rows = [](auto& items, const std::vector<std::size_t>& order) {
        auto copy = items;
        for (std::size_t i = 0; i < order.size(); ++i) items[i] = copy[order[i]];
    };
    permute_rows(scenario.rus, ru_order);
    permute_rows(scenario.sfcs, sfc_order);
    if (scenario.temporal) {
        auto permute_columns = [](std::vector<std::vector<double>>& sched,
                                  const std::vector<std::size_t>& order) {
            for (auto& row : sched) {
                if (row.size() != order.size()) continue;  // flagged by validate()
                auto copy = row;
                for (std::size_t i = 0; i < order.size(); ++i) row[i] = copy[order[i]];
            }
        };
        permute_columns(scenario.temporal->r_schedule, ru_order);
        permute_columns(scenario.temporal->a_schedule, sfc_order);
    }

    auto violations = validate(scenario);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return scenario;
}

MarketScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

std::string serialize(const MarketScenario& scenario) {
    ordered_json doc;
    doc["rus"] = ordered_json::array();
    for (const auto& ru : scenario.rus) {
        doc["rus"].push_back({{"id", ru.id},
                              {"s_cap", ru.s_cap},
                              {"d_reserved", ru.d_reserved},
                              {"r", ru.r},
                              {"alpha", ru.alpha}});
    }
    doc["sfcs"] = ordered_json::array();
    for (const auto& sfc : scenario.sfcs) {
        doc["sfcs"].push_back({{"id", sfc.id}, {"a", sfc.a}, {"q", sfc.q}});
    }
    ordered_json cfg;
    if (scenario.config.sweep_step) {
        cfg["sweep_step"] = *scenario.config.sweep_step;
    }
    cfg["price_floor_rule"] = to_string(scenario.config.price_floor_rule);
    cfg["burden_rule"] = to_string(scenario.config.burden_rule);
    cfg["fit_price"] = scenario.config.fit_price;
    cfg["seed"] = scenario.config.seed;
    doc["config"] = cfg;
    if (scenario.temporal) {
        const auto& tc = *scenario.temporal;
        ordered_json t;
        t["horizon"] = tc.horizon;
        t["lock_consumed"] = tc.lock_consumed;
        ordered_json d;
        d["mode"] = to_string(tc.demand.mode);
        if (tc.demand.mode == DemandMode::Uniform) {
            d["lo"] = tc.demand.lo;
            d["hi"] = tc.demand.hi;
        }
        if (!tc.demand.matrix.empty()) d["matrix"] = tc.demand.matrix;
        if (!tc.demand.totals.empty()) d["totals"] = tc.demand.totals;
        t["demand"] = d;
        if (!tc.tou_r.empty()) t["tou_r"] = tc.tou_r;
        if (!tc.tou_a.empty()) t["tou_a"] = tc.tou_a;
        if (!tc.r_schedule.empty()) t["r_schedule"] = tc.r_schedule;
        if (!tc.a_schedule.empty()) t["a_schedule"] = tc.a_schedule;
        doc["temporal"] = t;
    }
    return doc.dump(2) + "\n";
}

std::vector<Violation> validate(const MarketScenario& scenario) {
    std::vector<Violation> out;

    std::set<std::string> ru_ids;
    std::vector<double> reserves;
    for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
        const auto& ru = scenario.rus[i];
        const std::string path = "rus[" + std::to_string(i) + "] (" + ru.id + ")";
        if (!ru_ids.insert(ru.id).second) {
            out.push_back({path, "duplicate RU id"});
        }
        if (!(ru.d_reserved >= 0.0) || !(ru.d_reserved <= ru.s_cap)) {
            out.push_back({path + ".d_reserved", "must satisfy 0 <= d_reserved <= s_cap"});
        }
        if (ru.b_max != ru.s_cap - ru.d_reserved) {
            out.push_back({path + ".b_max", "must equal s_cap - d_reserved exactly"});
        }
        if (!(ru.r > 0.0)) {
            out.push_back({path + ".r", "reservation price must be positive"});
        }
        if (!(ru.alpha > 0.0)) {
            out.push_back({path + ".alpha", "reluctance must be positive"});
        }
        reserves.push_back(ru.r);
    }
    check_distinct_prices(reserves, "rus", "reservation prices", out);

    std::set<std::string> sfc_ids;
    std::vector<double> bids;
    for (std::size_t i = 0; i < scenario.sfcs.size(); ++i) {
        const auto& sfc = scenario.sfcs[i];
        const std::string path = "sfcs[" + std::to_string(i) + "] (" + sfc.id + ")";
        if (!sfc_ids.insert(sfc.id).second) {
            out.push_back({path, "duplicate SFC id"});
        }
        if (!(sfc.a > 0.0)) {
            out.push_back({path + ".a", "bid price must be positive"});
        }
        if (!(sfc.q >= 0.0)) {
            out.push_back({path + ".q", "required storage must be nonnegative"});
        }
        bids.push_back(sfc.a);
    }
    check_distinct_prices(bids, "sfcs", "bid prices", out);

    if (scenario.config.sweep_step && !(*scenario.config.sweep_step > 0.0)) {
        out.push_back({"config.sweep_step", "must be positive when given"});
    }
    if (!(scenario.config.fit_price > 0.0)) {
        out.push_back({"config.fit_price", "must be positive"});
    }

    if (scenario.temporal) {
        const auto& tc = *scenario.temporal;
        if (tc.horizon < 1) {
            out.push_back({"temporal.horizon", "must be at least 1"});
        }
        const auto& d = tc.demand;
        switch (d.mode) {
            case DemandMode::Uniform:
                if (d.lo > d.hi) {
                    out.push_back({"temporal.demand", "lo must not exceed hi"});
                }
                if (d.lo < 0.0) {
                    out.push_back({"temporal.demand.lo", "must be nonnegative"});
                }
                break;
            case DemandMode::Schedule:
                if (d.matrix.size() < tc.horizon) {
                    out.push_back({"temporal.demand.matrix", "needs one row per slot"});
                }
                for (std::size_t t = 0; t < d.matrix.size(); ++t) {
                    if (d.matrix[t].size() != scenario.sfcs.size()) {
                        out.push_back({"temporal.demand.matrix[" + std::to_string(t) + "]",
                                       "needs one entry per SFC"});
                    }
                    for (double v : d.matrix[t]) {
                        if (!(v >= 0.0)) {
                            out.push_back({"temporal.demand.matrix[" + std::to_string(t) + "]",
                                           "entries must be nonnegative"});
                            break;
                        }
                    }
                }
                break;
            case DemandMode::ScheduleTotal:
                if (d.totals.size() < tc.horizon) {
                    out.push_back({"temporal.demand.totals", "needs one entry per slot"});
                }
                for (double v : d.totals) {
                    if (!(v >= 0.0)) {
                        out.push_back({"temporal.demand.totals", "entries must be nonnegative"});
                        break;
                    }
                }
                break;
        }
        if (!tc.tou_r.empty() && tc.tou_r.size() < tc.horizon) {
            out.push_back({"temporal.tou_r", "needs one multiplier per slot"});
        }
        if (!tc.tou_a.empty() && tc.tou_a.size() < tc.horizon) {
            out.push_back({"temporal.tou_a", "needs one multiplier per slot"});
        }
        for (double m : tc.tou_r) {
            if (!(m > 0.0)) {
                out.push_back({"temporal.tou_r", "multipliers must be positive"});
                break;
            }
        }
        for (double m : tc.tou_a) {
            if (!(m > 0.0)) {
                out.push_back({"temporal.tou_a", "multipliers must be positive"});
                break;
            }
        }
        auto check_schedule = [&](const std::vector<std::vector<double>>& sched, std::size_t agents,
                                  const std::string& name, const std::string& what) {
            if (sched.empty()) return;
            if (sched.size() < tc.horizon) {
                out.push_back({name, "needs one row per slot"});
            }
            for (std::size_t t = 0; t < sched.size(); ++t) {
                const std::string path = name + "[" + std::to_string(t) + "]";
                if (sched[t].size() != agents) {
                    out.push_back({path, "needs one price per agent"});
                    continue;
                }
                for (double v : sched[t]) {
                    if (!(v > 0.0)) {
                        out.push_back({path, "prices must be positive"});
                        break;
                    }
                }
                check_distinct_prices(sched[t], path, what, out);
            }
        };
        check_schedule(tc.r_schedule, scenario.rus.size(), "temporal.r_schedule",
                       "reservation prices");
        check_schedule(tc.a_schedule, scenario.sfcs.size(), "temporal.a_schedule", "bid prices");
    }

    return out;
}

}  // namespace esshare
