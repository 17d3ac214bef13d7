#include "esshare/report.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace esshare {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

}  // namespace

std::string fmt6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write file '" + path + "'");
    }
    out << content;
    if (!out) {
        throw Error("write failed for '" + path + "'");
    }
}

std::string curves_csv(const StepCurve& supply, const StepCurve& demand,
                       const DeterminationOutcome& det) {
    std::string out = "kind,cum_qty,price\n";
    for (const auto& seg : supply.points) {
        out += csv_join({"supply", fmt6(seg.cum_qty), fmt6(seg.price)});
    }
    for (const auto& seg : demand.points) {
        out += csv_join({"demand", fmt6(seg.cum_qty), fmt6(seg.price)});
    }
    out += "J,K,p_min,p_max\n";
    out += csv_join({std::to_string(det.j), std::to_string(det.k), fmt6(det.p_min),
                     fmt6(det.p_max)});
    return out;
}

std::string trace_csv(const AuctionRun& run) {
    std::string header = "iter,p_t,Z";
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        header += ",x_" + std::to_string(i + 1);
    }
    std::string out = header + "\n";
    for (const auto& point : run.eq.trace) {
        std::vector<std::string> cells{std::to_string(point.iteration), fmt6(point.p),
                                       fmt6(point.z)};
        for (double x : point.xs) {
            cells.push_back(fmt6(x));
        }
        out += csv_join(cells);
    }
    return out;
}

std::string allocation_csv(const AuctionRun& run) {
    std::string out = "ru_id,x_star,eta,Q\n";
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        out += csv_join({run.participants[i].id, fmt6(run.eq.x_star[i]),
                         fmt6(run.alloc.burdens[i]), fmt6(run.alloc.shared[i])});
    }
    return out;
}

std::string pairing_csv(const std::vector<SharePair>& pairs) {
    std::string out = "sfc_id,ru_id,qty\n";
    for (const auto& pair : pairs) {
        out += csv_join({pair.sfc_id, pair.ru_id, fmt6(pair.qty)});
    }
    return out;
}

std::string timeseries_csv(const MarketScenario& scenario, const TimeSeriesTrace& trace) {
    std::string out = "t,ru_id,b,x_offered,Q,eta,U\n";
    for (const auto& slot : trace.slots) {
        for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
            out += csv_join({std::to_string(slot.t), scenario.rus[i].id, fmt6(slot.available[i]),
                             fmt6(slot.offered[i]), fmt6(slot.shared[i]), fmt6(slot.burdens[i]),
                             fmt6(slot.utilities[i])});
        }
    }
    return out;
}

std::string timeseries_slots_csv(const TimeSeriesTrace& trace) {
    std::string out = "t,p_star,Z\n";
    for (const auto& slot : trace.slots) {
        out += csv_join({std::to_string(slot.t), fmt6(slot.p_star), fmt6(slot.z_star)});
    }
    return out;
}

std::string comparison_csv(const ComparisonReport& report) {
    std::string out = "total_q,avg_U_proposed,avg_U_ed,avg_U_fit,improvement_vs_ed_pct,"
                      "improvement_vs_fit_pct\n";
    for (const auto& row : report.rows) {
        out += csv_join({fmt6(row.total_q), fmt6(row.avg_proposed), fmt6(row.avg_ed),
                         fmt6(row.avg_fit), fmt6(row.improvement_vs_ed_pct),
                         fmt6(row.improvement_vs_fit_pct)});
    }
    return out;
}

std::string reluctance_csv(const std::vector<AlphaSweepRow>& rows) {
    std::string out = "alpha,avg_ru_utility,avg_sfc_saving,ru_change_pct,sfc_change_pct\n";
    for (const auto& row : rows) {
        out += csv_join({fmt6(row.alpha), fmt6(row.avg_ru_utility), fmt6(row.avg_sfc_saving),
                         fmt6(row.ru_change_pct), fmt6(row.sfc_change_pct)});
    }
    return out;
}

std::string audit_csv(const AuditReport& report) {
    std::string out = "check,agent,detail,value\n";
    for (const auto& v : report.ir_violations) {
        out += csv_join({"individual-rationality", v.agent_id, v.what, fmt6(v.value)});
    }
    for (const auto& v : report.ic_violations) {
        out += csv_join({"incentive-compatibility", v.ru_id,
                         "declared r " + fmt6(v.misreported_r), fmt6(v.gain)});
    }
    return out;
}

std::string auction_summary_json(const MarketScenario& scenario, const AuctionRun& run) {
    ordered_json doc;
    doc["p_star"] = run.eq.p_star;
    doc["z_star"] = run.eq.z_star;
    doc["regime"] = run.eq.boundary_regime ? "boundary" : "interior";
    if (run.eq.closed_form) {
        doc["closed_form_price"] = *run.eq.closed_form;
    }
    doc["sweep_step"] = run.eq.step;
    doc["J"] = run.det.j;
    doc["K"] = run.det.k;
    doc["p_min"] = run.det.p_min;
    doc["p_max"] = run.det.p_max;
    doc["oversupply"] = run.alloc.oversupply;
    doc["burden_rule"] = to_string(run.alloc.rule);
    doc["participants"] = ordered_json::array();
    for (std::size_t i = 0; i < run.participants.size(); ++i) {
        doc["participants"].push_back({{"ru_id", run.participants[i].id},
                                       {"x_star", run.eq.x_star[i]},
                                       {"eta", run.alloc.burdens[i]},
                                       {"Q", run.alloc.shared[i]},
                                       {"utility", run.eq.utilities[i]},
                                       {"realized_utility", run.realized_utilities[i]}});
    }
    doc["buyers"] = ordered_json::array();
    for (const auto& sfc : run.buyers) {
        doc["buyers"].push_back(
            {{"sfc_id", sfc.id}, {"q", sfc.q}, {"margin", sfc.a - run.eq.p_star}});
    }
    doc["scenario"] = {{"rus", scenario.rus.size()}, {"sfcs", scenario.sfcs.size()}};
    return doc.dump(2) + "\n";
}

std::string curves_summary_json(const DeterminationOutcome& det) {
    ordered_json doc;
    doc["J"] = det.j;
    doc["K"] = det.k;
    doc["p_min"] = det.p_min;
    doc["p_max"] = det.p_max;
    doc["participating_rus"] = det.participants_ru.size();
    doc["participating_sfcs"] = det.participants_sfc.size();
    return doc.dump(2) + "\n";
}

std::string timeseries_summary_json(const MarketScenario& scenario,
                                    const TimeSeriesTrace& trace) {
    ordered_json doc;
    doc["horizon"] = trace.slots.size();
    doc["slots"] = ordered_json::array();
    for (const auto& slot : trace.slots) {
        ordered_json s;
        s["t"] = slot.t;
        s["skipped"] = slot.skipped;
        if (slot.skipped) {
            s["reason"] = slot.skip_reason;
        } else {
            s["p_star"] = slot.p_star;
            s["Z"] = slot.z_star;
            s["J"] = slot.j;
            s["K"] = slot.k;
        }
        double shared_total = 0.0;
        for (double q : slot.shared) shared_total += q;
        s["shared_total"] = shared_total;
        doc["slots"].push_back(s);
    }
    ordered_json cumulative = ordered_json::array();
    for (std::size_t i = 0; i < scenario.rus.size(); ++i) {
        double total = 0.0;
        for (const auto& slot : trace.slots) total += slot.shared[i];
        cumulative.push_back({{"ru_id", scenario.rus[i].id}, {"shared_total", total}});
    }
    doc["cumulative_shared"] = cumulative;
    return doc.dump(2) + "\n";
}

std::string compare_summary_json(const ComparisonReport& report,
                                 const std::vector<AlphaSweepRow>& alpha_rows) {
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const auto& row : report.rows) {
        doc["rows"].push_back({{"total_q", row.total_q},
                               {"feasible", row.feasible},
                               {"avg_proposed", row.avg_proposed},
                               {"avg_ed", row.avg_ed},
                               {"avg_fit", row.avg_fit},
                               {"improvement_vs_ed_pct", row.improvement_vs_ed_pct},
                               {"improvement_vs_fit_pct", row.improvement_vs_fit_pct}});
    }
    doc["notes"] = report.notes;
    if (!alpha_rows.empty()) {
        doc["reluctance_sweep"] = ordered_json::array();
        for (const auto& row : alpha_rows) {
            doc["reluctance_sweep"].push_back({{"alpha", row.alpha},
                                               {"avg_ru_utility", row.avg_ru_utility},
                                               {"avg_sfc_saving", row.avg_sfc_saving},
                                               {"ru_change_pct", row.ru_change_pct},
                                               {"sfc_change_pct", row.sfc_change_pct}});
        }
    }
    return doc.dump(2) + "\n";
}

std::string audit_summary_json(const AuditReport& report) {
    ordered_json doc;
    doc["passed"] = report.passed();
    doc["tolerance"] = report.tolerance;
    doc["ir_violations"] = ordered_json::array();
    for (const auto& v : report.ir_violations) {
        doc["ir_violations"].push_back(
            {{"agent_id", v.agent_id}, {"what", v.what}, {"value", v.value}});
    }
    doc["ic_violations"] = ordered_json::array();
    for (const auto& v : report.ic_violations) {
        doc["ic_violations"].push_back(
            {{"ru_id", v.ru_id}, {"misreported_r", v.misreported_r}, {"gain", v.gain}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace esshare
