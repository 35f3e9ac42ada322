#pragma once

// Report serialization: campaign results as JSON (structured) or CSV (flat
// table). Output is a pure function of the campaign result, so fixed-seed
// campaigns produce byte-identical report files; wall-clock timing is never
// written here.

#include <cstdio>
#include <string>

#include <json.hpp>

#include "entrolab/campaign.hpp"

namespace entrolab {

namespace io {

inline nlohmann::ordered_json record_json(const CampaignRecord& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["trial"] = r.trial;
    j["relation"] = r.report.relation;
    j["spec"] = r.report.spec;
    j["lhs"] = r.report.lhs;
    j["rhs"] = r.report.rhs;
    j["slack"] = r.report.slack;
    j["constant"] = r.report.constant;
    j["tolerance"] = r.tolerance;
    j["inputs"] = r.report.inputs;
    return j;
}

inline std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace io

inline nlohmann::ordered_json report_json(const CampaignResult& result) {
    nlohmann::ordered_json j;
    j["version"] = "1";
    nlohmann::ordered_json cfg;
    cfg["seed"] = result.config.seed;
    cfg["trials"] = result.config.trials;
    cfg["dims"] = result.config.dims;
    cfg["tolerance"] = result.config.tolerance;
    cfg["suites"] = result.config.suites;
    cfg["alphas"] = result.config.alphas;
    j["campaign"] = std::move(cfg);

    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : result.records) records.push_back(io::record_json(r));
    j["records"] = std::move(records);

    nlohmann::ordered_json suites = nlohmann::ordered_json::array();
    for (const auto& s : result.summaries) {
        nlohmann::ordered_json sj;
        sj["suite"] = s.suite;
        sj["records"] = s.records;
        sj["violations"] = s.violations;
        sj["min_slack"] = s.min_slack;
        suites.push_back(std::move(sj));
    }
    nlohmann::ordered_json summary;
    summary["records"] = result.records.size();
    summary["violations"] = result.violations;
    summary["min_slack"] = result.min_slack;
    summary["suites"] = std::move(suites);
    j["summary"] = std::move(summary);
    return j;
}

inline std::string report_to_json(const CampaignResult& result) {
    return report_json(result).dump(2) + "\n";
}

inline std::string report_to_csv(const CampaignResult& result) {
    std::string out = "suite,trial,relation,spec,lhs,rhs,slack,constant,tolerance,inputs\n";
    for (const auto& r : result.records) {
        out += r.suite;
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += r.report.relation;
        out += ',';
        out += io::csv_escape(r.report.spec);
        out += ',';
        out += io::csv_number(r.report.lhs);
        out += ',';
        out += io::csv_number(r.report.rhs);
        out += ',';
        out += io::csv_number(r.report.slack);
        out += ',';
        out += io::csv_number(r.report.constant);
        out += ',';
        out += io::csv_number(r.tolerance);
        out += ',';
        out += io::csv_escape(r.report.inputs);
        out += '\n';
    }
    return out;
}

// Single-relation report fragment for the verify command.
inline nlohmann::ordered_json relation_json(const RelationReport& r, double tolerance) {
    nlohmann::ordered_json j;
    j["relation"] = r.relation;
    j["spec"] = r.spec;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["constant"] = r.constant;
    j["tolerance"] = tolerance;
    j["inputs"] = r.inputs;
    j["holds"] = r.slack >= -tolerance;
    return j;
}

}  // namespace entrolab
