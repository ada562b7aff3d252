#include "carnot/reports.hpp"

#include <charconv>

#include <json.hpp>

namespace carnot {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

ordered_json kv_json(const KVList& kv) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

ordered_json est_json(const Estimate& e) {
    ordered_json j = ordered_json::object();
    j["mean"] = e.mean;
    j["std_err"] = e.std_err;
    j["ess"] = e.ess;
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string estimate_json(const Estimate& e) { return dump(est_json(e)); }

std::string to_json(const ScanReport& r) {
    ordered_json j;
    j["kind"] = "scan";
    j["title"] = r.title;
    j["coord_names"] = r.coord_names;
    j["value_names"] = r.value_names;
    ordered_json pts = ordered_json::array();
    for (const auto& p : r.points) {
        ordered_json pj;
        pj["coords"] = p.coords;
        pj["values"] = p.values;
        if (p.singular) pj["singular"] = true;
        if (!p.note.empty()) pj["note"] = p.note;
        pts.push_back(pj);
    }
    j["points"] = pts;
    j["summary"] = kv_json(r.summary);
    if (!r.notes.empty()) {
        ordered_json nj = ordered_json::object();
        for (const auto& [k, v] : r.notes) nj[k] = v;
        j["notes"] = nj;
    }
    if (r.contract_ok.has_value()) j["contract_ok"] = *r.contract_ok;
    return dump(j);
}

std::string to_json(const DefectReport& r) {
    ordered_json j;
    j["kind"] = "defect";
    j["title"] = r.title;
    j["lhs"] = est_json(r.lhs);
    j["rhs"] = est_json(r.rhs);
    j["defect"] = r.defect;
    j["defect_err"] = r.defect_err;
    if (r.ratio.has_value()) j["ratio"] = *r.ratio;
    if (!r.extra.empty()) j["extra"] = kv_json(r.extra);
    j["contract"] = r.contract;
    j["contract_ok"] = r.contract_ok;
    return dump(j);
}

std::string to_json(const FitResult& r) {
    ordered_json j;
    j["kind"] = "fit";
    j["title"] = r.title;
    j["family"] = r.family;
    j["constants"] = kv_json(r.constants);
    j["margin"] = r.margin;
    j["feasible"] = r.feasible;
    if (!r.details.empty()) j["details"] = kv_json(r.details);
    return dump(j);
}

std::string to_json(const IdentityReport& r) {
    ordered_json j;
    j["kind"] = "identity";
    j["title"] = r.title;
    ordered_json cj = ordered_json::object();
    for (const auto& [k, ok] : r.checks) cj[k] = ok;
    j["checks"] = cj;
    j["all_exact"] = r.all_exact;
    return dump(j);
}

std::string to_csv(const ScanReport& r) {
    std::string out;
    for (std::size_t i = 0; i < r.coord_names.size(); ++i)
        out += (i ? "," : "") + r.coord_names[i];
    for (const auto& v : r.value_names) out += "," + v;
    out += ",singular\n";
    for (const auto& p : r.points) {
        for (std::size_t i = 0; i < p.coords.size(); ++i)
            out += (i ? "," : "") + format_double(p.coords[i]);
        for (double v : p.values) out += "," + format_double(v);
        out += p.singular ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

} // namespace carnot
