#include "sagin/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sagin/types.hpp"

namespace sagin {

namespace {

const char* kCsvHeader =
    "algorithm,scenario,seed,slot,completed_cumulative,util_uav,util_satellite,"
    "vnf_compute_used_units,vnf_compute_required_units,final_q,violations";

std::string fmt_num(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

void require_plain(const std::string& name, const char* what) {
    if (name.find_first_of(",\"\n\r") != std::string::npos)
        throw std::invalid_argument(std::string(what) + " may not contain commas, quotes or "
                                    "newlines: " + name);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& f, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size())
        throw ParseError(std::string("bad ") + what + " value: '" + f + "'");
    return v;
}

long long parse_int(const std::string& f, const char* what) {
    long long v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size())
        throw ParseError(std::string("bad ") + what + " value: '" + f + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& f, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size())
        throw ParseError(std::string("bad ") + what + " value: '" + f + "'");
    return v;
}

}  // namespace

double SimReport::overall_utilization(double uav_capacity_per_slot,
                                      double sat_capacity_per_slot) const {
    const double cap_per_slot = uav_capacity_per_slot + sat_capacity_per_slot;
    if (slots.empty() || cap_per_slot <= 0) return 0;
    double used = 0;
    for (const SlotMetrics& m : slots)
        used += m.util_uav * uav_capacity_per_slot + m.util_satellite * sat_capacity_per_slot;
    return used / (cap_per_slot * static_cast<double>(slots.size()));
}

std::string reports_to_csv(const std::vector<SimReport>& reports) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SimReport& r : reports) {
        require_plain(r.algorithm, "algorithm name");
        require_plain(r.scenario_name, "scenario name");
        for (const SlotMetrics& m : r.slots) {
            out += r.algorithm;
            out += ',';
            out += r.scenario_name;
            out += ',';
            out += std::to_string(r.seed);
            out += ',';
            out += std::to_string(m.slot);
            out += ',';
            out += std::to_string(m.completed_cumulative);
            out += ',';
            out += fmt_num(m.util_uav);
            out += ',';
            out += fmt_num(m.util_satellite);
            out += ',';
            out += fmt_num(m.vnf_compute_used_units);
            out += ',';
            out += fmt_num(m.vnf_compute_required_units);
            out += ',';
            out += std::to_string(r.final_q);
            out += ',';
            out += std::to_string(r.violation_count);
            out += '\n';
        }
    }
    return out;
}

std::vector<SimReport> reports_from_csv(const std::string& text) {
    std::vector<SimReport> out;
    size_t pos = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = eol == std::string::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kCsvHeader)
                throw ParseError("unexpected CSV header: '" + line + "'");
            saw_header = true;
            continue;
        }
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 11)
            throw ParseError("expected 11 CSV fields, got " + std::to_string(f.size()) +
                             ": '" + line + "'");
        SlotMetrics m;
        m.slot = static_cast<int>(parse_int(f[3], "slot"));
        m.completed_cumulative = static_cast<int>(parse_int(f[4], "completed_cumulative"));
        m.util_uav = parse_double(f[5], "util_uav");
        m.util_satellite = parse_double(f[6], "util_satellite");
        m.vnf_compute_used_units = parse_double(f[7], "vnf_compute_used_units");
        m.vnf_compute_required_units = parse_double(f[8], "vnf_compute_required_units");
        const std::uint64_t seed = parse_u64(f[2], "seed");
        const int final_q = static_cast<int>(parse_int(f[9], "final_q"));
        const int violations = static_cast<int>(parse_int(f[10], "violations"));
        const bool same_run = !out.empty() && out.back().algorithm == f[0] &&
                              out.back().scenario_name == f[1] && out.back().seed == seed &&
                              m.slot > out.back().slots.back().slot;
        if (!same_run) {
            SimReport r;
            r.algorithm = f[0];
            r.scenario_name = f[1];
            r.seed = seed;
            r.final_q = final_q;
            r.violation_count = violations;
            out.push_back(std::move(r));
        } else if (out.back().final_q != final_q || out.back().violation_count != violations) {
            throw ParseError("run summary fields changed mid-run at slot " +
                             std::to_string(m.slot));
        }
        out.back().slots.push_back(m);
    }
    if (!saw_header) throw ParseError("empty CSV document");
    return out;
}

std::string reports_to_json(const std::vector<SimReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SimReport& r : reports) {
        nlohmann::json slots = nlohmann::json::array();
        for (const SlotMetrics& m : r.slots)
            slots.push_back({{"slot", m.slot},
                             {"completed_cumulative", m.completed_cumulative},
                             {"util_uav", m.util_uav},
                             {"util_satellite", m.util_satellite},
                             {"vnf_compute_used_units", m.vnf_compute_used_units},
                             {"vnf_compute_required_units", m.vnf_compute_required_units}});
        arr.push_back({{"algorithm", r.algorithm},
                       {"scenario", r.scenario_name},
                       {"seed", r.seed},
                       {"final_q", r.final_q},
                       {"violations", r.violation_count},
                       {"wall_seconds", r.wall_seconds},
                       {"slots", std::move(slots)}});
    }
    return arr.dump(2) + "\n";
}

Comparison compare(const std::vector<SimReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("compare: no reports given");
    // algorithm -> seed -> report
    std::map<std::string, std::map<std::uint64_t, const SimReport*>> by_alg;
    size_t slot_count = reports.front().slots.size();
    for (const SimReport& r : reports) {
        if (r.slots.size() != slot_count)
            throw std::invalid_argument("compare: reports disagree on slot count");
        by_alg[r.algorithm][r.seed] = &r;
    }
    Comparison c;
    c.reference = by_alg.count("mg-rteg") ? "mg-rteg" : by_alg.begin()->first;
    c.algorithms.push_back(c.reference);
    for (const auto& [alg, runs] : by_alg)
        if (alg != c.reference) c.algorithms.push_back(alg);
    const auto& ref_runs = by_alg[c.reference];
    c.seed_count = static_cast<int>(ref_runs.size());
    for (size_t i = 0; i < slot_count; ++i)
        c.slots.push_back(ref_runs.begin()->second->slots[i].slot);

    c.mean_completed.assign(slot_count, std::vector<double>(c.algorithms.size(), 0));
    for (size_t j = 0; j < c.algorithms.size(); ++j) {
        const auto& runs = by_alg[c.algorithms[j]];
        if (runs.empty()) continue;
        for (size_t i = 0; i < slot_count; ++i) {
            double sum = 0;
            for (const auto& [seed, r] : runs) sum += r->slots[i].completed_cumulative;
            c.mean_completed[i][j] = sum / static_cast<double>(runs.size());
        }
    }
    for (size_t j = 1; j < c.algorithms.size(); ++j) {
        const auto& runs = by_alg[c.algorithms[j]];
        int shared = 0, ge_all = 0, gt_final = 0;
        for (const auto& [seed, ref] : ref_runs) {
            auto it = runs.find(seed);
            if (it == runs.end()) continue;
            ++shared;
            const SimReport* other = it->second;
            bool ge = true;
            for (size_t i = 0; i < slot_count; ++i)
                if (ref->slots[i].completed_cumulative <
                    other->slots[i].completed_cumulative) {
                    ge = false;
                    break;
                }
            if (ge) ++ge_all;
            if (ref->slots.back().completed_cumulative >
                other->slots.back().completed_cumulative)
                ++gt_final;
        }
        const double denom = shared > 0 ? shared : 1;
        c.frac_ge_every_slot[c.algorithms[j]] = ge_all / denom;
        c.frac_gt_final[c.algorithms[j]] = gt_final / denom;
    }
    return c;
}

std::string comparison_to_csv(const Comparison& c) {
    std::string out = "# reference=" + c.reference + " seeds=" + std::to_string(c.seed_count);
    out += '\n';
    for (size_t j = 1; j < c.algorithms.size(); ++j) {
        const std::string& alg = c.algorithms[j];
        out += "# vs=" + alg +
               " ge_every_slot=" + fmt_num(c.frac_ge_every_slot.at(alg)) +
               " gt_final=" + fmt_num(c.frac_gt_final.at(alg)) + "\n";
    }
    out += "slot";
    for (const std::string& alg : c.algorithms) out += ",mean_completed_" + alg;
    out += '\n';
    for (size_t i = 0; i < c.slots.size(); ++i) {
        out += std::to_string(c.slots[i]);
        for (size_t j = 0; j < c.algorithms.size(); ++j)
            out += "," + fmt_num(c.mean_completed[i][j]);
        out += '\n';
    }
    return out;
}

}  // namespace sagin
