#include "sagin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sagin/rng.hpp"

namespace sagin {

using nlohmann::json;

NodeClass node_class_from_string(const std::string& s) {
    if (s == "ground") return NodeClass::Ground;
    if (s == "uav") return NodeClass::Uav;
    if (s == "satellite") return NodeClass::Satellite;
    throw ParseError("unknown node class: " + s);
}

LinkClass link_class_from_string(const std::string& s) {
    if (s == "G2U") return LinkClass::G2U;
    if (s == "U2U") return LinkClass::U2U;
    if (s == "U2S") return LinkClass::U2S;
    if (s == "S2S") return LinkClass::S2S;
    if (s == "S2G") return LinkClass::S2G;
    if (s == "STORAGE") return LinkClass::Storage;
    throw ParseError("unknown link class: " + s);
}

double TaskSpec::total_compute_demand() const {
    double sum = 0;
    for (const auto& v : vnfs) sum += v.compute_demand_units;
    return sum;
}

int Scenario::node_index(const std::string& id) const {
    auto it = node_by_id.find(id);
    return it == node_by_id.end() ? -1 : it->second;
}

int Scenario::task_index(const std::string& id) const {
    auto it = task_by_id.find(id);
    return it == task_by_id.end() ? -1 : it->second;
}

// ---------------------------------------------------------------- parsing

namespace {

double get_num(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    if (!j[key].is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
    return j[key].get<double>();
}

double get_num_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    return j[key].get<double>();
}

std::string get_str(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw ParseError(where + ": missing string field '" + key + "'");
    return j[key].get<std::string>();
}

Vec3 parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ParseError(where + ": expected [x, y, z]");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json dump_vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

NodeSpec parse_node(const json& j, int slot_count) {
    NodeSpec n;
    n.id = get_str(j, "id", "node");
    const std::string where = "node '" + n.id + "'";
    n.cls = node_class_from_string(get_str(j, "class", where));
    if (j.contains("positions_m")) {
        for (const auto& p : j["positions_m"]) n.positions_m.push_back(parse_vec3(p, where));
    } else if (j.contains("position_m")) {
        // static shorthand: one position replicated across the horizon
        n.positions_m.assign(slot_count, parse_vec3(j["position_m"], where));
    } else {
        throw ParseError(where + ": needs position_m or positions_m");
    }
    n.compute_capacity_units = get_num_or(j, "compute_capacity_units", 0);
    n.storage_capacity_units = get_num_or(j, "storage_capacity_units", 0);
    n.energy_budget_j = get_num_or(j, "energy_budget_j", 0);
    if (j.contains("uav_params")) {
        const json& u = j["uav_params"];
        UavParams p;
        p.mass_kg = get_num(u, "mass_kg", where);
        p.propeller_radius_m = get_num(u, "propeller_radius_m", where);
        p.propeller_count = static_cast<int>(get_num(u, "propeller_count", where));
        p.v_max_m_per_s = get_num(u, "v_max_m_per_s", where);
        p.p_max_w = get_num(u, "p_max_w", where);
        p.tx_power_w = get_num(u, "tx_power_w", where);
        n.uav = p;
    }
    if (j.contains("sat_params")) {
        const json& s = j["sat_params"];
        SatParams p;
        p.op_energy_per_slot_j = get_num(s, "op_energy_per_slot_j", where);
        p.rx_power_us_w = get_num(s, "rx_power_us_w", where);
        p.rx_power_ss_w = get_num(s, "rx_power_ss_w", where);
        p.tx_power_ss_w = get_num(s, "tx_power_ss_w", where);
        p.tx_power_sg_w = get_num(s, "tx_power_sg_w", where);
        n.sat = p;
    }
    return n;
}

TaskSpec parse_task(const json& j) {
    TaskSpec t;
    t.id = get_str(j, "id", "task");
    const std::string where = "task '" + t.id + "'";
    t.source = get_str(j, "source", where);
    t.destination = get_str(j, "destination", where);
    t.arrival_slot = static_cast<int>(get_num_or(j, "arrival_slot", 1));
    t.data_size_mbit = get_num(j, "data_size_mbit", where);
    t.comm_demand_mbit = get_num_or(j, "comm_demand_mbit", t.data_size_mbit);
    t.storage_demand_units = get_num_or(j, "storage_demand_units", t.data_size_mbit / 10.0);
    if (!j.contains("vnfs") || !j["vnfs"].is_array())
        throw ParseError(where + ": missing vnfs array");
    for (const auto& v : j["vnfs"]) {
        VnfRequirement r;
        r.index = static_cast<int>(get_num(v, "index", where));
        r.compute_demand_units = get_num(v, "compute_demand_units", where);
        t.vnfs.push_back(r);
    }
    return t;
}

ChannelParams parse_channel(const json& j) {
    ChannelParams c;
    const json& g = j.at("g2u");
    c.g2u.tx_power_w = get_num(g, "tx_power_w", "channel.g2u");
    c.g2u.noise_power_w = get_num(g, "noise_power_w", "channel.g2u");
    c.g2u.eta_los_db = get_num(g, "eta_los_db", "channel.g2u");
    c.g2u.eta_nlos_db = get_num(g, "eta_nlos_db", "channel.g2u");
    c.g2u.alpha = get_num(g, "alpha", "channel.g2u");
    c.g2u.beta = get_num(g, "beta", "channel.g2u");
    c.g2u.carrier_mhz = get_num(g, "carrier_mhz", "channel.g2u");
    c.g2u.bandwidth_hz = get_num(g, "bandwidth_hz", "channel.g2u");
    const json& a = j.at("a2a");
    c.a2a.tx_power_w = get_num(a, "tx_power_w", "channel.a2a");
    c.a2a.gain_tx = get_num(a, "gain_tx", "channel.a2a");
    c.a2a.gain_rx = get_num(a, "gain_rx", "channel.a2a");
    c.a2a.carrier_hz = get_num(a, "carrier_hz", "channel.a2a");
    c.a2a.boltzmann_j_per_k = get_num_or(a, "boltzmann_j_per_k", 1.380649e-23);
    c.a2a.noise_temp_k = get_num(a, "noise_temp_k", "channel.a2a");
    c.a2a.bandwidth_hz = get_num(a, "bandwidth_hz", "channel.a2a");
    const json& s = j.at("s2g");
    c.s2g.tx_power_w = get_num(s, "tx_power_w", "channel.s2g");
    c.s2g.gain_tx = get_num(s, "gain_tx", "channel.s2g");
    c.s2g.gain_rx = get_num(s, "gain_rx", "channel.s2g");
    c.s2g.free_space_loss = get_num(s, "free_space_loss", "channel.s2g");
    c.s2g.rain_attenuation = get_num(s, "rain_attenuation", "channel.s2g");
    c.s2g.noise_power_w = get_num(s, "noise_power_w", "channel.s2g");
    c.s2g.bandwidth_hz = get_num(s, "bandwidth_hz", "channel.s2g");
    if (j.contains("model_variants")) {
        const json& v = j["model_variants"];
        c.variants.g2u_literal_bracket = v.value("g2u_literal_bracket", false);
        c.variants.a2a_squared_law = v.value("a2a_squared_law", false);
    }
    return c;
}

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    for (char ch : id) {
        bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                  (ch >= '0' && ch <= '9') || ch == '_' || ch == '.' || ch == '-';
        if (!ok) return false;
    }
    return true;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    try {
        Scenario s;
        s.slot_count = static_cast<int>(get_num(j, "slot_count", "scenario"));
        s.slot_length_s = get_num(j, "slot_length_s", "scenario");
        s.rng_seed = static_cast<std::uint64_t>(get_num_or(j, "rng_seed", 1));
        s.channel = parse_channel(j.at("channel"));
        if (j.contains("energy")) {
            const json& e = j["energy"];
            s.energy.gravity_m_per_s2 = get_num_or(e, "gravity_m_per_s2", 9.8);
            s.energy.air_density_kg_per_m3 = get_num_or(e, "air_density_kg_per_m3", 1.225);
            s.energy.compute_energy_uav_j_per_unit =
                get_num_or(e, "compute_energy_uav_j_per_unit", 1.0);
            s.energy.compute_energy_sat_j_per_unit =
                get_num_or(e, "compute_energy_sat_j_per_unit", 1.0);
        }
        if (j.contains("connectivity")) {
            const json& c = j["connectivity"];
            auto inf = std::numeric_limits<double>::infinity();
            s.connectivity.g2u_max_range_m = get_num_or(c, "g2u_max_range_m", inf);
            s.connectivity.u2u_max_range_m = get_num_or(c, "u2u_max_range_m", inf);
            s.connectivity.u2s_max_range_m = get_num_or(c, "u2s_max_range_m", inf);
            s.connectivity.s2s_max_range_m = get_num_or(c, "s2s_max_range_m", inf);
            s.connectivity.s2g_max_range_m = get_num_or(c, "s2g_max_range_m", inf);
            s.connectivity.uav_to_nearest_satellite_only =
                c.value("uav_to_nearest_satellite_only", true);
        }
        for (const auto& n : j.value("nodes", json::array()))
            s.nodes.push_back(parse_node(n, s.slot_count));
        for (const auto& t : j.value("tasks", json::array())) s.tasks.push_back(parse_task(t));
        if (j.contains("task_generation")) {
            const json& g = j["task_generation"];
            TaskGenConfig cfg;
            cfg.count = static_cast<int>(get_num(g, "count", "task_generation"));
            cfg.bounds.min_mbit = get_num_or(g, "min_mbit", 10);
            cfg.bounds.max_mbit = get_num_or(g, "max_mbit", 50);
            cfg.stagger_max_slot = static_cast<int>(get_num_or(g, "stagger_max_slot", 1));
            s.task_generation = cfg;
        }
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["slot_count"] = s.slot_count;
    j["slot_length_s"] = s.slot_length_s;
    j["rng_seed"] = s.rng_seed;
    json g2u{{"tx_power_w", s.channel.g2u.tx_power_w},
             {"noise_power_w", s.channel.g2u.noise_power_w},
             {"eta_los_db", s.channel.g2u.eta_los_db},
             {"eta_nlos_db", s.channel.g2u.eta_nlos_db},
             {"alpha", s.channel.g2u.alpha},
             {"beta", s.channel.g2u.beta},
             {"carrier_mhz", s.channel.g2u.carrier_mhz},
             {"bandwidth_hz", s.channel.g2u.bandwidth_hz}};
    json a2a{{"tx_power_w", s.channel.a2a.tx_power_w},
             {"gain_tx", s.channel.a2a.gain_tx},
             {"gain_rx", s.channel.a2a.gain_rx},
             {"carrier_hz", s.channel.a2a.carrier_hz},
             {"boltzmann_j_per_k", s.channel.a2a.boltzmann_j_per_k},
             {"noise_temp_k", s.channel.a2a.noise_temp_k},
             {"bandwidth_hz", s.channel.a2a.bandwidth_hz}};
    json s2g{{"tx_power_w", s.channel.s2g.tx_power_w},
             {"gain_tx", s.channel.s2g.gain_tx},
             {"gain_rx", s.channel.s2g.gain_rx},
             {"free_space_loss", s.channel.s2g.free_space_loss},
             {"rain_attenuation", s.channel.s2g.rain_attenuation},
             {"noise_power_w", s.channel.s2g.noise_power_w},
             {"bandwidth_hz", s.channel.s2g.bandwidth_hz}};
    j["channel"] = json{{"g2u", g2u},
                        {"a2a", a2a},
                        {"s2g", s2g},
                        {"model_variants",
                         json{{"g2u_literal_bracket", s.channel.variants.g2u_literal_bracket},
                              {"a2a_squared_law", s.channel.variants.a2a_squared_law}}}};
    j["energy"] = json{{"gravity_m_per_s2", s.energy.gravity_m_per_s2},
                       {"air_density_kg_per_m3", s.energy.air_density_kg_per_m3},
                       {"compute_energy_uav_j_per_unit", s.energy.compute_energy_uav_j_per_unit},
                       {"compute_energy_sat_j_per_unit", s.energy.compute_energy_sat_j_per_unit}};
    json conn;
    auto put_range = [&conn](const char* key, double v) {
        if (std::isfinite(v)) conn[key] = v;
    };
    put_range("g2u_max_range_m", s.connectivity.g2u_max_range_m);
    put_range("u2u_max_range_m", s.connectivity.u2u_max_range_m);
    put_range("u2s_max_range_m", s.connectivity.u2s_max_range_m);
    put_range("s2s_max_range_m", s.connectivity.s2s_max_range_m);
    put_range("s2g_max_range_m", s.connectivity.s2g_max_range_m);
    conn["uav_to_nearest_satellite_only"] = s.connectivity.uav_to_nearest_satellite_only;
    j["connectivity"] = conn;
    j["nodes"] = json::array();
    for (const auto& n : s.nodes) {
        json jn{{"id", n.id},
                {"class", to_string(n.cls)},
                {"compute_capacity_units", n.compute_capacity_units},
                {"storage_capacity_units", n.storage_capacity_units},
                {"energy_budget_j", n.energy_budget_j}};
        json pos = json::array();
        for (const auto& p : n.positions_m) pos.push_back(dump_vec3(p));
        jn["positions_m"] = pos;
        if (n.uav) {
            jn["uav_params"] = json{{"mass_kg", n.uav->mass_kg},
                                    {"propeller_radius_m", n.uav->propeller_radius_m},
                                    {"propeller_count", n.uav->propeller_count},
                                    {"v_max_m_per_s", n.uav->v_max_m_per_s},
                                    {"p_max_w", n.uav->p_max_w},
                                    {"tx_power_w", n.uav->tx_power_w}};
        }
        if (n.sat) {
            jn["sat_params"] = json{{"op_energy_per_slot_j", n.sat->op_energy_per_slot_j},
                                    {"rx_power_us_w", n.sat->rx_power_us_w},
                                    {"rx_power_ss_w", n.sat->rx_power_ss_w},
                                    {"tx_power_ss_w", n.sat->tx_power_ss_w},
                                    {"tx_power_sg_w", n.sat->tx_power_sg_w}};
        }
        j["nodes"].push_back(jn);
    }
    j["tasks"] = json::array();
    for (const auto& t : s.tasks) {
        json jt{{"id", t.id},
                {"source", t.source},
                {"destination", t.destination},
                {"arrival_slot", t.arrival_slot},
                {"data_size_mbit", t.data_size_mbit},
                {"comm_demand_mbit", t.comm_demand_mbit},
                {"storage_demand_units", t.storage_demand_units}};
        json vnfs = json::array();
        for (const auto& v : t.vnfs)
            vnfs.push_back(json{{"index", v.index}, {"compute_demand_units", v.compute_demand_units}});
        jt["vnfs"] = vnfs;
        j["tasks"].push_back(jt);
    }
    if (s.task_generation) {
        j["task_generation"] = json{{"count", s.task_generation->count},
                                    {"min_mbit", s.task_generation->bounds.min_mbit},
                                    {"max_mbit", s.task_generation->bounds.max_mbit},
                                    {"stagger_max_slot", s.task_generation->stagger_max_slot}};
    }
    return j.dump(2) + "\n";
}

void validate_scenario(Scenario& s) {
    require(s.slot_count >= 1, "scenario: slot_count must be >= 1");
    require(s.slot_length_s > 0, "scenario: slot_length_s must be > 0");

    const auto& c = s.channel;
    require(c.g2u.tx_power_w > 0, "channel.g2u: tx_power_w must be > 0");
    require(c.g2u.noise_power_w > 0, "channel.g2u: noise_power_w must be > 0");
    require(c.g2u.alpha > 0 && c.g2u.beta > 0, "channel.g2u: alpha and beta must be > 0");
    require(c.g2u.carrier_mhz > 0, "channel.g2u: carrier_mhz must be > 0");
    require(c.g2u.bandwidth_hz > 0, "channel.g2u: bandwidth_hz must be > 0");
    require(c.a2a.tx_power_w > 0, "channel.a2a: tx_power_w must be > 0");
    require(c.a2a.gain_tx > 0 && c.a2a.gain_rx > 0, "channel.a2a: gains must be > 0");
    require(c.a2a.carrier_hz > 0, "channel.a2a: carrier_hz must be > 0");
    require(c.a2a.boltzmann_j_per_k > 0, "channel.a2a: boltzmann_j_per_k must be > 0");
    require(c.a2a.noise_temp_k > 0, "channel.a2a: noise_temp_k must be > 0");
    require(c.a2a.bandwidth_hz > 0, "channel.a2a: bandwidth_hz must be > 0");
    require(c.s2g.tx_power_w > 0, "channel.s2g: tx_power_w must be > 0");
    require(c.s2g.gain_tx > 0 && c.s2g.gain_rx > 0, "channel.s2g: gains must be > 0");
    require(c.s2g.free_space_loss > 0 && c.s2g.free_space_loss <= 1,
            "channel.s2g: free_space_loss must be in (0, 1]");
    require(c.s2g.rain_attenuation > 0 && c.s2g.rain_attenuation <= 1,
            "channel.s2g: rain_attenuation must be in (0, 1]");
    require(c.s2g.noise_power_w > 0, "channel.s2g: noise_power_w must be > 0");
    require(c.s2g.bandwidth_hz > 0, "channel.s2g: bandwidth_hz must be > 0");

    require(s.energy.gravity_m_per_s2 > 0, "energy: gravity_m_per_s2 must be > 0");
    require(s.energy.air_density_kg_per_m3 > 0, "energy: air_density_kg_per_m3 must be > 0");
    require(s.energy.compute_energy_uav_j_per_unit >= 0 &&
                s.energy.compute_energy_sat_j_per_unit >= 0,
            "energy: compute energy per unit must be >= 0");

    require(s.connectivity.g2u_max_range_m > 0 && s.connectivity.u2u_max_range_m > 0 &&
                s.connectivity.u2s_max_range_m > 0 && s.connectivity.s2s_max_range_m > 0 &&
                s.connectivity.s2g_max_range_m > 0,
            "connectivity: ranges must be > 0");

    s.node_by_id.clear();
    require(!s.nodes.empty(), "scenario: needs at least one node");
    for (int i = 0; i < static_cast<int>(s.nodes.size()); ++i) {
        const NodeSpec& n = s.nodes[i];
        const std::string where = "node '" + n.id + "'";
        require(valid_id(n.id), "node id '" + n.id + "' must match [A-Za-z0-9_.-]+");
        require(s.node_by_id.emplace(n.id, i).second, "duplicate node id '" + n.id + "'");
        require(static_cast<int>(n.positions_m.size()) == s.slot_count,
                where + ": positions_m must have one entry per slot");
        for (const auto& p : n.positions_m)
            require(p.allFinite(), where + ": positions must be finite");
        require(n.compute_capacity_units >= 0, where + ": compute_capacity_units must be >= 0");
        require(n.storage_capacity_units >= 0, where + ": storage_capacity_units must be >= 0");
        require(n.energy_budget_j >= 0, where + ": energy_budget_j must be >= 0");
        switch (n.cls) {
            case NodeClass::Ground:
                require(!n.uav && !n.sat, where + ": ground nodes take no uav/sat params");
                require(n.compute_capacity_units == 0 && n.storage_capacity_units == 0,
                        where + ": ground nodes hold no compute or storage");
                break;
            case NodeClass::Uav: {
                require(n.uav.has_value(), where + ": uav nodes need uav_params");
                require(!n.sat, where + ": uav nodes take no sat_params");
                const UavParams& u = *n.uav;
                require(u.mass_kg > 0, where + ": mass_kg must be > 0");
                require(u.propeller_radius_m > 0, where + ": propeller_radius_m must be > 0");
                require(u.propeller_count >= 1, where + ": propeller_count must be >= 1");
                require(u.v_max_m_per_s > 0, where + ": v_max_m_per_s must be > 0");
                require(u.p_max_w > 0, where + ": p_max_w must be > 0");
                require(u.tx_power_w > 0, where + ": tx_power_w must be > 0");
                // a trajectory faster than v_max would put the propulsion
                // model outside its domain mid-run
                double limit = u.v_max_m_per_s * s.slot_length_s * (1 + 1e-9);
                for (size_t t = 0; t + 1 < n.positions_m.size(); ++t) {
                    double step = (n.positions_m[t + 1] - n.positions_m[t]).norm();
                    require(step <= limit, where + ": trajectory exceeds v_max between slots " +
                                               std::to_string(t + 1) + " and " +
                                               std::to_string(t + 2));
                }
                break;
            }
            case NodeClass::Satellite: {
                require(n.sat.has_value(), where + ": satellite nodes need sat_params");
                require(!n.uav, where + ": satellite nodes take no uav_params");
                const SatParams& p = *n.sat;
                require(p.op_energy_per_slot_j >= 0 && p.rx_power_us_w >= 0 &&
                            p.rx_power_ss_w >= 0 && p.tx_power_ss_w >= 0 && p.tx_power_sg_w >= 0,
                        where + ": satellite powers must be >= 0");
                break;
            }
        }
    }

    s.task_by_id.clear();
    for (int i = 0; i < static_cast<int>(s.tasks.size()); ++i) {
        const TaskSpec& t = s.tasks[i];
        const std::string where = "task '" + t.id + "'";
        require(valid_id(t.id), "task id '" + t.id + "' must match [A-Za-z0-9_.-]+");
        require(s.task_by_id.emplace(t.id, i).second, "duplicate task id '" + t.id + "'");
        int src = s.node_index(t.source);
        int dst = s.node_index(t.destination);
        require(src >= 0, where + ": unknown source node '" + t.source + "'");
        require(dst >= 0, where + ": unknown destination node '" + t.destination + "'");
        require(t.source != t.destination, where + ": source equals destination");
        require(s.nodes[src].cls == NodeClass::Ground, where + ": source must be a ground node");
        require(s.nodes[dst].cls == NodeClass::Ground,
                where + ": destination must be a ground node");
        require(t.arrival_slot >= 1 && t.arrival_slot <= s.slot_count,
                where + ": arrival_slot out of [1, slot_count]");
        require(t.data_size_mbit > 0, where + ": data_size_mbit must be > 0");
        require(t.comm_demand_mbit > 0, where + ": comm_demand_mbit must be > 0");
        require(t.storage_demand_units >= 0, where + ": storage_demand_units must be >= 0");
        require(!t.vnfs.empty(), where + ": needs at least one VNF");
        for (int k = 0; k < static_cast<int>(t.vnfs.size()); ++k) {
            require(t.vnfs[k].index == k + 1, where + ": vnf indices must run 1..R in order");
            require(t.vnfs[k].compute_demand_units > 0,
                    where + ": vnf compute_demand_units must be > 0");
        }
    }

    if (s.task_generation) {
        const TaskGenConfig& g = *s.task_generation;
        require(g.count >= 0, "task_generation: count must be >= 0");
        require(g.bounds.min_mbit > 0, "task_generation: min_mbit must be > 0");
        require(g.bounds.min_mbit <= g.bounds.max_mbit, "task_generation: min_mbit > max_mbit");
        require(g.stagger_max_slot >= 1, "task_generation: stagger_max_slot must be >= 1");
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario s = scenario_from_json_text(buf.str());
    validate_scenario(s);
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << scenario_to_json_text(s);
}

// ------------------------------------------------------------- generation

GeneratedTasks generate_tasks(const Scenario& base, int count, std::uint64_t seed,
                              const TaskGenBounds& bounds, int stagger_max_slot) {
    require(count >= 0, "generate_tasks: count must be >= 0");
    require(bounds.min_mbit > 0 && bounds.min_mbit <= bounds.max_mbit,
            "generate_tasks: bad data size bounds");

    // Ground coverage disk of each UAV at slot 1 (sources live at z = 0).
    struct Disk {
        double x, y, r;
    };
    std::vector<Disk> disks;
    for (const auto& n : base.nodes) {
        if (n.cls != NodeClass::Uav) continue;
        const Vec3& p = n.positions_m.front();
        double range = base.connectivity.g2u_max_range_m;
        if (!std::isfinite(range)) {
            disks.push_back({p.x(), p.y(), 2.0 * std::hypot(p.x(), p.y()) + 1000.0});
            continue;
        }
        double rr = range * range - p.z() * p.z();
        if (rr > 0) disks.push_back({p.x(), p.y(), std::sqrt(rr)});
    }
    require(!disks.empty(), "generate_tasks: no UAV has ground coverage");

    std::vector<int> dests;
    for (int i = 0; i < static_cast<int>(base.nodes.size()); ++i)
        if (base.nodes[i].cls == NodeClass::Ground) dests.push_back(i);
    require(!dests.empty(), "generate_tasks: scenario has no ground node to deliver to");

    double lo_x = disks[0].x - disks[0].r, hi_x = disks[0].x + disks[0].r;
    double lo_y = disks[0].y - disks[0].r, hi_y = disks[0].y + disks[0].r;
    for (const auto& d : disks) {
        lo_x = std::min(lo_x, d.x - d.r);
        hi_x = std::max(hi_x, d.x + d.r);
        lo_y = std::min(lo_y, d.y - d.r);
        hi_y = std::max(hi_y, d.y + d.r);
    }

    int width = 1, probe = std::max(count, 1);
    while (probe >= 10) {
        ++width;
        probe /= 10;
    }
    auto pad = [width](int v) {
        std::string s = std::to_string(v);
        return std::string(width - std::min<size_t>(width, s.size()), '0') + s;
    };

    Rng rng(seed);
    GeneratedTasks out;
    for (int i = 1; i <= count; ++i) {
        TaskSpec t;
        t.id = "t" + pad(i);
        t.data_size_mbit = rng.uniform(bounds.min_mbit, bounds.max_mbit);
        t.arrival_slot = stagger_max_slot <= 1
                             ? 1
                             : static_cast<int>(rng.uniform_int(
                                   1, std::min(stagger_max_slot, base.slot_count)));
        int dest = dests.size() == 1
                       ? dests[0]
                       : static_cast<int>(rng.uniform_int(0, dests.size() - 1));
        double x = 0, y = 0;
        for (int tries = 0;; ++tries) {
            require(tries < 100000, "generate_tasks: coverage sampling did not converge");
            x = rng.uniform(lo_x, hi_x);
            y = rng.uniform(lo_y, hi_y);
            bool inside = false;
            for (const auto& d : disks)
                if ((x - d.x) * (x - d.x) + (y - d.y) * (y - d.y) <= d.r * d.r) {
                    inside = true;
                    break;
                }
            if (inside) break;
        }
        NodeSpec src;
        src.id = "src_" + pad(i);
        src.cls = NodeClass::Ground;
        src.positions_m.assign(base.slot_count, Vec3(x, y, 0));
        out.source_nodes.push_back(src);

        t.source = src.id;
        t.destination = base.nodes[dest].id;
        t.comm_demand_mbit = t.data_size_mbit;
        t.storage_demand_units = t.data_size_mbit / 10.0;
        t.vnfs.push_back({1, std::ceil(t.data_size_mbit / 10.0)});
        out.tasks.push_back(t);
    }
    return out;
}

Scenario with_generated_tasks(const Scenario& base, std::uint64_t seed) {
    Scenario s = base;
    if (!s.task_generation || s.task_generation->count == 0) {
        validate_scenario(s);
        return s;
    }
    const TaskGenConfig& g = *s.task_generation;
    GeneratedTasks gen = generate_tasks(base, g.count, seed, g.bounds, g.stagger_max_slot);
    for (auto& n : gen.source_nodes) s.nodes.push_back(std::move(n));
    for (auto& t : gen.tasks) s.tasks.push_back(std::move(t));
    validate_scenario(s);
    return s;
}

}  // namespace sagin
