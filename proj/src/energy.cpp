#include "sagin/energy.hpp"

#include <cmath>

#include "sagin/deploy.hpp"

namespace sagin {

double uav_hover_power(const UavParams& uav, const EnergyParams& env) {
    double g = env.gravity_m_per_s2;
    double delta = std::sqrt(g * g * g / (2.0 * M_PI * env.air_density_kg_per_m3));
    double m3 = uav.mass_kg * uav.mass_kg * uav.mass_kg;
    return delta * std::sqrt(m3 / (uav.propeller_radius_m * uav.propeller_radius_m *
                                   uav.propeller_count));
}

double uav_move_power(const UavParams& uav, const EnergyParams& env, double speed_m_per_s) {
    if (speed_m_per_s < 0 || speed_m_per_s > uav.v_max_m_per_s * (1 + 1e-9))
        throw std::domain_error("uav_move_power: speed outside [0, v_max]");
    return speed_m_per_s / uav.v_max_m_per_s * (uav.p_max_w - uav_hover_power(uav, env));
}

double uav_path_energy(const UavParams& uav, const EnergyParams& env, const Vec3& pos_now,
                       const Vec3& pos_next, double speed_m_per_s, double slot_length_s) {
    double hover = uav_hover_power(uav, env) * slot_length_s;
    double dist = (pos_next - pos_now).norm();
    if (dist == 0) return hover;
    if (speed_m_per_s <= 0) throw std::domain_error("uav_path_energy: moving at zero speed");
    return uav_move_power(uav, env, speed_m_per_s) * dist / speed_m_per_s + hover;
}

double uav_slot_path_energy(const Scenario& s, int node, int slot) {
    const NodeSpec& n = s.node(node);
    if (!n.uav) throw std::domain_error("uav_slot_path_energy: node '" + n.id + "' is not a UAV");
    if (slot >= s.slot_count)  // no next position: hold position
        return uav_hover_power(*n.uav, s.energy) * s.slot_length_s;
    const Vec3& now = n.positions_m[slot - 1];
    const Vec3& next = n.positions_m[slot];
    double dist = (next - now).norm();
    if (dist == 0) return uav_hover_power(*n.uav, s.energy) * s.slot_length_s;
    // the move is spread over the slot
    return uav_path_energy(*n.uav, s.energy, now, next, dist / s.slot_length_s,
                           s.slot_length_s);
}

LinkEnergy comm_energy(const Scenario& s, const LinkState& link, double phi_mbit) {
    LinkEnergy e;
    if (link.cls == LinkClass::Storage) return e;
    double seconds = transmission_seconds(phi_mbit, link.rate_bps);
    const NodeSpec& from = s.node(link.from.node);
    const NodeSpec& to = s.node(link.to.node);
    if (from.cls == NodeClass::Uav) e.tx_j = from.uav->tx_power_w * seconds;
    if (from.cls == NodeClass::Satellite) {
        if (to.cls == NodeClass::Satellite) e.tx_j = from.sat->tx_power_ss_w * seconds;
        if (to.cls == NodeClass::Ground) e.tx_j = from.sat->tx_power_sg_w * seconds;
        // satellite-to-UAV sending carries no radio term
    }
    if (to.cls == NodeClass::Satellite) {
        if (from.cls == NodeClass::Uav) e.rx_j = to.sat->rx_power_us_w * seconds;
        if (from.cls == NodeClass::Satellite) e.rx_j = to.sat->rx_power_ss_w * seconds;
    }
    return e;
}

double compute_energy(const Scenario& s, NodeClass cls, double sigma_units) {
    switch (cls) {
        case NodeClass::Uav: return sigma_units * s.energy.compute_energy_uav_j_per_unit;
        case NodeClass::Satellite: return sigma_units * s.energy.compute_energy_sat_j_per_unit;
        case NodeClass::Ground: return 0;
    }
    return 0;
}

double standing_energy(const Scenario& s, int node) {
    const NodeSpec& n = s.node(node);
    if (n.cls == NodeClass::Uav) {
        double sum = 0;
        for (int t = 1; t <= s.slot_count; ++t) sum += uav_slot_path_energy(s, node, t);
        return sum;
    }
    if (n.cls == NodeClass::Satellite) return n.sat->op_energy_per_slot_j * s.slot_count;
    return 0;
}

EnergyLedger build_energy_ledger(const Scenario& s, const RtegGraph& g, const Deployment& d) {
    EnergyLedger ledger;
    ledger.nodes.resize(s.nodes.size());
    for (size_t i = 0; i < s.nodes.size(); ++i) {
        NodeEnergy& e = ledger.nodes[i];
        e.budget_j = s.nodes[i].energy_budget_j;
        switch (s.nodes[i].cls) {
            case NodeClass::Uav:
                e.path_j = standing_energy(s, static_cast<int>(i));
                break;
            case NodeClass::Satellite:
                e.op_j = standing_energy(s, static_cast<int>(i));
                break;
            case NodeClass::Ground:
                break;
        }
    }
    for (const auto& use : d.z) {
        const LinkState& l = g.links[use.link];
        LinkEnergy e = comm_energy(s, l, s.task(use.task).comm_demand_mbit);
        ledger.nodes[l.from.node].comm_j += e.tx_j;
        ledger.nodes[l.to.node].comm_j += e.rx_j;
    }
    for (const auto& p : d.x) {
        const NodeSpec& n = s.node(p.vertex.node);
        double sigma = s.task(p.task).vnfs.at(p.vnf_index - 1).compute_demand_units;
        ledger.nodes[p.vertex.node].compute_j += compute_energy(s, n.cls, sigma);
    }
    return ledger;
}

}  // namespace sagin
