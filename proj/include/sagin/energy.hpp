#pragma once

#include <vector>

#include "sagin/rteg.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

struct Deployment;  // deploy.hpp

/// Hovering power of a rotor craft: sqrt(g^3 / (2*pi*rho)) * sqrt(m^3 / (r^2 * n)).
double uav_hover_power(const UavParams& uav, const EnergyParams& env);

/// Extra propulsion power at ground speed v: (v / v_max) * (p_max - p_hover).
/// Domain: 0 <= v <= v_max.
double uav_move_power(const UavParams& uav, const EnergyParams& env, double speed_m_per_s);

/// Propulsion energy of one slot: move power times travel time plus hover
/// power times the slot length. Domain: 0 < v <= v_max when the
/// displacement is nonzero.
double uav_path_energy(const UavParams& uav, const EnergyParams& env, const Vec3& pos_now,
                       const Vec3& pos_next, double speed_m_per_s, double slot_length_s);

/// Propulsion energy a UAV spends in `slot` following its trajectory, moving
/// at displacement/slot_length toward its next position (the final slot only
/// hovers). Throws std::domain_error for non-UAV nodes.
double uav_slot_path_energy(const Scenario& s, int node, int slot);

/// Energy one transmission of `phi_mbit` over a link costs its endpoints.
/// Ground stations are unbudgeted and satellite-to-UAV sending is free to
/// the satellite (its radio budget covers inter-satellite, uplink-receive
/// and ground-transmit chains only); storage links cost nothing.
struct LinkEnergy {
    double tx_j = 0;  // charged to the sending node
    double rx_j = 0;  // charged to the receiving node
};
LinkEnergy comm_energy(const Scenario& s, const LinkState& link, double phi_mbit);

/// Energy of executing `sigma_units` of VNF work on a node class.
double compute_energy(const Scenario& s, NodeClass cls, double sigma_units);

/// Trajectory (UAV) or operating (satellite) energy over the whole horizon;
/// spent regardless of any deployment. Zero for ground nodes.
double standing_energy(const Scenario& s, int node);

struct NodeEnergy {
    double budget_j = 0;
    double path_j = 0;     // propulsion, whole horizon
    double op_j = 0;       // satellite operating, whole horizon
    double comm_j = 0;     // radio energy of this deployment
    double compute_j = 0;  // VNF energy of this deployment
    double spent_j() const { return path_j + op_j + comm_j + compute_j; }
};

/// Whole-horizon energy of a deployment, one row per node. For every node
/// of a feasible deployment, spent_j() <= budget_j.
struct EnergyLedger {
    std::vector<NodeEnergy> nodes;
};
EnergyLedger build_energy_ledger(const Scenario& s, const RtegGraph& g, const Deployment& d);

}  // namespace sagin
