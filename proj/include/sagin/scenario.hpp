#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sagin/channel.hpp"
#include "sagin/types.hpp"

namespace sagin {

/// Rotor-craft parameters that drive the propulsion power model.
struct UavParams {
    double mass_kg = 0;
    double propeller_radius_m = 0;
    int propeller_count = 0;
    double v_max_m_per_s = 0;
    double p_max_w = 0;     // full-speed propulsion power
    double tx_power_w = 0;  // transmit power on any outgoing link
};

/// Satellite per-slot operating energy and per-link-family radio powers.
struct SatParams {
    double op_energy_per_slot_j = 0;
    double rx_power_us_w = 0;  // receiving from a UAV
    double rx_power_ss_w = 0;  // receiving from another satellite
    double tx_power_ss_w = 0;  // transmitting to another satellite
    double tx_power_sg_w = 0;  // transmitting to the ground
};

struct NodeSpec {
    std::string id;
    NodeClass cls = NodeClass::Ground;
    std::vector<Vec3> positions_m;  // one entry per slot
    double compute_capacity_units = 0;  // per-slot VNF capacity (C_n)
    double storage_capacity_units = 0;  // carry-over capacity (G_n)
    double energy_budget_j = 0;         // whole-horizon budget (E_MAX)
    std::optional<UavParams> uav;
    std::optional<SatParams> sat;
};

struct VnfRequirement {
    int index = 0;  // position in the chain, 1-based
    double compute_demand_units = 0;
};

struct TaskSpec {
    std::string id;
    std::string source;       // ground node id
    std::string destination;  // ground node id
    int arrival_slot = 1;
    double data_size_mbit = 0;
    double comm_demand_mbit = 0;      // charged per traversed link (phi_k)
    double storage_demand_units = 0;  // charged per storage link (delta_k)
    std::vector<VnfRequirement> vnfs;

    double total_compute_demand() const;
};

/// Physics constants and the energy cost of one compute unit per node class.
struct EnergyParams {
    double gravity_m_per_s2 = 9.8;
    double air_density_kg_per_m3 = 1.225;
    double compute_energy_uav_j_per_unit = 1.0;
    double compute_energy_sat_j_per_unit = 1.0;
};

/// Which node pairs get spatial links. Ranges are straight-line metres.
struct ConnectivityRule {
    double g2u_max_range_m = std::numeric_limits<double>::infinity();
    double u2u_max_range_m = std::numeric_limits<double>::infinity();
    double u2s_max_range_m = std::numeric_limits<double>::infinity();
    double s2s_max_range_m = std::numeric_limits<double>::infinity();
    double s2g_max_range_m = std::numeric_limits<double>::infinity();
    /// Restrict each UAV's satellite links to its nearest satellite.
    bool uav_to_nearest_satellite_only = true;
};

struct TaskGenBounds {
    double min_mbit = 10;
    double max_mbit = 50;
};

struct TaskGenConfig {
    int count = 0;
    TaskGenBounds bounds;
    /// 1 = everything arrives in slot 1; otherwise arrivals are uniform in
    /// [1, min(stagger_max_slot, slot_count)].
    int stagger_max_slot = 1;
};

struct Scenario {
    int slot_count = 0;
    double slot_length_s = 0;
    std::uint64_t rng_seed = 1;
    ChannelParams channel;
    EnergyParams energy;
    ConnectivityRule connectivity;
    std::vector<NodeSpec> nodes;
    std::vector<TaskSpec> tasks;
    std::optional<TaskGenConfig> task_generation;

    int node_index(const std::string& id) const;  // -1 if unknown
    int task_index(const std::string& id) const;
    const NodeSpec& node(int index) const { return nodes.at(index); }
    const TaskSpec& task(int index) const { return tasks.at(index); }

    std::map<std::string, int> node_by_id;  // rebuilt by validate()
    std::map<std::string, int> task_by_id;
};

/// Structural and semantic checks; rebuilds the id indexes. Throws
/// ValidationError naming the offending field/node/task.
void validate_scenario(Scenario& s);

Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);

/// Parse + validate a scenario document.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

struct GeneratedTasks {
    std::vector<NodeSpec> source_nodes;  // one ground node per task
    std::vector<TaskSpec> tasks;
};

/// Deterministically derive `count` tasks from (seed, bounds): data size
/// uniform in [min,max] Mbit, one chain function of ceil(size/10) compute
/// units, comm demand = size, storage demand = size/10, source placed
/// uniformly inside the union of the UAVs' slot-1 ground coverage disks and
/// materialized as a fresh ground node, destination drawn from the base
/// scenario's ground nodes.
GeneratedTasks generate_tasks(const Scenario& base, int count, std::uint64_t seed,
                              const TaskGenBounds& bounds, int stagger_max_slot = 1);

/// Apply the scenario's task_generation section (if any) with the given seed
/// and return the enlarged, revalidated scenario.
Scenario with_generated_tasks(const Scenario& base, std::uint64_t seed);

}  // namespace sagin
