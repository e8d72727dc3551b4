#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sagin/deploy.hpp"
#include "sagin/energy.hpp"
#include "sagin/report.hpp"
#include "sagin/rteg.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

// ---------------------------------------------------------------------------
// Policies: how compute nodes rank competing tasks.
// ---------------------------------------------------------------------------

enum class PolicyKind {
    MgRteg,  ///< nodes prefer larger total demand; bumping allowed
    Aaso,    ///< nodes prefer smaller total demand; bumping allowed
    Fcfs,    ///< first-come-first-served by arrival slot; never bumps
};

struct MatchPolicy {
    PolicyKind kind = PolicyKind::MgRteg;

    std::string name() const;
    bool allows_bumping() const { return kind != PolicyKind::Fcfs; }
    /// True if task a outranks task b in a node's preference list.
    bool node_prefers(const Scenario& s, int task_a, int task_b) const;

    static MatchPolicy mg_rteg() { return {PolicyKind::MgRteg}; }
    static MatchPolicy aaso() { return {PolicyKind::Aaso}; }
    static MatchPolicy fcfs() { return {PolicyKind::Fcfs}; }
};

// ---------------------------------------------------------------------------
// Engine state.
// ---------------------------------------------------------------------------

struct TaskProgress {
    TxKey at{-1, 0};      ///< vertex currently holding the task's data
    int next_vnf = 1;     ///< first chain index not yet placed
    bool completed = false;
    bool failed = false;  ///< data was dropped (no storage available)
    bool arrived = false;
};

/// A tentative placement made during the current slot's matching phase.
/// It becomes a deployment entry only once the data actually reaches the
/// node during the routing phase.
struct PendingPlacement {
    int task = -1;
    int vnf_index = 0;
    TxKey vertex{-1, 0};
    double sigma = 0;
};

struct EngineState {
    ResidualLayer links;                   // Mbit (spatial) / units (storage)
    std::vector<double> compute_residual;  // per RTEG vertex, units
    std::vector<double> energy_residual;   // per physical node, joules
    std::vector<TaskProgress> progress;    // per task index
    Deployment deployment;

    long proposals_this_slot = 0;
    long bumps_this_slot = 0;
};

/// A task that still wants capacity at a node it ranks, where the node
/// either has spare capacity or holds a task it likes less. An empty list
/// is the matching fixed point the engine must reach every slot.
struct StabilityIssue {
    int slot = 0;
    int task = -1;
    int node = -1;
    std::string detail;
};

// ---------------------------------------------------------------------------
// Preference construction (exposed for tests).
// ---------------------------------------------------------------------------

struct TaskPrefs {
    int task = -1;
    bool satellite_branch = false;  ///< no aerial-only route can serve it
    std::optional<Path> path;       ///< aerial-only route when on the uav branch
    std::vector<int> ranked_nodes;  ///< current-slot aerial nodes along path, in order
};

struct PreferenceLists {
    std::vector<TaskPrefs> tasks;  // pending tasks with unplaced chain entries
    /// node -> competing tasks sorted best-first by the node's preference
    std::map<int, std::vector<int>> by_node;
};

/// Exact test for whether the task's remaining chain could complete without
/// touching a satellite: some loop-free aerial route from its current vertex
/// to the destination, moving over links with residual >= its transfer
/// demand, parking only where residual storage >= its storage demand, whose
/// visited two-layer vertices hold at least the outstanding compute demand.
bool uav_only_feasible(const Scenario& s, const RtegGraph& g,
                       const EngineState& st, int task, int slot);

PreferenceLists build_preferences(const Scenario& s, const RtegGraph& g,
                                  const EngineState& st, int slot,
                                  const MatchPolicy& policy);

// ---------------------------------------------------------------------------
// Running.
// ---------------------------------------------------------------------------

struct EngineOptions {
    bool collect_trace = false;
    std::string scenario_name;  // stamped into the report
    std::uint64_t seed = 0;     // stamped into the report
};

struct EngineResult {
    Deployment deployment;
    SimReport report;
    std::string trace;
    std::vector<long> proposals_per_slot;
    std::vector<long> bumps_per_slot;
    std::vector<StabilityIssue> stability_issues;
    /// Tasks whose engine-side completion flag disagrees with the
    /// independent walk validation; always empty unless the engine has a bug.
    std::vector<std::string> completion_mismatches;
};

/// Runs the per-slot two-phase engine (deferred-acceptance matching, then
/// routing) across the whole horizon under the given policy.
EngineResult run_engine(const Scenario& s, const RtegGraph& g,
                        const MatchPolicy& policy,
                        const EngineOptions& opt = {});

inline EngineResult run_mg_rteg(const Scenario& s, const RtegGraph& g,
                                const EngineOptions& opt = {}) {
    return run_engine(s, g, MatchPolicy::mg_rteg(), opt);
}

}  // namespace sagin
