#pragma once

#include <string>
#include <vector>

#include "sagin/energy.hpp"
#include "sagin/rteg.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

/// VNF `vnf_index` of task `task` runs on graph vertex `vertex`.
struct Placement {
    int task = -1;
    int vnf_index = 0;  // 1-based chain position
    TxKey vertex;
    auto operator<=>(const Placement&) const = default;
};

/// Task data occupies a vertex at some point of its journey.
struct Visit {
    int task = -1;
    TxKey vertex;
    auto operator<=>(const Visit&) const = default;
};

/// Task data crosses a link (spatial hop or storage carry-over).
struct LinkUse {
    int task = -1;
    int link = -1;
    auto operator<=>(const LinkUse&) const = default;
};

/// A complete assignment: placements (x), visits (y), link uses (z) and the
/// per-task completion verdicts. Partial journeys of incomplete tasks stay
/// recorded — their resource use still counts.
struct Deployment {
    std::vector<Placement> x;
    std::vector<Visit> y;
    std::vector<LinkUse> z;
    std::vector<char> completed;  // indexed by task

    /// Sort entries into the canonical order (stable artifacts, easy diffs).
    void canonicalize();
};

/// Constraint families of the deployment feasibility system, named by the
/// published numbering they implement.
enum class ConstraintId {
    C15,  // every VNF of a completed task placed exactly once
    C16,  // placements only on visited vertices
    C17,  // at most one outgoing link use per task and vertex, only if visited
    C18,  // storage link load within the node's carry-over capacity
    C19,  // per-slot compute load within node capacity
    C21,  // whole-horizon node energy within budget
    C22,  // spatial link load within rate * slot length
    C23,  // completed task leaves its source exactly once
    C24,  // completed task reaches its destination exactly once
    C25,  // flow conservation at intermediate vertices
};
const char* to_string(ConstraintId id);

struct Violation {
    ConstraintId id;
    std::string subject;  // offending task / vertex / link
    std::string detail;
};

/// One line per violation: "<id> <subject>: <detail>".
std::string violation_report(const std::vector<Violation>& v);

/// Evaluate every constraint family against the deployment; empty result
/// means feasible. Incomplete tasks are exempt from C15/C23/C24/C25 but
/// their partial resource usage still counts toward capacities and energy.
std::vector<Violation> check_feasibility(const Scenario& s, const RtegGraph& g,
                                         const Deployment& d);

/// Number of completed tasks (the objective).
int objective_q(const Deployment& d);

/// True iff the task's recorded journey is a single connected walk from a
/// copy of its source (departing no earlier than its arrival slot) to a copy
/// of its destination, with every VNF of its chain placed exactly once on
/// the walk's aerial vertices in chain order.
bool mark_completed(const Scenario& s, const RtegGraph& g, const Deployment& d, int task);

}  // namespace sagin
