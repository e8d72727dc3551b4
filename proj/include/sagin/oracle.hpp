#pragma once

#include <cstdint>

#include "sagin/deploy.hpp"
#include "sagin/rteg.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

/// Hard caps for the exhaustive solver. Instances beyond the caps, or
/// searches that would take more than `max_enumerations` steps, finish with
/// BudgetExceeded instead of silently returning a non-optimal answer.
struct OracleBudget {
    int max_tasks = 3;
    int max_nodes = 4;
    int max_slots = 3;
    long long max_enumerations = 10'000'000;
};

enum class OracleStatus { Optimal, BudgetExceeded };

struct OracleResult {
    OracleStatus status = OracleStatus::BudgetExceeded;
    /// With status Optimal: the true maximum number of completable tasks.
    /// Otherwise: the best value found before the budget ran out.
    int optimal_q = 0;
    Deployment witness;  ///< a deployment attaining optimal_q; passes the checker
    long long enumerations = 0;
};

/// Exhaustive search over complete journeys: for every task, every simple
/// walk from a copy of its source (departing at or after arrival) to a copy
/// of its destination, combined with every in-order assignment of its chain
/// onto the walk's aerial vertices; tasks left incomplete consume nothing.
/// Tasks are combined in ascending-id order under joint capacity and energy
/// accounting, and the first deployment attaining the maximum in enumeration
/// order is returned, so results are deterministic.
OracleResult solve_exact(const Scenario& s, const RtegGraph& g,
                         const OracleBudget& budget = {});

}  // namespace sagin
