#include "sagin/baselines.hpp"

namespace sagin {

EngineResult run_aaso(const Scenario& s, const RtegGraph& g, const EngineOptions& opt) {
    return run_engine(s, g, MatchPolicy::aaso(), opt);
}

EngineResult run_fcfs(const Scenario& s, const RtegGraph& g, const EngineOptions& opt) {
    return run_engine(s, g, MatchPolicy::fcfs(), opt);
}

std::optional<MatchPolicy> policy_by_name(const std::string& name) {
    if (name == "mg-rteg") return MatchPolicy::mg_rteg();
    if (name == "aaso") return MatchPolicy::aaso();
    if (name == "fcfs") return MatchPolicy::fcfs();
    return std::nullopt;
}

}  // namespace sagin
