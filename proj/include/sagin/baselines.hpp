#pragma once

#include <optional>
#include <string>

#include "sagin/matchgame.hpp"

namespace sagin {

/// Contention resolved in favor of the smallest task; bumping allowed.
EngineResult run_aaso(const Scenario& s, const RtegGraph& g, const EngineOptions& opt = {});

/// Strict arrival order, first fit, never revokes an accepted placement.
EngineResult run_fcfs(const Scenario& s, const RtegGraph& g, const EngineOptions& opt = {});

/// Policy for a CLI-style name ("mg-rteg", "aaso", "fcfs"); nullopt if unknown.
std::optional<MatchPolicy> policy_by_name(const std::string& name);

}  // namespace sagin
