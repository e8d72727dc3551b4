#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sagin {

/// Per-slot observables of one simulation run. Utilization is the fraction
/// of that slot's compute capacity allocated to placements; the vnf columns
/// compare compute placed during the slot against the total outstanding
/// demand of tasks that were pending when the slot began.
struct SlotMetrics {
    int slot = 0;
    int completed_cumulative = 0;
    double util_uav = 0;
    double util_satellite = 0;
    double vnf_compute_used_units = 0;
    double vnf_compute_required_units = 0;
};

struct SimReport {
    std::string algorithm;
    std::string scenario_name;
    std::uint64_t seed = 0;
    std::vector<SlotMetrics> slots;
    int final_q = 0;
    int violation_count = 0;
    /// Wall-clock time of the run. Reported in the JSON output only; the
    /// CSV stays byte-deterministic and omits it.
    double wall_seconds = 0;

    /// Capacity-weighted mean utilization across the horizon (both classes).
    double overall_utilization(double uav_capacity_per_slot,
                               double sat_capacity_per_slot) const;
};

/// CSV with one row per (run, slot); fixed column order:
/// algorithm,scenario,seed,slot,completed_cumulative,util_uav,util_satellite,
/// vnf_compute_used_units,vnf_compute_required_units,final_q,violations
std::string reports_to_csv(const std::vector<SimReport>& reports);
std::vector<SimReport> reports_from_csv(const std::string& text);

std::string reports_to_json(const std::vector<SimReport>& reports);

/// Side-by-side means over seeds, plus how often the reference algorithm
/// (mg-rteg when present, else the alphabetically first) dominates each
/// other algorithm. Fractions are over seeds present for both algorithms.
struct Comparison {
    std::string reference;
    std::vector<std::string> algorithms;  // column order, reference first
    int seed_count = 0;
    std::vector<int> slots;
    // mean_completed[i][j]: mean cumulative completions of algorithms[j] at slots[i]
    std::vector<std::vector<double>> mean_completed;
    /// fraction of seeds where the reference's cumulative count is >= the
    /// other algorithm's in every slot
    std::map<std::string, double> frac_ge_every_slot;
    /// fraction of seeds where the reference is strictly ahead at the final slot
    std::map<std::string, double> frac_gt_final;
};
Comparison compare(const std::vector<SimReport>& reports);
std::string comparison_to_csv(const Comparison& c);

}  // namespace sagin
