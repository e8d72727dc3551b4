#include "sagin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "sagin/energy.hpp"

namespace sagin {

namespace {

constexpr double kSlack = 1e-12;

bool fits(double residual, double need) {
    return residual + kSlack * std::max(1.0, need) >= need;
}

/// One complete journey of one task: its link uses, the vertices it touches,
/// its chain placements, and the pre-aggregated resource charges.
struct Plan {
    std::vector<int> links;
    std::vector<TxKey> vertices;
    std::vector<std::pair<int, TxKey>> placements;  // (vnf index, vertex)
    std::vector<std::pair<int, double>> link_charge;    // link id -> amount
    std::vector<std::pair<int, double>> vertex_charge;  // vertex id -> compute units
    std::vector<std::pair<int, double>> node_energy;    // node -> joules
};

class Searcher {
  public:
    Searcher(const Scenario& s, const RtegGraph& g, const OracleBudget& b)
        : s_(s), g_(g), budget_(b) {}

    OracleResult run() {
        OracleResult res;
        if (static_cast<int>(s_.tasks.size()) > budget_.max_tasks ||
            g_.node_count() > budget_.max_nodes || g_.slot_count > budget_.max_slots)
            return res;  // BudgetExceeded, zero work

        link_residual_.reserve(g_.links.size());
        for (const LinkState& l : g_.links) link_residual_.push_back(l.capacity);
        compute_residual_.assign(g_.vertices.size(), 0);
        for (const TxNode& v : g_.vertices)
            compute_residual_[g_.vertex_id(v.key())] =
                s_.nodes[v.node].compute_capacity_units;
        energy_residual_.assign(g_.node_count(), 0);
        for (int n = 0; n < g_.node_count(); ++n)
            energy_residual_[n] = s_.nodes[n].energy_budget_j - standing_energy(s_, n);

        task_order_.resize(s_.tasks.size());
        for (int k = 0; k < static_cast<int>(s_.tasks.size()); ++k) task_order_[k] = k;
        std::sort(task_order_.begin(), task_order_.end(),
                  [&](int a, int b) { return s_.task(a).id < s_.task(b).id; });

        plans_.resize(s_.tasks.size());
        for (int k : task_order_) {
            enumerate_plans(k);
            if (exceeded_) break;
        }
        chosen_.assign(s_.tasks.size(), -1);
        if (!exceeded_) dfs(0, 0);

        res.status = exceeded_ ? OracleStatus::BudgetExceeded : OracleStatus::Optimal;
        res.optimal_q = best_q_;
        res.enumerations = enumerations_;
        res.witness = assemble(best_chosen_);
        return res;
    }

  private:
    const Scenario& s_;
    const RtegGraph& g_;
    OracleBudget budget_;

    std::vector<double> link_residual_;
    std::vector<double> compute_residual_;
    std::vector<double> energy_residual_;
    std::vector<int> task_order_;
    std::vector<std::vector<Plan>> plans_;  // by task index
    std::vector<int> chosen_;               // by position in task_order_
    std::vector<int> best_chosen_;
    bool have_best_ = false;
    int best_q_ = 0;
    long long enumerations_ = 0;
    bool exceeded_ = false;

    bool tick() {
        if (++enumerations_ > budget_.max_enumerations) exceeded_ = true;
        return !exceeded_;
    }

    // --- per-task plan enumeration ---
    void enumerate_plans(int k) {
        const TaskSpec& tk = s_.task(k);
        const int src = s_.node_index(tk.source);
        const int dst = s_.node_index(tk.destination);
        std::vector<TxKey> walk;
        std::vector<int> walk_links;
        std::vector<char> used(g_.vertices.size(), 0);
        for (int tau = tk.arrival_slot; tau <= g_.slot_count && !exceeded_; ++tau) {
            const TxKey start{src, tau};
            walk.push_back(start);
            used[g_.vertex_id(start)] = 1;
            extend(k, dst, walk, walk_links, used);
            used[g_.vertex_id(start)] = 0;
            walk.pop_back();
        }
    }

    void extend(int k, int dst, std::vector<TxKey>& walk, std::vector<int>& walk_links,
                std::vector<char>& used) {
        if (!tick()) return;
        const TxKey here = walk.back();
        if (here.node == dst) {
            emit_assignments(k, walk, walk_links);
            return;
        }
        for (int lid : g_.out_links[g_.vertex_id(here)]) {
            if (exceeded_) return;
            const LinkState& l = g_.links[lid];
            const TxKey nxt = l.to;
            // ground stations never relay: once airborne, ground is terminal
            if (g_.node_classes[nxt.node] == NodeClass::Ground && nxt.node != dst) continue;
            const int vid = g_.vertex_id(nxt);
            if (used[vid]) continue;
            used[vid] = 1;
            walk.push_back(nxt);
            walk_links.push_back(lid);
            extend(k, dst, walk, walk_links, used);
            walk_links.pop_back();
            walk.pop_back();
            used[vid] = 0;
        }
    }

    /// All in-order mappings of the chain onto the walk's aerial vertices.
    void emit_assignments(int k, const std::vector<TxKey>& walk,
                          const std::vector<int>& walk_links) {
        const TaskSpec& tk = s_.task(k);
        std::vector<TxKey> aerial;
        for (const TxKey& v : walk)
            if (g_.node_classes[v.node] != NodeClass::Ground) aerial.push_back(v);
        const int r = static_cast<int>(tk.vnfs.size());
        const int m = static_cast<int>(aerial.size());
        if (m == 0) {
            if (r == 0) push_plan(k, walk, walk_links, {});
            return;
        }
        std::vector<int> slot_of(r, 0);
        // non-decreasing positions: slot_of[0] <= slot_of[1] <= ... < m
        auto rec = [&](auto&& self, int idx, int min_pos) -> void {
            if (exceeded_) return;
            if (idx == r) {
                std::vector<std::pair<int, TxKey>> placements;
                placements.reserve(r);
                for (int i = 0; i < r; ++i)
                    placements.push_back({tk.vnfs[i].index, aerial[slot_of[i]]});
                push_plan(k, walk, walk_links, std::move(placements));
                return;
            }
            for (int p = min_pos; p < m; ++p) {
                if (!tick()) return;
                slot_of[idx] = p;
                self(self, idx + 1, p);
            }
        };
        rec(rec, 0, 0);
    }

    void push_plan(int k, const std::vector<TxKey>& walk, const std::vector<int>& walk_links,
                   std::vector<std::pair<int, TxKey>> placements) {
        const TaskSpec& tk = s_.task(k);
        Plan p;
        p.links = walk_links;
        p.vertices = walk;
        p.placements = std::move(placements);
        std::map<int, double> link_charge, vertex_charge, node_energy;
        for (int lid : walk_links) {
            const LinkState& l = g_.links[lid];
            if (l.cls == LinkClass::Storage) {
                link_charge[lid] += tk.storage_demand_units;
            } else {
                link_charge[lid] += tk.comm_demand_mbit;
                LinkEnergy le = comm_energy(s_, l, tk.comm_demand_mbit);
                if (le.tx_j > 0) node_energy[l.from.node] += le.tx_j;
                if (le.rx_j > 0) node_energy[l.to.node] += le.rx_j;
            }
        }
        for (const auto& [vnf, vertex] : p.placements) {
            const double sig = tk.vnfs[vnf - 1].compute_demand_units;
            vertex_charge[g_.vertex_id(vertex)] += sig;
            node_energy[vertex.node] +=
                compute_energy(s_, g_.node_classes[vertex.node], sig);
        }
        p.link_charge.assign(link_charge.begin(), link_charge.end());
        p.vertex_charge.assign(vertex_charge.begin(), vertex_charge.end());
        p.node_energy.assign(node_energy.begin(), node_energy.end());
        plans_[k].push_back(std::move(p));
    }

    // --- joint search ---
    bool apply(const Plan& p, int sign) {
        if (sign > 0) {
            for (const auto& [lid, amt] : p.link_charge)
                if (!fits(link_residual_[lid], amt)) return false;
            for (const auto& [vid, amt] : p.vertex_charge)
                if (!fits(compute_residual_[vid], amt)) return false;
            for (const auto& [n, amt] : p.node_energy)
                if (!fits(energy_residual_[n], amt)) return false;
        }
        for (const auto& [lid, amt] : p.link_charge) link_residual_[lid] -= sign * amt;
        for (const auto& [vid, amt] : p.vertex_charge) compute_residual_[vid] -= sign * amt;
        for (const auto& [n, amt] : p.node_energy) energy_residual_[n] -= sign * amt;
        return true;
    }

    void dfs(int pos, int q) {
        if (exceeded_) return;
        const int n = static_cast<int>(task_order_.size());
        // Leaves are visited in lexicographic order (plans first, skip last),
        // so keeping only strict improvements returns the lexicographically
        // smallest optimal assignment. Branches that can at best tie are cut.
        if (have_best_ && q + (n - pos) <= best_q_) return;
        if (pos == n) {
            if (!have_best_ || q > best_q_) {
                have_best_ = true;
                best_q_ = q;
                best_chosen_ = chosen_;
            }
            return;
        }
        const int k = task_order_[pos];
        for (int pi = 0; pi < static_cast<int>(plans_[k].size()); ++pi) {
            if (!tick()) return;
            if (!apply(plans_[k][pi], +1)) continue;
            chosen_[pos] = pi;
            dfs(pos + 1, q + 1);
            apply(plans_[k][pi], -1);
            if (exceeded_) return;
        }
        chosen_[pos] = -1;
        dfs(pos + 1, q);
    }

    Deployment assemble(const std::vector<int>& chosen) {
        Deployment d;
        d.completed.assign(s_.tasks.size(), 0);
        if (chosen.empty()) return d;
        for (int pos = 0; pos < static_cast<int>(task_order_.size()); ++pos) {
            const int k = task_order_[pos];
            const int pi = chosen[pos];
            if (pi < 0) continue;
            const Plan& p = plans_[k][pi];
            d.completed[k] = 1;
            for (int lid : p.links) d.z.push_back({k, lid});
            for (const TxKey& v : p.vertices) d.y.push_back({k, v});
            for (const auto& [vnf, vertex] : p.placements) d.x.push_back({k, vnf, vertex});
        }
        d.canonicalize();
        return d;
    }
};

}  // namespace

OracleResult solve_exact(const Scenario& s, const RtegGraph& g, const OracleBudget& budget) {
    Searcher searcher(s, g, budget);
    return searcher.run();
}

}  // namespace sagin
