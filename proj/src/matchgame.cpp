#include "sagin/matchgame.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <climits>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "sagin/deploy.hpp"

namespace sagin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;
constexpr double kDemandTol = 1e-9;

/// Admission test used everywhere the engine spends a resource. The slack
/// only absorbs float drift; it is far below the feasibility checker's
/// tolerance, so every admitted charge passes the final audit.
bool fits(double residual, double need) {
    return residual + kSlack * std::max(1.0, need) >= need;
}

std::string fmt_num(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace

// ---------------------------------------------------------------------------
// Policy.
// ---------------------------------------------------------------------------

std::string MatchPolicy::name() const {
    switch (kind) {
        case PolicyKind::MgRteg: return "mg-rteg";
        case PolicyKind::Aaso: return "aaso";
        case PolicyKind::Fcfs: return "fcfs";
    }
    return "?";
}

bool MatchPolicy::node_prefers(const Scenario& s, int task_a, int task_b) const {
    const TaskSpec& a = s.task(task_a);
    const TaskSpec& b = s.task(task_b);
    switch (kind) {
        case PolicyKind::MgRteg:
            if (a.data_size_mbit != b.data_size_mbit) return a.data_size_mbit > b.data_size_mbit;
            return a.id < b.id;
        case PolicyKind::Aaso:
            if (a.data_size_mbit != b.data_size_mbit) return a.data_size_mbit < b.data_size_mbit;
            return a.id < b.id;
        case PolicyKind::Fcfs:
            if (a.arrival_slot != b.arrival_slot) return a.arrival_slot < b.arrival_slot;
            return a.id < b.id;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Exact aerial-only feasibility.
//
// Checks whether some loop-free route made of ground-to-UAV entry, UAV-to-UAV
// hops and UAV storage carry-overs can reach the destination while the UAV
// copies it visits hold enough spare compute for the task's remaining chain.
// Within one slot the best collectable compute over simple UAV paths is found
// by a subset dynamic program; slots are joined through storage carry-overs.
// Exponential in the UAV count, which is small by construction.
// ---------------------------------------------------------------------------

bool uav_only_feasible(const Scenario& s, const RtegGraph& g, const EngineState& st,
                       int task, int slot) {
    const TaskSpec& tk = s.task(task);
    const TaskProgress& pr = st.progress[task];
    double remaining = 0;
    for (int r = pr.next_vnf; r <= static_cast<int>(tk.vnfs.size()); ++r)
        remaining += tk.vnfs[r - 1].compute_demand_units;
    if (remaining <= 0) return true;
    const TxKey at = pr.at;
    if (at.node < 0) return false;
    if (g.node_classes[at.node] == NodeClass::Satellite) return false;

    const double phi = tk.comm_demand_mbit;
    const double delta = tk.storage_demand_units;
    const int dst = s.node_index(tk.destination);
    const int horizon = g.slot_count;

    std::vector<int> uavs;
    for (int n = 0; n < g.node_count(); ++n)
        if (g.node_classes[n] == NodeClass::Uav) uavs.push_back(n);
    const int U = static_cast<int>(uavs.size());
    if (U == 0) return false;
    if (U > 14)
        throw std::invalid_argument(
            "uav_only_feasible: exact search supports at most 14 relay craft, got " +
            std::to_string(U));
    std::vector<int> uav_pos(g.node_count(), -1);
    for (int i = 0; i < U; ++i) uav_pos[uavs[i]] = i;

    auto spatial_ok = [&](int lid) { return st.links.link[lid] >= phi - kSlack; };
    auto storage_ok = [&](int lid) { return st.links.link[lid] >= delta - kSlack; };

    std::vector<int> entries;
    if (g.node_classes[at.node] == NodeClass::Ground) {
        for (int lid : g.out_links[g.vertex_id(at)]) {
            const LinkState& l = g.links[lid];
            if (l.cls == LinkClass::G2U && g.node_classes[l.to.node] == NodeClass::Uav &&
                spatial_ok(lid))
                entries.push_back(uav_pos[l.to.node]);
        }
        std::sort(entries.begin(), entries.end());
    } else {
        entries.push_back(uav_pos[at.node]);
    }
    if (entries.empty()) return false;

    struct SlotTab {
        bool built = false;
        std::vector<double> comp;
        std::vector<char> exitable, storable;
        std::vector<std::vector<int>> adj;
    };
    std::vector<SlotTab> tabs(horizon - slot + 1);
    auto tab = [&](int sigma) -> SlotTab& {
        SlotTab& t = tabs[sigma - slot];
        if (t.built) return t;
        t.built = true;
        t.comp.assign(U, 0);
        t.exitable.assign(U, 0);
        t.storable.assign(U, 0);
        t.adj.assign(U, {});
        for (int i = 0; i < U; ++i) {
            TxKey key{uavs[i], sigma};
            int vid = g.vertex_id(key);
            t.comp[i] = st.compute_residual[vid];
            for (int lid : g.out_links[vid]) {
                const LinkState& l = g.links[lid];
                if (l.cls == LinkClass::Storage) {
                    if (storage_ok(lid)) t.storable[i] = 1;
                } else if (l.cls == LinkClass::U2U) {
                    if (g.node_classes[l.to.node] == NodeClass::Uav && spatial_ok(lid))
                        t.adj[i].push_back(uav_pos[l.to.node]);
                } else if (l.cls == LinkClass::G2U && l.to.node == dst) {
                    if (spatial_ok(lid)) t.exitable[i] = 1;
                }
            }
        }
        return t;
    };

    {  // single-hop fast path: one craft holds the whole remainder
        SlotTab& t0 = tab(slot);
        for (int e : entries)
            if (t0.exitable[e] && t0.comp[e] >= remaining - kDemandTol) return true;
    }
    {  // coarse bound: total spare compute over the rest of the horizon
        double total = 0;
        for (int sigma = slot; sigma <= horizon; ++sigma) {
            SlotTab& t = tab(sigma);
            for (int i = 0; i < U; ++i) total += t.comp[i];
        }
        if (total < remaining - kDemandTol) return false;
    }

    // Chain steps still to host, in order; each must land whole on one vertex.
    std::vector<double> chain;
    for (int r = pr.next_vnf; r <= static_cast<int>(tk.vnfs.size()); ++r)
        chain.push_back(tk.vnfs[r - 1].compute_demand_units);
    const int R = static_cast<int>(chain.size());

    // Greedily absorb whole chain steps into one vertex's spare compute.  For
    // a fixed route the earliest-fit assignment dominates (capacity further
    // along never depends on what was already hosted), so route search plus
    // greedy absorption is exact.
    auto absorb = [&](int r, double cap) {
        double used = 0;
        while (r < R && used + chain[r] <= cap + kDemandTol) {
            used += chain[r];
            ++r;
        }
        return r;
    };

    // memo[(sigma, entry, r)]: can steps r.. be hosted and the data delivered
    // by a route entering `entry` at `sigma`?  0 unknown, 1 yes, 2 no.
    std::vector<unsigned char> memo(
        static_cast<size_t>(horizon - slot + 1) * U * (R + 1), 0);
    auto feasible_from = [&](auto&& self, int sigma, int entry, int r0) -> bool {
        unsigned char& m =
            memo[(static_cast<size_t>(sigma - slot) * U + entry) * (R + 1) + r0];
        if (m) return m == 1;
        SlotTab& t = tab(sigma);
        const int full = 1 << U;
        // dp[mask*U + j]: deepest chain step reached by a loop-free route over
        // `mask` standing at j; -1 unreachable.  Deeper always dominates.
        std::vector<int> dp(static_cast<size_t>(full) * U, -1);
        dp[(static_cast<size_t>(1) << entry) * U + entry] = absorb(r0, t.comp[entry]);
        bool ok = false;
        for (int mask = 1; mask < full && !ok; ++mask) {
            if (!(mask & (1 << entry))) continue;
            for (int j = 0; j < U && !ok; ++j) {
                if (!(mask & (1 << j))) continue;
                const int r = dp[static_cast<size_t>(mask) * U + j];
                if (r < 0) continue;
                if (r >= R && t.exitable[j]) {
                    ok = true;
                    break;
                }
                if (t.storable[j] && sigma < horizon && self(self, sigma + 1, j, r)) {
                    ok = true;
                    break;
                }
                for (int nb : t.adj[j]) {
                    if (mask & (1 << nb)) continue;
                    const int cand = absorb(r, t.comp[nb]);
                    int& cell = dp[(static_cast<size_t>(mask) | (1u << nb)) * U + nb];
                    if (cand > cell) cell = cand;
                }
            }
        }
        m = ok ? 1 : 2;
        return ok;
    };
    for (int e : entries)
        if (feasible_from(feasible_from, slot, e, 0)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Preference construction.
// ---------------------------------------------------------------------------

PreferenceLists build_preferences(const Scenario& s, const RtegGraph& g,
                                  const EngineState& st, int slot,
                                  const MatchPolicy& policy) {
    PreferenceLists out;
    for (int k = 0; k < static_cast<int>(s.tasks.size()); ++k) {
        const TaskProgress& pr = st.progress[k];
        const TaskSpec& tk = s.task(k);
        if (!pr.arrived || pr.completed || pr.failed) continue;
        if (pr.next_vnf > static_cast<int>(tk.vnfs.size())) continue;
        TaskPrefs tp;
        tp.task = k;
        const bool parked_on_satellite =
            pr.at.node >= 0 && g.node_classes[pr.at.node] == NodeClass::Satellite;
        if (parked_on_satellite || !uav_only_feasible(s, g, st, k, slot)) {
            tp.satellite_branch = true;
        } else {
            PathQuery q;
            q.rule = WeightRule::TransmissionTime;
            q.phi_mbit = tk.comm_demand_mbit;
            q.delta_units = tk.storage_demand_units;
            q.residual = &st.links;
            q.uav_only = true;
            auto p = shortest_path(g, pr.at, s.node_index(tk.destination), q);
            if (!p) {
                tp.satellite_branch = true;  // defensive; feasibility implies a path
            } else {
                for (const TxKey& v : p->vertices) {
                    if (v.slot != slot) break;
                    if (g.node_classes[v.node] == NodeClass::Uav)
                        tp.ranked_nodes.push_back(v.node);
                }
                tp.path = std::move(*p);
            }
        }
        out.tasks.push_back(std::move(tp));
    }
    for (const TaskPrefs& tp : out.tasks)
        if (!tp.satellite_branch)
            for (int n : tp.ranked_nodes) out.by_node[n].push_back(tp.task);
    for (auto& [n, list] : out.by_node)
        std::sort(list.begin(), list.end(),
                  [&](int a, int b) { return policy.node_prefers(s, a, b); });
    return out;
}

// ---------------------------------------------------------------------------
// Engine.
// ---------------------------------------------------------------------------

namespace {

class Engine {
  public:
    Engine(const Scenario& s, const RtegGraph& g, const MatchPolicy& policy,
           const EngineOptions& opt)
        : s_(s), g_(g), policy_(policy), opt_(opt) {}

    EngineResult run() {
        const auto t0 = std::chrono::steady_clock::now();
        init();
        for (slot_ = 1; slot_ <= g_.slot_count; ++slot_) run_slot();
        finish();
        out_.report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::move(out_);
    }

  private:
    const Scenario& s_;
    const RtegGraph& g_;
    MatchPolicy policy_;
    EngineOptions opt_;

    EngineState st_;
    EngineResult out_;
    std::vector<std::set<TxKey>> visited_;  // per task, becomes deployment.y
    std::vector<PendingPlacement> pend_;    // current slot's tentative placements
    double slot_used_units_ = 0;
    int slot_ = 1;

    int task_count() const { return static_cast<int>(s_.tasks.size()); }
    int chain_len(int k) const { return static_cast<int>(s_.task(k).vnfs.size()); }

    // --- trace ---
    void tr(const std::string& body) {
        if (!opt_.collect_trace) return;
        out_.trace += "slot=";
        out_.trace += std::to_string(slot_);
        out_.trace += ' ';
        out_.trace += body;
        out_.trace += '\n';
    }
    const std::string& tid(int k) const { return s_.task(k).id; }
    const std::string& nid(int n) const { return s_.nodes[n].id; }
    std::string vref(TxKey v) const { return nid(v.node) + "@" + std::to_string(v.slot); }

    // --- setup / teardown ---
    void init() {
        st_.links = ResidualLayer(g_);
        st_.compute_residual.assign(g_.vertices.size(), 0);
        for (const TxNode& v : g_.vertices)
            st_.compute_residual[g_.vertex_id(v.key())] =
                s_.nodes[v.node].compute_capacity_units;
        st_.energy_residual.assign(g_.node_count(), 0);
        for (int n = 0; n < g_.node_count(); ++n)
            st_.energy_residual[n] = s_.nodes[n].energy_budget_j - standing_energy(s_, n);
        st_.progress.assign(s_.tasks.size(), TaskProgress{});
        st_.deployment = Deployment{};
        st_.deployment.completed.assign(s_.tasks.size(), 0);
        visited_.assign(s_.tasks.size(), {});
        out_.report.algorithm = policy_.name();
        out_.report.scenario_name = opt_.scenario_name;
        out_.report.seed = opt_.seed;
    }

    void finish() {
        for (int k = 0; k < task_count(); ++k)
            for (const TxKey& v : visited_[k]) st_.deployment.y.push_back({k, v});
        st_.deployment.canonicalize();
        out_.deployment = st_.deployment;
        for (int k = 0; k < task_count(); ++k) {
            bool walked = mark_completed(s_, g_, out_.deployment, k);
            if (walked != static_cast<bool>(st_.progress[k].completed))
                out_.completion_mismatches.push_back(tid(k));
        }
        out_.report.final_q = objective_q(out_.deployment);
        out_.report.violation_count =
            static_cast<int>(check_feasibility(s_, g_, out_.deployment).size());
    }

    // --- shared resource operations ---
    void refund_placement(const PendingPlacement& pp) {
        st_.compute_residual[g_.vertex_id(pp.vertex)] += pp.sigma;
        st_.energy_residual[pp.vertex.node] +=
            compute_energy(s_, g_.node_classes[pp.vertex.node], pp.sigma);
    }

    /// Undo every tentative placement of `k` from chain position `min_vnf` on.
    void rollback_from_vnf(int k, int min_vnf) {
        for (const PendingPlacement& pp : pend_)
            if (pp.task == k && pp.vnf_index >= min_vnf) refund_placement(pp);
        pend_.erase(std::remove_if(pend_.begin(), pend_.end(),
                                   [&](const PendingPlacement& pp) {
                                       return pp.task == k && pp.vnf_index >= min_vnf;
                                   }),
                    pend_.end());
        st_.progress[k].next_vnf = std::min(st_.progress[k].next_vnf, min_vnf);
    }

    bool can_traverse(int k, int lid) const {
        const LinkState& l = g_.links[lid];
        const double phi = s_.task(k).comm_demand_mbit;
        if (!fits(st_.links.link[lid], phi)) return false;
        LinkEnergy le = comm_energy(s_, l, phi);
        if (le.tx_j > 0 && !fits(st_.energy_residual[l.from.node], le.tx_j)) return false;
        if (le.rx_j > 0 && !fits(st_.energy_residual[l.to.node], le.rx_j)) return false;
        return true;
    }

    bool try_traverse(int k, int lid) {
        if (!can_traverse(k, lid)) return false;
        const LinkState& l = g_.links[lid];
        const double phi = s_.task(k).comm_demand_mbit;
        LinkEnergy le = comm_energy(s_, l, phi);
        st_.links.link[lid] -= phi;
        st_.energy_residual[l.from.node] -= le.tx_j;
        st_.energy_residual[l.to.node] -= le.rx_j;
        st_.deployment.z.push_back({k, lid});
        visited_[k].insert(l.from);
        visited_[k].insert(l.to);
        st_.progress[k].at = l.to;
        tr("event=move task=" + tid(k) + " link=" + to_string(l.cls) + " from=" +
           vref(l.from) + " to=" + vref(l.to));
        return true;
    }

    /// Carry-over link leaving `v`, or -1 when there is none (ground vertices,
    /// final slot).
    int storage_link_of(TxKey v) const {
        for (int lid : g_.out_links[g_.vertex_id(v)])
            if (g_.links[lid].cls == LinkClass::Storage) return lid;
        return -1;
    }

    /// Park the task at `v` until the next slot. Ground stations hold data
    /// for free; aerial nodes need a storage carry-over with spare room.
    /// Returns false only when the data had to be dropped.
    bool store_at(int k, TxKey v) {
        TaskProgress& pr = st_.progress[k];
        if (g_.node_classes[v.node] == NodeClass::Ground) {
            if (slot_ < g_.slot_count) pr.at = {v.node, slot_ + 1};
            return true;
        }
        if (slot_ >= g_.slot_count) return true;  // horizon ends here
        const int storage_lid = storage_link_of(v);
        const double delta = s_.task(k).storage_demand_units;
        if (storage_lid < 0 || !fits(st_.links.link[storage_lid], delta)) {
            pr.failed = true;
            tr("event=fail task=" + tid(k) + " node=" + nid(v.node) + " reason=no_storage");
            return false;
        }
        st_.links.link[storage_lid] -= delta;
        st_.deployment.z.push_back({k, storage_lid});
        visited_[k].insert(v);
        visited_[k].insert({v.node, slot_ + 1});
        pr.at = {v.node, slot_ + 1};
        tr("event=store task=" + tid(k) + " node=" + nid(v.node) + " into_slot=" +
           std::to_string(slot_ + 1));
        return true;
    }

    // --- matching phase ---
    void match_phase(const PreferenceLists& prefs) {
        std::map<int, const TaskPrefs*> pref_of;
        for (const TaskPrefs& tp : prefs.tasks) pref_of[tp.task] = &tp;

        std::vector<int> proposers;
        for (const TaskPrefs& tp : prefs.tasks)
            if (!tp.satellite_branch && !tp.ranked_nodes.empty()) proposers.push_back(tp.task);
        // Proposal order: arrival order under first-come-first-served,
        // ascending task id otherwise.
        std::sort(proposers.begin(), proposers.end(), [&](int a, int b) {
            if (policy_.kind == PolicyKind::Fcfs) return policy_.node_prefers(s_, a, b);
            return s_.task(a).id < s_.task(b).id;
        });
        std::map<int, int> rank;
        std::map<int, size_t> cursor;
        std::set<std::pair<int, int>> active;
        for (int i = 0; i < static_cast<int>(proposers.size()); ++i) {
            rank[proposers[i]] = i;
            cursor[proposers[i]] = 0;
            active.insert({i, proposers[i]});
        }

        // Evict the cheapest set of lower-ranked holders at `v` that frees
        // room for (need_sig, need_ec); keeps leftover spare minimal so a
        // bump never opens capacity that an already-rejected task could
        // claim. Returns false when no admissible eviction exists.
        auto bump_for = [&](int k, TxKey v, double need_sig, double need_ec) -> bool {
            const int vid = g_.vertex_id(v);
            std::map<int, std::pair<double, double>> totals;  // holder -> (sigma, energy)
            for (const PendingPlacement& pp : pend_)
                if (pp.vertex == v && pp.task != k && policy_.node_prefers(s_, k, pp.task)) {
                    totals[pp.task].first += pp.sigma;
                    totals[pp.task].second +=
                        compute_energy(s_, g_.node_classes[v.node], pp.sigma);
                }
            if (totals.empty()) return false;
            std::vector<int> holders;
            holders.reserve(totals.size());
            for (const auto& [t, tot] : totals) holders.push_back(t);
            std::sort(holders.begin(), holders.end(), [&](int a, int b) {
                return policy_.node_prefers(s_, b, a);  // worst first
            });
            const double lack_sig = need_sig - st_.compute_residual[vid];
            const double lack_ec = need_ec - st_.energy_residual[v.node];
            const int w = static_cast<int>(holders.size());
            int best_mask = 0;
            double best_sig = kInf;
            int best_cnt = INT_MAX;
            if (w <= 16) {
                for (int mask = 1; mask < (1 << w); ++mask) {
                    double ssum = 0, esum = 0;
                    int cnt = 0;
                    for (int i = 0; i < w; ++i)
                        if (mask & (1 << i)) {
                            ssum += totals[holders[i]].first;
                            esum += totals[holders[i]].second;
                            ++cnt;
                        }
                    if (ssum + kSlack < lack_sig || esum + kSlack < lack_ec) continue;
                    if (ssum < best_sig || (ssum == best_sig && cnt < best_cnt) ||
                        (ssum == best_sig && cnt == best_cnt && mask < best_mask)) {
                        best_mask = mask;
                        best_sig = ssum;
                        best_cnt = cnt;
                    }
                }
            } else {  // degenerate scale: evict worst-first until covered
                double ssum = 0, esum = 0;
                for (int i = 0; i < w; ++i) {
                    best_mask |= 1 << i;
                    ssum += totals[holders[i]].first;
                    esum += totals[holders[i]].second;
                    if (ssum + kSlack >= lack_sig && esum + kSlack >= lack_ec) {
                        best_sig = ssum;
                        break;
                    }
                }
            }
            if (best_sig == kInf) return false;
            for (int i = 0; i < w; ++i) {
                if (!(best_mask & (1 << i))) continue;
                const int loser = holders[i];
                int first_vnf = INT_MAX;
                for (const PendingPlacement& pp : pend_)
                    if (pp.task == loser && pp.vertex == v)
                        first_vnf = std::min(first_vnf, pp.vnf_index);
                rollback_from_vnf(loser, first_vnf);
                ++st_.bumps_this_slot;
                tr("event=bump task=" + tid(loser) + " node=" + nid(v.node) + " by=" + tid(k));
                auto it = cursor.find(loser);
                if (it != cursor.end() &&
                    it->second < pref_of[loser]->ranked_nodes.size())
                    active.insert({rank[loser], loser});
            }
            return true;
        };

        while (!active.empty()) {
            const auto [rk, k] = *active.begin();
            const TaskPrefs& tp = *pref_of[k];
            TaskProgress& pr = st_.progress[k];
            if (pr.next_vnf > chain_len(k) || cursor[k] >= tp.ranked_nodes.size()) {
                active.erase(active.begin());
                continue;
            }
            const int n = tp.ranked_nodes[cursor[k]++];
            ++st_.proposals_this_slot;
            tr("event=propose task=" + tid(k) + " node=" + nid(n));
            const TxKey v{n, slot_};
            const int vid = g_.vertex_id(v);
            bool placed_any = false;
            while (pr.next_vnf <= chain_len(k)) {
                const double sig = s_.task(k).vnfs[pr.next_vnf - 1].compute_demand_units;
                const double ec = compute_energy(s_, g_.node_classes[n], sig);
                if (fits(st_.compute_residual[vid], sig) &&
                    fits(st_.energy_residual[n], ec)) {
                    st_.compute_residual[vid] -= sig;
                    st_.energy_residual[n] -= ec;
                    pend_.push_back({k, pr.next_vnf, v, sig});
                    tr("event=accept task=" + tid(k) + " node=" + nid(n) + " vnf=" +
                       std::to_string(pr.next_vnf) + " sigma=" + fmt_num(sig));
                    ++pr.next_vnf;
                    placed_any = true;
                    continue;
                }
                if (!policy_.allows_bumping()) break;
                if (!bump_for(k, v, sig, ec)) break;
            }
            if (!placed_any) tr("event=reject task=" + tid(k) + " node=" + nid(n));
        }
    }

    /// Justified-envy audit of the matching fixed point: a pending task may
    /// not rank a node that still has room for its next chain entry, nor one
    /// whose lower-ranked holders could be evicted to make room.
    void stability_scan(const PreferenceLists& prefs) {
        for (const TaskPrefs& tp : prefs.tasks) {
            if (tp.satellite_branch) continue;
            const TaskProgress& pr = st_.progress[tp.task];
            if (pr.next_vnf > chain_len(tp.task)) continue;
            const double sig =
                s_.task(tp.task).vnfs[pr.next_vnf - 1].compute_demand_units;
            for (int n : tp.ranked_nodes) {
                const TxKey v{n, slot_};
                const int vid = g_.vertex_id(v);
                const double ec = compute_energy(s_, g_.node_classes[n], sig);
                if (fits(st_.compute_residual[vid], sig) &&
                    fits(st_.energy_residual[n], ec)) {
                    out_.stability_issues.push_back(
                        {slot_, tp.task, n, "spare capacity left unclaimed"});
                    continue;
                }
                if (!policy_.allows_bumping()) continue;
                double ssum = st_.compute_residual[vid];
                double esum = st_.energy_residual[n];
                for (const PendingPlacement& pp : pend_)
                    if (pp.vertex == v && pp.task != tp.task &&
                        policy_.node_prefers(s_, tp.task, pp.task)) {
                        ssum += pp.sigma;
                        esum += compute_energy(s_, g_.node_classes[n], pp.sigma);
                    }
                if (fits(ssum, sig) && fits(esum, ec))
                    out_.stability_issues.push_back(
                        {slot_, tp.task, n, "lower-ranked load could be displaced"});
            }
        }
    }

    // --- routing phase ---
    void flush_pendings_within(int k, const std::map<TxKey, int>& pos, int reached) {
        int first_beyond = INT_MAX;
        for (const PendingPlacement& pp : pend_) {
            if (pp.task != k) continue;
            auto it = pos.find(pp.vertex);
            if (it == pos.end() || it->second > reached)
                first_beyond = std::min(first_beyond, pp.vnf_index);
        }
        if (first_beyond != INT_MAX) rollback_from_vnf(k, first_beyond);
        for (const PendingPlacement& pp : pend_) {
            if (pp.task != k) continue;
            st_.deployment.x.push_back({k, pp.vnf_index, pp.vertex});
            visited_[k].insert(pp.vertex);
            slot_used_units_ += pp.sigma;
        }
        pend_.erase(std::remove_if(pend_.begin(), pend_.end(),
                                   [&](const PendingPlacement& pp) { return pp.task == k; }),
                    pend_.end());
    }

    void mark_complete(int k, int node) {
        st_.progress[k].completed = true;
        st_.deployment.completed[k] = 1;
        tr("event=complete task=" + tid(k) + " node=" + nid(node));
    }

    /// Move a task along its planned route: as far as the destination when
    /// everything is placed and the route stays inside this slot, otherwise
    /// to the best parking spot (last placement reached, or the first aerial
    /// vertex when nothing could be placed at all). Capacity lost to
    /// higher-priority traffic truncates the walk and rolls back placements
    /// the data can no longer reach.
    void route_walk(int k, const Path& path) {
        TaskProgress& pr = st_.progress[k];
        const auto& v = path.vertices;
        int prefix_end = 0;
        while (prefix_end + 1 < static_cast<int>(v.size()) &&
               v[prefix_end + 1].slot == slot_)
            ++prefix_end;
        std::map<TxKey, int> pos;
        for (int i = 0; i <= prefix_end; ++i) pos[v[i]] = i;

        enum class Action { Complete, Store };
        Action action = Action::Store;
        int target = 0;
        if (pr.next_vnf > chain_len(k)) {
            if (v.back().slot == slot_) {
                target = static_cast<int>(v.size()) - 1;
                action = Action::Complete;
            } else {
                target = prefix_end;
            }
        } else {
            int last_pend = -1;
            for (const PendingPlacement& pp : pend_) {
                if (pp.task != k) continue;
                auto it = pos.find(pp.vertex);
                if (it != pos.end()) last_pend = std::max(last_pend, it->second);
            }
            if (last_pend >= 0) {
                target = last_pend;
            } else {
                // nothing placed: hold at the relay closest to the start so the
                // data is in position to rejoin the matching next slot
                for (int i = 0; i <= prefix_end; ++i)
                    if (g_.node_classes[v[i].node] != NodeClass::Ground) {
                        target = i;
                        break;
                    }
            }
        }

        int reached = 0;
        for (int i = 0; i < target; ++i) {
            if (!try_traverse(k, path.link_ids[i])) break;
            reached = i + 1;
        }
        if (reached < target) action = Action::Store;
        flush_pendings_within(k, pos, reached);
        if (action == Action::Complete) {
            mark_complete(k, v[reached].node);
        } else {
            store_at(k, v[reached]);
        }
    }

    int satellite_hop_link(int k, TxKey from) const {
        const Vec3& here = g_.vertex(from).position_m;
        int best = -1;
        double best_dist = kInf;
        int best_node = INT_MAX;
        for (int lid : g_.out_links[g_.vertex_id(from)]) {
            const LinkState& l = g_.links[lid];
            if (l.cls != LinkClass::U2S) continue;
            if (g_.node_classes[l.to.node] != NodeClass::Satellite) continue;
            if (!can_traverse(k, lid)) continue;
            double dist = (g_.vertex(l.to).position_m - here).norm();
            if (dist < best_dist || (dist == best_dist && l.to.node < best_node)) {
                best = lid;
                best_dist = dist;
                best_node = l.to.node;
            }
        }
        return best;
    }

    void place_on_satellite(int k) {
        TaskProgress& pr = st_.progress[k];
        const TxKey v = pr.at;
        const int vid = g_.vertex_id(v);
        ++st_.proposals_this_slot;
        tr("event=propose task=" + tid(k) + " node=" + nid(v.node));
        bool any = false;
        while (pr.next_vnf <= chain_len(k)) {
            const double sig = s_.task(k).vnfs[pr.next_vnf - 1].compute_demand_units;
            const double ec = compute_energy(s_, NodeClass::Satellite, sig);
            if (!fits(st_.compute_residual[vid], sig) ||
                !fits(st_.energy_residual[v.node], ec))
                break;
            st_.compute_residual[vid] -= sig;
            st_.energy_residual[v.node] -= ec;
            st_.deployment.x.push_back({k, pr.next_vnf, v});
            visited_[k].insert(v);
            slot_used_units_ += sig;
            tr("event=accept task=" + tid(k) + " node=" + nid(v.node) + " vnf=" +
               std::to_string(pr.next_vnf) + " sigma=" + fmt_num(sig));
            ++pr.next_vnf;
            any = true;
        }
        if (!any) tr("event=reject task=" + tid(k) + " node=" + nid(v.node));
    }

    /// Offload branch: climb to the satellite layer via the closest workable
    /// relay, deploy the remaining chain across satellites, then downlink to
    /// the destination. Any blocked hop parks the data where it stands.
    void route_satellite(int k) {
        TaskProgress& pr = st_.progress[k];
        const int dst = s_.node_index(s_.task(k).destination);

        if (g_.node_classes[pr.at.node] == NodeClass::Ground) {
            const int vid = g_.vertex_id(pr.at);
            const Vec3& here = g_.vertices[vid].position_m;
            struct Cand {
                bool no_uplink;
                double dist;
                int node;
                int lid;
            };
            std::vector<Cand> cands;
            for (int lid : g_.out_links[vid]) {
                const LinkState& l = g_.links[lid];
                if (l.cls != LinkClass::G2U) continue;
                if (g_.node_classes[l.to.node] != NodeClass::Uav) continue;
                if (!can_traverse(k, lid)) continue;
                const bool uplink = satellite_hop_link(k, l.to) >= 0;
                const double dist = (g_.vertex(l.to).position_m - here).norm();
                cands.push_back({!uplink, dist, l.to.node, lid});
            }
            if (cands.empty()) {
                store_at(k, pr.at);  // keep waiting at the ground station
                return;
            }
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.no_uplink != b.no_uplink) return !a.no_uplink;
                if (a.dist != b.dist) return a.dist < b.dist;
                return a.node < b.node;
            });
            if (!try_traverse(k, cands.front().lid)) {
                store_at(k, pr.at);
                return;
            }
        }
        if (g_.node_classes[pr.at.node] == NodeClass::Uav) {
            const int lid = satellite_hop_link(k, pr.at);
            if (lid < 0 || !try_traverse(k, lid)) {
                store_at(k, pr.at);
                return;
            }
        }
        if (g_.node_classes[pr.at.node] != NodeClass::Satellite) {
            store_at(k, pr.at);
            return;
        }

        std::set<int> seen{pr.at.node};
        while (true) {
            place_on_satellite(k);
            if (pr.next_vnf > chain_len(k)) break;
            // hop to the closest unvisited peer and keep deploying
            const TxKey from = pr.at;
            const Vec3& here = g_.vertex(from).position_m;
            int best = -1;
            double best_dist = kInf;
            int best_node = INT_MAX;
            for (int lid : g_.out_links[g_.vertex_id(from)]) {
                const LinkState& l = g_.links[lid];
                if (l.cls != LinkClass::S2S) continue;
                if (seen.count(l.to.node)) continue;
                if (!can_traverse(k, lid)) continue;
                const double dist = (g_.vertex(l.to).position_m - here).norm();
                if (dist < best_dist || (dist == best_dist && l.to.node < best_node)) {
                    best = lid;
                    best_dist = dist;
                    best_node = l.to.node;
                }
            }
            if (best < 0 || !try_traverse(k, best)) break;
            seen.insert(pr.at.node);
        }
        if (pr.next_vnf > chain_len(k)) {
            int down = -1;
            for (int lid : g_.out_links[g_.vertex_id(pr.at)]) {
                const LinkState& l = g_.links[lid];
                if (l.cls == LinkClass::S2G && l.to.node == dst && can_traverse(k, lid)) {
                    down = lid;
                    break;
                }
            }
            if (down >= 0 && try_traverse(k, down)) {
                mark_complete(k, dst);
                return;
            }
        }
        store_at(k, pr.at);
    }

    void route_phase(const PreferenceLists& prefs) {
        std::map<int, const TaskPrefs*> pref_of;
        for (const TaskPrefs& tp : prefs.tasks) pref_of[tp.task] = &tp;
        std::vector<int> order;
        for (int k = 0; k < task_count(); ++k) {
            const TaskProgress& pr = st_.progress[k];
            if (pr.arrived && !pr.completed && !pr.failed) order.push_back(k);
        }
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return policy_.node_prefers(s_, a, b); });
        for (int k : order) {
            auto it = pref_of.find(k);
            if (it != pref_of.end()) {
                const TaskPrefs& tp = *it->second;
                if (tp.satellite_branch)
                    route_satellite(k);
                else
                    route_walk(k, *tp.path);
                continue;
            }
            // fully placed earlier: pure transit toward the destination
            const TaskSpec& tk = s_.task(k);
            PathQuery q;
            q.rule = WeightRule::TransmissionTime;
            q.phi_mbit = tk.comm_demand_mbit;
            q.delta_units = tk.storage_demand_units;
            q.residual = &st_.links;
            q.uav_only = false;
            auto p = shortest_path(g_, st_.progress[k].at, s_.node_index(tk.destination), q);
            if (!p)
                store_at(k, st_.progress[k].at);
            else
                route_walk(k, *p);
        }
    }

    // --- one slot ---
    void run_slot() {
        for (int k = 0; k < task_count(); ++k) {
            TaskProgress& pr = st_.progress[k];
            if (!pr.arrived && s_.task(k).arrival_slot == slot_) {
                pr.arrived = true;
                pr.at = {s_.node_index(s_.task(k).source), slot_};
            }
        }
        st_.proposals_this_slot = 0;
        st_.bumps_this_slot = 0;
        slot_used_units_ = 0;
        double required = 0;
        for (int k = 0; k < task_count(); ++k) {
            const TaskProgress& pr = st_.progress[k];
            if (!pr.arrived || pr.completed || pr.failed) continue;
            for (int r = pr.next_vnf; r <= chain_len(k); ++r)
                required += s_.task(k).vnfs[r - 1].compute_demand_units;
        }

        PreferenceLists prefs = build_preferences(s_, g_, st_, slot_, policy_);
        match_phase(prefs);
        stability_scan(prefs);
        route_phase(prefs);
        for (const PendingPlacement& pp : pend_) refund_placement(pp);  // safety net
        pend_.clear();

        if (slot_ < g_.slot_count)
            for (TaskProgress& pr : st_.progress)
                if (pr.arrived && !pr.completed && !pr.failed && pr.at.slot == slot_ &&
                    g_.node_classes[pr.at.node] == NodeClass::Ground)
                    pr.at.slot = slot_ + 1;

        SlotMetrics m;
        m.slot = slot_;
        for (int k = 0; k < task_count(); ++k)
            if (st_.progress[k].completed) ++m.completed_cumulative;
        double uav_cap = 0, uav_used = 0, sat_cap = 0, sat_used = 0;
        for (int n = 0; n < g_.node_count(); ++n) {
            const double cap = s_.nodes[n].compute_capacity_units;
            if (cap <= 0) continue;
            const double used = cap - st_.compute_residual[g_.vertex_id({n, slot_})];
            if (g_.node_classes[n] == NodeClass::Uav) {
                uav_cap += cap;
                uav_used += used;
            } else if (g_.node_classes[n] == NodeClass::Satellite) {
                sat_cap += cap;
                sat_used += used;
            }
        }
        m.util_uav = uav_cap > 0 ? uav_used / uav_cap : 0;
        m.util_satellite = sat_cap > 0 ? sat_used / sat_cap : 0;
        m.vnf_compute_used_units = slot_used_units_;
        m.vnf_compute_required_units = required;
        out_.report.slots.push_back(m);
        out_.proposals_per_slot.push_back(st_.proposals_this_slot);
        out_.bumps_per_slot.push_back(st_.bumps_this_slot);
    }
};

}  // namespace

EngineResult run_engine(const Scenario& s, const RtegGraph& g, const MatchPolicy& policy,
                        const EngineOptions& opt) {
    Engine engine(s, g, policy, opt);
    return engine.run();
}

}  // namespace sagin
