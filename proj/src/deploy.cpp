#include "sagin/deploy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sagin {

void Deployment::canonicalize() {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::sort(z.begin(), z.end());
}

const char* to_string(ConstraintId id) {
    switch (id) {
        case ConstraintId::C15: return "C15";
        case ConstraintId::C16: return "C16";
        case ConstraintId::C17: return "C17";
        case ConstraintId::C18: return "C18";
        case ConstraintId::C19: return "C19";
        case ConstraintId::C21: return "C21";
        case ConstraintId::C22: return "C22";
        case ConstraintId::C23: return "C23";
        case ConstraintId::C24: return "C24";
        case ConstraintId::C25: return "C25";
    }
    return "?";
}

std::string violation_report(const std::vector<Violation>& v) {
    std::ostringstream out;
    for (const auto& viol : v)
        out << to_string(viol.id) << ' ' << viol.subject << ": " << viol.detail << '\n';
    return out.str();
}

int objective_q(const Deployment& d) {
    int q = 0;
    for (char c : d.completed) q += c ? 1 : 0;
    return q;
}

namespace {

bool exceeds(double used, double cap) { return used > cap + 1e-9 * std::max(1.0, cap); }

std::string vertex_name(const RtegGraph& g, TxKey k) {
    return g.node_ids[k.node] + "@" + std::to_string(k.slot);
}

std::string link_name(const RtegGraph& g, const LinkState& l) {
    return vertex_name(g, l.from) + "->" + vertex_name(g, l.to);
}

std::string num(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

}  // namespace

std::vector<Violation> check_feasibility(const Scenario& s, const RtegGraph& g,
                                         const Deployment& d) {
    std::vector<Violation> out;
    const int n_tasks = static_cast<int>(s.tasks.size());

    std::vector<std::vector<Placement>> x_of(n_tasks);
    for (const auto& p : d.x) x_of.at(p.task).push_back(p);
    std::vector<std::set<TxKey>> y_of(n_tasks);
    for (const auto& v : d.y) y_of.at(v.task).insert(v.vertex);
    std::vector<std::vector<int>> z_of(n_tasks);
    for (const auto& u : d.z) z_of.at(u.task).push_back(u.link);

    auto is_completed = [&](int k) {
        return k < static_cast<int>(d.completed.size()) && d.completed[k];
    };

    // C15: every VNF of a completed task placed exactly once
    for (int k = 0; k < n_tasks; ++k) {
        if (!is_completed(k)) continue;
        std::map<int, int> count;
        for (const auto& p : x_of[k]) ++count[p.vnf_index];
        for (const auto& vnf : s.tasks[k].vnfs) {
            int c = count.count(vnf.index) ? count[vnf.index] : 0;
            if (c != 1)
                out.push_back({ConstraintId::C15, "task " + s.tasks[k].id,
                               "vnf " + std::to_string(vnf.index) + " placed " +
                                   std::to_string(c) + " times (expected 1)"});
        }
    }

    // C16: placements only on visited vertices
    for (int k = 0; k < n_tasks; ++k)
        for (const auto& p : x_of[k])
            if (!y_of[k].count(p.vertex))
                out.push_back({ConstraintId::C16, "task " + s.tasks[k].id,
                               "vnf " + std::to_string(p.vnf_index) + " placed on unvisited " +
                                   vertex_name(g, p.vertex)});

    // C17: one outgoing link use per vertex, only where visited
    for (int k = 0; k < n_tasks; ++k) {
        std::map<TxKey, int> outgoing;
        for (int lid : z_of[k]) ++outgoing[g.links[lid].from];
        for (const auto& [vtx, c] : outgoing) {
            if (c > 1)
                out.push_back({ConstraintId::C17, "task " + s.tasks[k].id,
                               std::to_string(c) + " outgoing link uses at " +
                                   vertex_name(g, vtx)});
            else if (!y_of[k].count(vtx))
                out.push_back({ConstraintId::C17, "task " + s.tasks[k].id,
                               "departs unvisited " + vertex_name(g, vtx)});
        }
    }

    // C18 / C22: link loads against capacity
    std::vector<double> load(g.links.size(), 0);
    for (const auto& u : d.z) {
        const TaskSpec& t = s.tasks[u.task];
        load[u.link] += g.links[u.link].cls == LinkClass::Storage ? t.storage_demand_units
                                                                  : t.comm_demand_mbit;
    }
    for (const auto& l : g.links) {
        if (!exceeds(load[l.id], l.capacity)) continue;
        bool storage = l.cls == LinkClass::Storage;
        out.push_back({storage ? ConstraintId::C18 : ConstraintId::C22,
                       (storage ? "storage " : "link ") + link_name(g, l),
                       "load " + num(load[l.id]) + " exceeds capacity " + num(l.capacity)});
    }

    // C19: per-vertex compute load
    std::map<TxKey, double> compute;
    for (const auto& p : d.x)
        compute[p.vertex] += s.tasks[p.task].vnfs.at(p.vnf_index - 1).compute_demand_units;
    for (const auto& [vtx, used] : compute)
        if (exceeds(used, s.node(vtx.node).compute_capacity_units))
            out.push_back({ConstraintId::C19, "node " + vertex_name(g, vtx),
                           "compute " + num(used) + " exceeds capacity " +
                               num(s.node(vtx.node).compute_capacity_units)});

    // C21: whole-horizon energy per node
    EnergyLedger ledger = build_energy_ledger(s, g, d);
    for (size_t i = 0; i < ledger.nodes.size(); ++i) {
        if (s.nodes[i].cls == NodeClass::Ground) continue;  // unbudgeted
        if (exceeds(ledger.nodes[i].spent_j(), ledger.nodes[i].budget_j))
            out.push_back({ConstraintId::C21, "node " + s.nodes[i].id,
                           "energy " + num(ledger.nodes[i].spent_j()) + " exceeds budget " +
                               num(ledger.nodes[i].budget_j)});
    }

    // C23 / C24 / C25: path structure of completed tasks
    for (int k = 0; k < n_tasks; ++k) {
        if (!is_completed(k)) continue;
        const TaskSpec& t = s.tasks[k];
        int src = s.node_index(t.source);
        int dst = s.node_index(t.destination);
        std::map<TxKey, int> in_flow, out_flow;
        for (int lid : z_of[k]) {
            ++out_flow[g.links[lid].from];
            ++in_flow[g.links[lid].to];
        }
        int departures = 0, arrivals = 0;
        for (const auto& [vtx, c] : out_flow)
            if (vtx.node == src) departures += c;
        for (const auto& [vtx, c] : in_flow)
            if (vtx.node == dst) arrivals += c;
        if (departures != 1)
            out.push_back({ConstraintId::C23, "task " + t.id,
                           "leaves source " + t.source + " " + std::to_string(departures) +
                               " times (expected 1)"});
        if (arrivals != 1)
            out.push_back({ConstraintId::C24, "task " + t.id,
                           "reaches destination " + t.destination + " " +
                               std::to_string(arrivals) + " times (expected 1)"});
        std::set<TxKey> touched;
        for (const auto& [vtx, c] : in_flow) touched.insert(vtx);
        for (const auto& [vtx, c] : out_flow) touched.insert(vtx);
        for (const auto& vtx : touched) {
            if (vtx.node == src || vtx.node == dst) continue;
            int in = in_flow.count(vtx) ? in_flow[vtx] : 0;
            int o = out_flow.count(vtx) ? out_flow[vtx] : 0;
            if (in != o)
                out.push_back({ConstraintId::C25, "task " + t.id,
                               "flow imbalance at " + vertex_name(g, vtx) + " (in " +
                                   std::to_string(in) + ", out " + std::to_string(o) + ")"});
        }
    }
    return out;
}

bool mark_completed(const Scenario& s, const RtegGraph& g, const Deployment& d, int task) {
    const TaskSpec& t = s.task(task);
    const int src = s.node_index(t.source);
    const int dst = s.node_index(t.destination);

    // each chain position must be placed exactly once
    std::map<int, TxKey> placed_at;
    for (const auto& p : d.x) {
        if (p.task != task) continue;
        if (placed_at.count(p.vnf_index)) return false;
        placed_at[p.vnf_index] = p.vertex;
    }
    if (placed_at.size() != t.vnfs.size()) return false;
    for (const auto& vnf : t.vnfs)
        if (!placed_at.count(vnf.index)) return false;

    // the link uses must form one walk: unique successor per vertex
    std::map<TxKey, const LinkState*> next;
    int link_count = 0;
    TxKey start{-1, 0};
    for (const auto& u : d.z) {
        if (u.task != task) continue;
        const LinkState& l = g.links[u.link];
        ++link_count;
        if (next.count(l.from)) return false;
        next[l.from] = &l;
        if (l.from.node == src) {
            if (start.node >= 0) return false;  // two departures
            start = l.from;
        }
    }
    if (start.node < 0 || start.slot < t.arrival_slot) return false;

    std::map<TxKey, int> walk_pos;
    walk_pos[start] = 0;
    TxKey cur = start;
    int steps = 0;
    while (true) {
        auto it = next.find(cur);
        if (it == next.end()) return false;  // stranded before the destination
        TxKey to = it->second->to;
        ++steps;
        if (walk_pos.count(to)) return false;  // revisit
        walk_pos[to] = steps;
        if (to.node == dst) {
            if (next.count(to)) return false;  // walks end at the destination
            break;
        }
        if (g.node_classes[to.node] == NodeClass::Ground) return false;  // ground relay
        cur = to;
    }
    if (steps != link_count) return false;  // disconnected extra uses

    // chain order along the walk, aerial vertices only
    int prev_pos = -1;
    for (const auto& vnf : t.vnfs) {
        TxKey v = placed_at[vnf.index];
        if (g.node_classes[v.node] == NodeClass::Ground) return false;
        auto it = walk_pos.find(v);
        if (it == walk_pos.end()) return false;
        if (it->second < prev_pos) return false;
        prev_pos = it->second;
    }
    return true;
}

}  // namespace sagin
