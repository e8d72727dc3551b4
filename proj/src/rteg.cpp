#include "sagin/rteg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <sstream>

#include "sagin/channel.hpp"

namespace sagin {

namespace {

/// Link class for an ordered node pair, or nullopt when no link family
/// connects the two classes in that direction (ground never reaches a
/// satellite directly, satellites only send downward to the ground).
std::optional<LinkClass> pair_class(NodeClass from, NodeClass to) {
    using N = NodeClass;
    if (from == N::Ground && to == N::Uav) return LinkClass::G2U;
    if (from == N::Uav && to == N::Ground) return LinkClass::G2U;
    if (from == N::Uav && to == N::Uav) return LinkClass::U2U;
    if (from == N::Uav && to == N::Satellite) return LinkClass::U2S;
    if (from == N::Satellite && to == N::Uav) return LinkClass::U2S;
    if (from == N::Satellite && to == N::Satellite) return LinkClass::S2S;
    if (from == N::Satellite && to == N::Ground) return LinkClass::S2G;
    return std::nullopt;
}

double range_for(const ConnectivityRule& r, LinkClass cls) {
    switch (cls) {
        case LinkClass::G2U: return r.g2u_max_range_m;
        case LinkClass::U2U: return r.u2u_max_range_m;
        case LinkClass::U2S: return r.u2s_max_range_m;
        case LinkClass::S2S: return r.s2s_max_range_m;
        case LinkClass::S2G: return r.s2g_max_range_m;
        case LinkClass::Storage: return 0;
    }
    return 0;
}

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

RtegGraph build_rteg(const Scenario& s, const ConnectivityRule& rule) {
    RtegGraph g;
    g.slot_count = s.slot_count;
    g.slot_length_s = s.slot_length_s;
    const int n_nodes = static_cast<int>(s.nodes.size());
    for (const auto& n : s.nodes) {
        g.node_ids.push_back(n.id);
        g.node_classes.push_back(n.cls);
    }
    g.vertices.resize(static_cast<size_t>(n_nodes) * s.slot_count);
    for (int i = 0; i < n_nodes; ++i)
        for (int t = 1; t <= s.slot_count; ++t)
            g.vertices[g.vertex_id({i, t})] =
                TxNode{i, t, s.nodes[i].cls, s.nodes[i].positions_m[t - 1]};
    g.out_links.resize(g.vertices.size());
    g.in_links.resize(g.vertices.size());

    // nearest satellite of each UAV, per slot (ties to the lower index)
    std::vector<int> sat_nodes;
    for (int i = 0; i < n_nodes; ++i)
        if (s.nodes[i].cls == NodeClass::Satellite) sat_nodes.push_back(i);
    auto nearest_sat = [&](int uav, int slot) {
        int best = -1;
        double best_d = 0;
        for (int sat : sat_nodes) {
            double d = (s.nodes[sat].positions_m[slot - 1] - s.nodes[uav].positions_m[slot - 1])
                           .norm();
            if (best < 0 || d < best_d) {
                best = sat;
                best_d = d;
            }
        }
        return best;
    };

    auto add_link = [&g](TxKey from, TxKey to, LinkClass cls, double rate_bps, double capacity) {
        LinkState l;
        l.id = static_cast<int>(g.links.size());
        l.from = from;
        l.to = to;
        l.cls = cls;
        l.rate_bps = rate_bps;
        l.capacity = capacity;
        g.out_links[g.vertex_id(from)].push_back(l.id);
        g.in_links[g.vertex_id(to)].push_back(l.id);
        g.links.push_back(l);
    };

    for (int t = 1; t <= s.slot_count; ++t) {
        for (int i = 0; i < n_nodes; ++i) {
            for (int j = 0; j < n_nodes; ++j) {
                if (i == j) continue;
                auto cls = pair_class(s.nodes[i].cls, s.nodes[j].cls);
                if (!cls) continue;
                if (rule.uav_to_nearest_satellite_only && *cls == LinkClass::U2S) {
                    int uav = s.nodes[i].cls == NodeClass::Uav ? i : j;
                    int sat = s.nodes[i].cls == NodeClass::Uav ? j : i;
                    if (sat != nearest_sat(uav, t)) continue;
                }
                const Vec3& a = s.nodes[i].positions_m[t - 1];
                const Vec3& b = s.nodes[j].positions_m[t - 1];
                if ((b - a).norm() > range_for(rule, *cls)) continue;
                double rate = link_rate(*cls, s.channel, a, b);
                add_link({i, t}, {j, t}, *cls, rate, rate * s.slot_length_s / kMbit);
            }
        }
        if (t < s.slot_count) {
            for (int i = 0; i < n_nodes; ++i) {
                if (s.nodes[i].cls == NodeClass::Ground) continue;
                add_link({i, t}, {i, t + 1}, LinkClass::Storage, 0,
                         s.nodes[i].storage_capacity_units);
            }
        }
    }
    return g;
}

RtegGraph build_rteg(const Scenario& s) { return build_rteg(s, s.connectivity); }

SlotView snapshot(const RtegGraph& g, int slot) {
    if (slot < 1 || slot > g.slot_count)
        throw std::out_of_range("snapshot: slot out of [1, slot_count]");
    SlotView v;
    v.slot = slot;
    for (const auto& tx : g.vertices)
        if (tx.slot == slot) v.vertices.push_back(g.vertex_id(tx.key()));
    for (const auto& l : g.links) {
        if (l.from.slot != slot) continue;
        (l.cls == LinkClass::Storage ? v.storage_links : v.spatial_links).push_back(l.id);
    }
    return v;
}

double link_weight(const RtegGraph& g, const LinkState& l, WeightRule rule, double phi_mbit) {
    if (rule == WeightRule::HopCount) return l.cls == LinkClass::Storage ? 0.0 : 1.0;
    if (l.cls == LinkClass::Storage) return g.slot_length_s;
    if (g.node_classes[l.from.node] == NodeClass::Ground) return 0.0;  // source attachment
    return transmission_seconds(phi_mbit, l.rate_bps);
}

std::optional<Path> shortest_path(const RtegGraph& g, TxKey from, int to_node,
                                  const PathQuery& q) {
    const int start = g.vertex_id(from);
    if (from.slot < 1 || from.slot > g.slot_count || from.node < 0 ||
        from.node >= g.node_count())
        throw std::out_of_range("shortest_path: start vertex outside the graph");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.vertices.size(), kInf);
    std::vector<int> parent_link(g.vertices.size(), -1);
    std::vector<char> done(g.vertices.size(), 0);

    // lexicographic (weight, slot, node) orders equal-cost pops
    struct Entry {
        double d;
        int slot, node, vid;
        bool operator>(const Entry& o) const {
            if (d != o.d) return d > o.d;
            if (slot != o.slot) return slot > o.slot;
            return node > o.node;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    dist[start] = 0;
    pq.push({0, from.slot, from.node, start});

    auto vertex_allowed = [&](const TxNode& v) {
        if (v.cls == NodeClass::Ground) return v.node == from.node || v.node == to_node;
        if (q.uav_only && v.cls == NodeClass::Satellite) return false;
        return true;
    };

    while (!pq.empty()) {
        Entry e = pq.top();
        pq.pop();
        if (done[e.vid]) continue;
        done[e.vid] = 1;
        if (e.node == to_node) {
            Path p;
            p.weight = e.d;
            int vid = e.vid;
            while (vid != start) {
                const LinkState& l = g.links[parent_link[vid]];
                p.link_ids.push_back(l.id);
                p.vertices.push_back(l.to);
                vid = g.vertex_id(l.from);
            }
            p.vertices.push_back(from);
            std::reverse(p.vertices.begin(), p.vertices.end());
            std::reverse(p.link_ids.begin(), p.link_ids.end());
            return p;
        }
        if (g.vertices[e.vid].cls == NodeClass::Ground && e.vid != start)
            continue;  // ground vertices terminate a path, never relay
        for (int lid : g.out_links[e.vid]) {
            const LinkState& l = g.links[lid];
            if (q.residual) {
                double need = l.cls == LinkClass::Storage ? q.delta_units : q.phi_mbit;
                if (q.residual->link[lid] < need - 1e-12) continue;
            }
            const int to = g.vertex_id(l.to);
            if (done[to] || !vertex_allowed(g.vertices[to])) continue;
            double nd = e.d + link_weight(g, l, q.rule, q.phi_mbit);
            if (nd < dist[to]) {
                dist[to] = nd;
                parent_link[to] = lid;
                pq.push({nd, l.to.slot, l.to.node, to});
            }
        }
    }
    return std::nullopt;
}

std::string dump_edge_list(const RtegGraph& g) {
    std::ostringstream out;
    out << "# rteg edge list v1\n# from to class rate_bps capacity\n";
    for (const auto& l : g.links) {
        out << g.node_ids[l.from.node] << '@' << l.from.slot << ' ' << g.node_ids[l.to.node]
            << '@' << l.to.slot << ' ' << to_string(l.cls) << ' ' << fmt_double(l.rate_bps)
            << ' ' << fmt_double(l.capacity) << '\n';
    }
    return out.str();
}

}  // namespace sagin
