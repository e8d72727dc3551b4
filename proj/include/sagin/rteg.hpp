#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sagin/scenario.hpp"
#include "sagin/types.hpp"

namespace sagin {

/// One vertex of the time-expansion graph: a physical node in one slot.
struct TxNode {
    int node = -1;
    int slot = 0;
    NodeClass cls = NodeClass::Ground;
    Vec3 position_m = Vec3::Zero();
    TxKey key() const { return {node, slot}; }
};

/// A directed link between two vertices. Spatial links join two nodes inside
/// one slot and carry `capacity` Mbit per slot (= rate * slot length).
/// Storage links join consecutive copies of the same aerial node and carry
/// the node's storage capacity in units.
struct LinkState {
    int id = -1;
    TxKey from;
    TxKey to;
    LinkClass cls = LinkClass::Storage;
    double rate_bps = 0;   // 0 on storage links
    double capacity = 0;   // Mbit (spatial) or units (storage)
};

/// Immutable topology. Mutable capacity state lives in ResidualLayer so one
/// graph can back several concurrent runs.
struct RtegGraph {
    int slot_count = 0;
    double slot_length_s = 0;
    std::vector<std::string> node_ids;
    std::vector<NodeClass> node_classes;
    std::vector<TxNode> vertices;            // indexed by vertex_id
    std::vector<LinkState> links;            // indexed by link id
    std::vector<std::vector<int>> out_links;  // per vertex, in build order
    std::vector<std::vector<int>> in_links;

    int node_count() const { return static_cast<int>(node_ids.size()); }
    int vertex_id(TxKey k) const { return k.node * slot_count + (k.slot - 1); }
    const TxNode& vertex(TxKey k) const { return vertices[vertex_id(k)]; }
};

/// Per-link remaining capacity, same units as LinkState::capacity.
struct ResidualLayer {
    std::vector<double> link;
    ResidualLayer() = default;
    explicit ResidualLayer(const RtegGraph& g) {
        link.reserve(g.links.size());
        for (const auto& l : g.links) link.push_back(l.capacity);
    }
};

/// Expand a scenario into its time-expansion graph. Spatial links follow the
/// connectivity rule (both directions for ground-UAV, UAV-UAV, UAV-satellite
/// and satellite-satellite pairs; satellite-to-ground only downward); every
/// aerial node gets a storage link between consecutive slots.
RtegGraph build_rteg(const Scenario& s, const ConnectivityRule& rule);
RtegGraph build_rteg(const Scenario& s);  // uses s.connectivity

/// The slot-tau vertices, their spatial links, and the storage links leaving
/// slot tau. The views of all slots partition the vertex and link sets.
struct SlotView {
    int slot = 0;
    std::vector<int> vertices;
    std::vector<int> spatial_links;
    std::vector<int> storage_links;
};
SlotView snapshot(const RtegGraph& g, int slot);

enum class WeightRule { TransmissionTime, HopCount };

/// Search options for shortest_path. Ground vertices other than the start
/// and destination nodes never relay and are skipped.
struct PathQuery {
    WeightRule rule = WeightRule::TransmissionTime;
    double phi_mbit = 0;     // payload: drives transmission-time weights and
                             // the spatial residual filter
    double delta_units = 0;  // storage residual filter
    const ResidualLayer* residual = nullptr;  // nullptr = ignore capacities
    bool uav_only = false;                    // skip satellite vertices
};

struct Path {
    std::vector<TxKey> vertices;  // from start to destination copy
    std::vector<int> link_ids;    // vertices.size() - 1 entries
    double weight = 0;
};

/// Per-link path weight under a rule. Transmission time: phi/rate seconds
/// for spatial links, slot length for storage links, 0 for links leaving a
/// ground vertex (source attachment is free). Hop count: 1 per spatial
/// link, 0 for storage links.
double link_weight(const RtegGraph& g, const LinkState& l, WeightRule rule, double phi_mbit);

/// Dijkstra from `from` to the cheapest slot-copy of node `to_node`
/// reachable at slot >= from.slot. Ties resolve lexicographically on
/// (weight, slot, node index). Returns nullopt when unreachable.
std::optional<Path> shortest_path(const RtegGraph& g, TxKey from, int to_node,
                                  const PathQuery& q);

/// Text dump, one link per line: from, to, class, rate, capacity.
std::string dump_edge_list(const RtegGraph& g);

}  // namespace sagin
