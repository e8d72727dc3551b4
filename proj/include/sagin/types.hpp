#pragma once

#include <Eigen/Core>
#include <compare>
#include <stdexcept>
#include <string>

namespace sagin {

using Vec3 = Eigen::Vector3d;  // metres

enum class NodeClass { Ground, Uav, Satellite };
enum class LinkClass { G2U, U2U, U2S, S2S, S2G, Storage };

inline const char* to_string(NodeClass c) {
    switch (c) {
        case NodeClass::Ground: return "ground";
        case NodeClass::Uav: return "uav";
        case NodeClass::Satellite: return "satellite";
    }
    return "?";
}

inline const char* to_string(LinkClass c) {
    switch (c) {
        case LinkClass::G2U: return "G2U";
        case LinkClass::U2U: return "U2U";
        case LinkClass::U2S: return "U2S";
        case LinkClass::S2S: return "S2S";
        case LinkClass::S2G: return "S2G";
        case LinkClass::Storage: return "STORAGE";
    }
    return "?";
}

NodeClass node_class_from_string(const std::string& s);
LinkClass link_class_from_string(const std::string& s);

/// Scenario failed a structural or semantic check; message names the offending entity.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input document (scenario file, report CSV, ...) could not be parsed.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A graph vertex: one copy of a physical node in one time slot (1-based slot).
struct TxKey {
    int node = -1;
    int slot = 0;
    auto operator<=>(const TxKey&) const = default;
};

constexpr double kMbit = 1e6;  // bits per Mbit

/// Seconds to push `phi_mbit` through a link running at `rate_bps`.
inline double transmission_seconds(double phi_mbit, double rate_bps) {
    return phi_mbit * kMbit / rate_bps;
}

}  // namespace sagin
