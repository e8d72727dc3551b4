#pragma once

#include "sagin/types.hpp"

namespace sagin {

/// Radio parameters for the three physical link families. Field names carry
/// the unit; gains and loss factors are plain linear ratios.
struct G2uParams {
    double tx_power_w = 0;      // ground-station transmit power
    double noise_power_w = 0;   // receiver noise power
    double eta_los_db = 0;      // excess path loss, line of sight
    double eta_nlos_db = 0;     // excess path loss, non line of sight
    double alpha = 0;           // environment sigmoid parameter
    double beta = 0;            // environment sigmoid parameter
    double carrier_mhz = 0;
    double bandwidth_hz = 0;
};

struct A2aParams {
    double tx_power_w = 0;
    double gain_tx = 0;                  // linear antenna gain
    double gain_rx = 0;
    double carrier_hz = 0;
    double boltzmann_j_per_k = 1.380649e-23;
    double noise_temp_k = 0;
    double bandwidth_hz = 0;
};

struct S2gParams {
    double tx_power_w = 0;
    double gain_tx = 0;
    double gain_rx = 0;
    double free_space_loss = 0;   // linear factor in (0, 1]
    double rain_attenuation = 0;  // linear factor in (0, 1]
    double noise_power_w = 0;
    double bandwidth_hz = 0;
};

/// Alternate readings of the published formulas, all off by default.
struct ChannelVariants {
    /// Multiply the raw dB-valued bracket of the ground-air SNR instead of
    /// converting it to a linear attenuation first.
    bool g2u_literal_bracket = false;
    /// Square the distance term of the air-air SNR (textbook free-space law)
    /// instead of the first-power form used by default.
    bool a2a_squared_law = false;
};

struct ChannelParams {
    G2uParams g2u;
    A2aParams a2a;
    S2gParams s2g;
    ChannelVariants variants;
};

/// Elevation angle in degrees of `rx` seen from `tx`: (180/pi)*asin(h/d) with
/// h the height difference and d the straight-line distance.
/// Requires d > 0 and 0 <= h <= d.
double elevation_deg(const Vec3& tx_pos, const Vec3& rx_pos);

/// Free-space + non-line-of-sight part of the ground-air path loss in dB:
/// 20*log10(4*pi*d*f_c/300) + eta_nlos, with d in metres and f_c in MHz.
double g2u_fspl_term_db(const G2uParams& p, double distance_m);

/// Sigmoid line-of-sight correction in dB:
/// (eta_los - eta_nlos) / (1 + alpha*exp(-beta*(sigma - alpha))).
double g2u_sigmoid_term_db(const G2uParams& p, double elevation_deg);

/// Linear SNR of a ground-air link. The two dB terms above form the mean
/// path loss; by default it is converted to a linear attenuation
/// 10^(-loss/10) and applied to tx_power/noise_power.
double snr_g2u(const ChannelParams& params, const Vec3& ground_pos, const Vec3& air_pos);

/// Linear SNR of an air-air (UAV/satellite) link at the given distance.
double snr_a2a(const ChannelParams& params, double distance_m);

/// Linear SNR of a satellite-ground link (distance-independent).
double snr_s2g(const ChannelParams& params);

/// Achievable rate in bit/s: bandwidth * log2(1 + SNR), with the SNR and
/// bandwidth chosen by link class. G2U-class links are symmetric in the
/// ground/air endpoints; storage links carry no rate.
double link_rate(LinkClass cls, const ChannelParams& params,
                 const Vec3& from_pos, const Vec3& to_pos);

}  // namespace sagin
