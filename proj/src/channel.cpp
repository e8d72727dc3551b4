#include "sagin/channel.hpp"

#include <cmath>

namespace sagin {

double elevation_deg(const Vec3& tx_pos, const Vec3& rx_pos) {
    double d = (rx_pos - tx_pos).norm();
    double h = rx_pos.z() - tx_pos.z();
    if (d <= 0.0) throw std::domain_error("elevation_deg: coincident endpoints");
    if (h < 0.0) throw std::domain_error("elevation_deg: receiver below transmitter");
    if (h > d) throw std::domain_error("elevation_deg: height exceeds distance");
    return 180.0 / M_PI * std::asin(h / d);
}

double g2u_fspl_term_db(const G2uParams& p, double distance_m) {
    return 20.0 * std::log10(4.0 * M_PI * distance_m * p.carrier_mhz / 300.0) + p.eta_nlos_db;
}

double g2u_sigmoid_term_db(const G2uParams& p, double elevation_deg) {
    return (p.eta_los_db - p.eta_nlos_db) /
           (1.0 + p.alpha * std::exp(-p.beta * (elevation_deg - p.alpha)));
}

double snr_g2u(const ChannelParams& params, const Vec3& ground_pos, const Vec3& air_pos) {
    const G2uParams& p = params.g2u;
    double d = (air_pos - ground_pos).norm();
    double sigma = elevation_deg(ground_pos, air_pos);
    double loss_db = g2u_sigmoid_term_db(p, sigma) + g2u_fspl_term_db(p, d);
    double budget = p.tx_power_w / p.noise_power_w;
    if (params.variants.g2u_literal_bracket) return budget * loss_db;
    return budget * std::pow(10.0, -loss_db / 10.0);
}

double snr_a2a(const ChannelParams& params, double distance_m) {
    const A2aParams& p = params.a2a;
    constexpr double c = 299792458.0;  // m/s
    double path = 4.0 * M_PI * p.carrier_hz * distance_m / c;
    if (params.variants.a2a_squared_law) path *= path;
    double noise = p.boltzmann_j_per_k * p.noise_temp_k * p.bandwidth_hz;
    return p.tx_power_w * p.gain_tx * p.gain_rx / (path * noise);
}

double snr_s2g(const ChannelParams& params) {
    const S2gParams& p = params.s2g;
    return p.tx_power_w * p.gain_tx * p.gain_rx * p.free_space_loss * p.rain_attenuation /
           (p.noise_power_w * p.bandwidth_hz);
}

double link_rate(LinkClass cls, const ChannelParams& params,
                 const Vec3& from_pos, const Vec3& to_pos) {
    double snr = 0;
    double bandwidth = 0;
    switch (cls) {
        case LinkClass::G2U: {
            // symmetric: take the lower endpoint as ground side
            const Vec3& g = from_pos.z() <= to_pos.z() ? from_pos : to_pos;
            const Vec3& a = from_pos.z() <= to_pos.z() ? to_pos : from_pos;
            snr = snr_g2u(params, g, a);
            bandwidth = params.g2u.bandwidth_hz;
            break;
        }
        case LinkClass::U2U:
        case LinkClass::U2S:
        case LinkClass::S2S:
            snr = snr_a2a(params, (to_pos - from_pos).norm());
            bandwidth = params.a2a.bandwidth_hz;
            break;
        case LinkClass::S2G:
            snr = snr_s2g(params);
            bandwidth = params.s2g.bandwidth_hz;
            break;
        case LinkClass::Storage:
            throw std::domain_error("link_rate: storage links carry no rate");
    }
    return bandwidth * std::log2(1.0 + snr);
}

}  // namespace sagin
