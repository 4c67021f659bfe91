#include "nora/channel.hpp"

#include <algorithm>
#include <cmath>

namespace nora {

OutageParams OutageParams::from_config(const ScenarioConfig& cfg) {
    OutageParams p;
    p.gamma_target = std::pow(10.0, cfg.gamma_target_db / 10.0);
    p.delta_db = cfg.delta_db;
    p.rate_target0 = cfg.rate_target0;
    p.rate_target1 = cfg.rate_target1;
    p.rate_target2 = cfg.rate_target2;
    p.theta = cfg.theta;
    return p;
}

double OutageParams::gamma(int order) const {
    return gamma_target * std::pow(10.0, -(order - 1) * delta_db / 10.0);
}

double OutageParams::phi0() const {
    return (std::exp2(rate_target0) - 1.0) / gamma(1);
}

double OutageParams::phi1() const {
    return (std::exp2(rate_target1) - 1.0) / gamma(1);
}

double OutageParams::phi2() const {
    return (std::exp2(rate_target2) - 1.0) / gamma(2);
}

double OutageParams::alpha1() const {
    double eps1 = std::exp2(rate_target1) - 1.0;
    return 2.0 / (1.0 + std::pow(10.0, -delta_db / 10.0) * eps1);
}

bool OutageParams::group_forms_valid() const {
    // Exactness region of the first-decode closed form: the rate constraint
    // must dominate the gain ordering for every interferer draw.
    double eps1 = std::exp2(rate_target1) - 1.0;
    return std::pow(10.0, -delta_db / 10.0) * eps1 >= 1.0;
}

double backoff_transmit_power_dbm(int order, double p0_dbm, double delta_db,
                                  double num_rbs, double alpha_pc,
                                  double pathloss_db) {
    return p0_dbm - (order - 1) * delta_db + 10.0 * std::log10(num_rbs) +
           alpha_pc * pathloss_db;
}

double outage_single(const OutageParams& params) {
    return 1.0 - std::exp(-params.phi0() / (2.0 * params.theta * params.theta));
}

std::pair<double, double> outage_group(const OutageParams& params) {
    double two_theta_sq = 2.0 * params.theta * params.theta;
    double a1 = params.alpha1();
    double p1 = 1.0 - a1 * std::exp(-params.phi1() / two_theta_sq);
    double p2 =
        1.0 - a1 * std::exp(-(params.phi1() + params.phi2()) / two_theta_sq);
    return {std::clamp(p1, 0.0, 1.0), std::clamp(p2, 0.0, 1.0)};
}

SicDecodeResult sample_sic_decode(const OutageParams& params, RngStream& rng) {
    double mean = 2.0 * params.theta * params.theta;
    double x = rng.exponential(mean);
    double y = rng.exponential(mean);
    double strong = std::max(x, y);
    double weak = std::min(x, y);
    double g1 = params.gamma(1), g2 = params.gamma(2);
    double rate1 = std::log2(1.0 + g1 * strong / (g2 * weak + 1.0));
    bool ue1_ok = rate1 >= params.rate_target1;
    bool ue2_ok = false;
    if (ue1_ok) {
        double z = rng.exponential(mean);
        ue2_ok = std::log2(1.0 + g2 * z) >= params.rate_target2;
    }
    return {ue1_ok, ue2_ok};
}

bool sample_single_decode(const OutageParams& params, RngStream& rng) {
    double g = rng.exponential(2.0 * params.theta * params.theta);
    return std::log2(1.0 + params.gamma(1) * g) >= params.rate_target0;
}

}  // namespace nora
