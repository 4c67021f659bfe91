#include "nora/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "nora/quad.hpp"

namespace nora {

PreamblePool PreamblePool::from_config(const ScenarioConfig& cfg) {
    PreamblePool pool;
    pool.num_preambles = cfg.num_preambles;
    pool.detection_probability = [&cfg](int l) {
        return cfg.detection_probability(l);
    };
    return pool;
}

double distance_density(double x_m, const CellGeometry& geom) {
    if (!(x_m > 0.0) || !(x_m < geom.d_c_m))
        throw std::domain_error("distance outside (0, d_c)");
    return 2.0 * x_m / (geom.d_c_m * geom.d_c_m);
}

double sample_distance(const CellGeometry& geom, RngStream& rng) {
    // CDF x^2/d_c^2 -> x = d_c sqrt(u)
    return geom.d_c_m * std::sqrt(rng.uniform_pos());
}

double arrival_gap_density(double dt_s, const CellGeometry& geom) {
    const double c = CellGeometry::kPropagationSpeed;
    const double dc = geom.d_c_m;
    if (dt_s < 0.0 || dt_s > dc / c) return 0.0;
    double y = dt_s;
    return 4.0 * c / (3.0 * std::pow(dc, 4)) *
           (2.0 * std::pow(dc, 3) - 3.0 * dc * dc * c * y + std::pow(c * y, 3));
}

Separability separability_probabilities(const CellGeometry& geom) {
    const double c = CellGeometry::kPropagationSpeed;
    const double dc = geom.d_c_m;
    const double t = geom.t_rms_s;
    // CDF of the arrival-time gap at t_rms; the quartic is only valid on
    // [0, d_c/c], so clamp.
    double p_s1 = 4.0 * c / (3.0 * std::pow(dc, 4)) *
                  (2.0 * std::pow(dc, 3) * t - 1.5 * dc * dc * c * t * t +
                   0.25 * std::pow(c, 3) * std::pow(t, 4));
    p_s1 = std::clamp(p_s1, 0.0, 1.0);
    return Separability{p_s1, 1.0 - p_s1};
}

double occupancy_expectation(int i, int m, int R) {
    if (i < 0 || m < 0 || i > m) throw std::domain_error("need 0 <= i <= m");
    if (R < 1) throw std::domain_error("need R >= 1");
    if (m == 0) return 1.0;
    const double p = 1.0 / R;
    if (m <= 30) {
        // exact products for small m
        double binom = 1.0;
        for (int j = 0; j < i; ++j)
            binom = binom * (m - j) / (j + 1);
        return binom * std::pow(p, i) * std::pow(1.0 - p, m - i);
    }
    double log_binom = std::lgamma(m + 1.0) - std::lgamma(i + 1.0) -
                       std::lgamma(m - i + 1.0);
    double logv = log_binom + i * std::log(p) + (m - i) * std::log1p(-p);
    return std::exp(logv);
}

double expected_preamble_successes(double m, int R, double p_s2, Scheme scheme) {
    if (m < 0.0) throw std::domain_error("need m >= 0");
    if (m == 0.0) return 0.0;
    double base = m * std::pow(1.0 - 1.0 / R, m - 1.0);
    if (scheme == Scheme::ORA) return base;
    return base * (1.0 + p_s2 * (m - 1.0) / (2.0 * (R - 1.0)));
}

double arrival_mass(double slot_start_ms, double t_rap_ms,
                    const ArrivalModel& arrival, double total_ues) {
    // transmission interval (t_{k-1}, t_k]; boundary mass goes to the later
    // slot, which the half-open interval realizes
    double lo = std::max(slot_start_ms - t_rap_ms, 0.0);
    double hi = std::min(slot_start_ms, arrival.t_ap_ms);
    if (hi <= lo) {
        // T_AP == 0 degenerates to a point mass at t = 0 in the first slot
        if (arrival.t_ap_ms == 0.0 && slot_start_ms - t_rap_ms < 0.0 &&
            slot_start_ms >= 0.0)
            return total_ues;
        return 0.0;
    }
    if (arrival.kind == ArrivalKind::Uniform)
        return total_ues * (hi - lo) / arrival.t_ap_ms;
    return total_ues *
           integrate([&](double t) { return arrival.density(t); }, lo, hi, 1e-12);
}

double sample_arrival_time(const ArrivalModel& arrival, RngStream& rng) {
    if (arrival.t_ap_ms == 0.0) return 0.0;
    double u = rng.uniform_pos();
    if (arrival.kind == ArrivalKind::Uniform) return u * arrival.t_ap_ms;
    return arrival.t_ap_ms * boost::math::ibeta_inv(arrival.alpha, arrival.beta, u);
}

}  // namespace nora
