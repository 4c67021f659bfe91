#ifndef NORA_MODEL_CORE_HPP_
#define NORA_MODEL_CORE_HPP_

#include <functional>
#include <utility>

#include "nora/config.hpp"
#include "nora/rng.hpp"

namespace nora {

/// Preamble resources of one RA slot plus the per-attempt detection gate.
struct PreamblePool {
    int num_preambles = 54;  // R
    std::function<double(int)> detection_probability;  // p_l, attempt l >= 1

    static PreamblePool from_config(const ScenarioConfig& cfg);
};

/// Radial density of the UE-to-base-station distance: 2x / d_c^2 on (0, d_c).
/// Throws std::domain_error outside the open interval.
double distance_density(double x_m, const CellGeometry& geom);

/// Inverse-CDF draw from the radial distance distribution.
double sample_distance(const CellGeometry& geom, RngStream& rng);

struct Separability {
    double p_s1;  // P{dt < t_rms}: pair indistinguishable
    double p_s2;  // P{dt >= t_rms}: pair resolvable
};

/// Closed-form CDF of the arrival-time gap of a uniform pair, evaluated at
/// t_rms and clamped to [0,1]. p_s1 + p_s2 == 1 exactly.
Separability separability_probabilities(const CellGeometry& geom);

/// Density of the arrival-time gap dt = |d1 - d2| / c on (0, d_c/c).
double arrival_gap_density(double dt_s, const CellGeometry& geom);

/// P{exactly i of m UEs pick one given preamble out of R}.
/// Log-domain for large m, exact products for m <= 30.
double occupancy_expectation(int i, int m, int R);

/// Expected number of detected preamble transmissions given m simultaneous
/// transmitters: ORA m(1-1/R)^{m-1}; NORA additionally counts resolvable
/// two-UE groups through p_s2.
double expected_preamble_successes(double m, int R, double p_s2, Scheme scheme);

/// Expected number of first attempts falling into the transmission interval
/// (slot_start - t_rap, slot_start] of one RA slot, out of `total_ues` UEs.
/// Uniform arrivals in closed form; Beta by adaptive quadrature (tol 1e-12).
double arrival_mass(double slot_start_ms, double t_rap_ms,
                    const ArrivalModel& arrival, double total_ues);

/// Arrival-time draw on [0, T_AP] (inverse CDF; Beta via ibeta inversion).
double sample_arrival_time(const ArrivalModel& arrival, RngStream& rng);

}  // namespace nora

#endif  // NORA_MODEL_CORE_HPP_
