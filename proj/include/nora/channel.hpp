#ifndef NORA_CHANNEL_HPP_
#define NORA_CHANNEL_HPP_

#include <utility>

#include "nora/config.hpp"
#include "nora/rng.hpp"

namespace nora {

/// SIC outage parameterization. The appendix's sigma^2 / P_j / l_j^2 factors
/// are folded into a single configured arrived SNR gamma_target with
/// per-order back-off gamma_j = gamma_target * 10^{-(j-1) delta / 10}, the
/// only parameterization consistent with a single target-SNR figure.
struct OutageParams {
    double gamma_target;  // linear arrived SNR of the order-1 / solo UE
    double delta_db;      // power back-off offset
    double rate_target0;  // solo UE target rate (bits/s/Hz)
    double rate_target1;  // 1st decoded UE of a group
    double rate_target2;  // 2nd decoded UE of a group
    double theta;         // Rayleigh scale

    static OutageParams from_config(const ScenarioConfig& cfg);

    double gamma(int order) const;  // order >= 1
    double phi0() const;            // (2^R0 - 1) / gamma_target
    double phi1() const;
    double phi2() const;
    double alpha1() const;  // 2 / (1 + 10^{-delta/10}(2^R1 - 1))

    /// The group closed forms derive from decoding the stronger of two i.i.d.
    /// Rayleigh gains first; that derivation needs 10^{-delta/10}(2^R1-1) >= 1
    /// (equivalently alpha1 <= 1). Outside this region the closed forms can
    /// leave [0,1] and the configuration is flagged.
    bool group_forms_valid() const;
};

/// Transmit power of the order-i member of a group, Eq-style dBm bookkeeping
/// around the folded SNR model; documents the gamma_i reduction.
double backoff_transmit_power_dbm(int order, double p0_dbm, double delta_db,
                                  double num_rbs, double alpha_pc,
                                  double pathloss_db);

/// Outage probability of an uncollided UE: 1 - e^{-phi0 / 2 theta^2}.
double outage_single(const OutageParams& params);

/// Outage probabilities (p_out1, p_out2) of the two decoded UEs of a group,
/// clamped to [0,1]. Check group_forms_valid() before trusting them.
std::pair<double, double> outage_group(const OutageParams& params);

struct SicDecodeResult {
    bool ue1_ok;  // first decoded (order 1, smaller TA)
    bool ue2_ok;
};

/// One sampled SIC decode of a two-UE group, realizing the probability model
/// behind the closed forms: the first decode sees the larger of two i.i.d.
/// exponential gains (mean 2 theta^2) against the smaller as interference;
/// the second decode, conditional on the first, uses an independent gain
/// draw (the closed forms treat the two stages as independent).
SicDecodeResult sample_sic_decode(const OutageParams& params, RngStream& rng);

/// One sampled solo decode: rate log2(1 + gamma |v|^2) against rate_target0.
bool sample_single_decode(const OutageParams& params, RngStream& rng);

}  // namespace nora

#endif  // NORA_CHANNEL_HPP_
