#ifndef NORA_FLUID_HPP_
#define NORA_FLUID_HPP_

#include <stdexcept>

#include "nora/channel.hpp"
#include "nora/config.hpp"
#include "nora/model_core.hpp"
#include "nora/trace.hpp"

namespace nora {

/// Timing of the uniform-backoff redistribution of failed UEs.
struct BackoffKernel {
    double w_bo_ms;   // backoff window
    double t_pf0_ms;  // preamble-failure turnaround
    double t_mf0_ms;  // message-failure turnaround
    double t_rap_ms;  // RA slot period

    static BackoffKernel from_config(const ScenarioConfig& cfg);
};

/// Number of RA slots covering the whole RA interval: K = ceil(T_RAI/T_RAP)
/// with T_RAI = T_AP + T_W + T_RA, T_W = ceil(T_RAP/2) subframes and
/// T_RA = (L-1)(max(T_PF0,T_MF0)+W_BO) + T_S (worst-case UE lifetime).
int ra_interval_slots(const ScenarioConfig& cfg);

struct DetectSplit {
    double u_ps1;
    double u_ps2;
    double u_pf;
    bool clamped;  // model breakdown: detected mass exceeded the input
};

/// Split the U_k[l] transmitters of attempt l into detected-solo,
/// detected-group and failed mass, given U_k total transmitters in the slot.
DetectSplit detect_split(double u_k_l, double u_k, int attempt,
                         const PreamblePool& pool, double p_s2);

struct MessageSplit {
    double u_ms;
    double u_mf;
};

/// Apply the outage coefficients to detected mass.
MessageSplit message_split(double u_ps1, double u_ps2,
                           const OutageParams& outage);

/// Fraction of the preamble-failure backoff window of source slot k_src that
/// lands in the transmission interval of slot k_dst (1-based slots). Computed
/// as direct time-interval overlap; sums to 1 over k_dst for interior k_src.
double backoff_overlap_pf(int k_src, int k_dst, const BackoffKernel& kern);
double backoff_overlap_mf(int k_src, int k_dst, const BackoffKernel& kern);

/// The deterministic fluid-flow engine: forward recursion over slots,
/// seeding first attempts from the arrival model and redistributing failed
/// mass through the backoff kernels. ORA forces p_s2 = 0.
SlotTrace run_fluid_model(const ScenarioConfig& cfg);

}  // namespace nora

#endif  // NORA_FLUID_HPP_
