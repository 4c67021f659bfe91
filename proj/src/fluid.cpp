#include "nora/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nora {

BackoffKernel BackoffKernel::from_config(const ScenarioConfig& cfg) {
    return BackoffKernel{cfg.w_bo_ms, cfg.t_pf0_ms(), cfg.t_mf0_ms(),
                         cfg.t_rap_ms};
}

int ra_interval_slots(const ScenarioConfig& cfg) {
    double t_w = std::ceil(cfg.t_rap_ms / 2.0);
    double worst_turnaround = std::max(cfg.t_pf0_ms(), cfg.t_mf0_ms());
    double t_ra = (cfg.max_attempts - 1) * (worst_turnaround + cfg.w_bo_ms) +
                  cfg.t_s_ms();
    double t_rai = cfg.arrival.t_ap_ms + t_w + t_ra;
    return static_cast<int>(std::ceil(t_rai / cfg.t_rap_ms));
}

namespace {

// Overlap of the backoff expiry window (a, a + W_BO] of a failure at slot
// start time t_src with the transmission interval (t_dst - T_RAP, t_dst],
// as a fraction of W_BO.
double window_overlap(double t_src, double turnaround, int k_src, int k_dst,
                      const BackoffKernel& kern) {
    if (k_dst <= k_src) return 0.0;
    double a = t_src + turnaround;
    double b = a + kern.w_bo_ms;
    double t_dst = t_src + (k_dst - k_src) * kern.t_rap_ms;
    double lo = std::max(a, t_dst - kern.t_rap_ms);
    double hi = std::min(b, t_dst);
    return hi > lo ? (hi - lo) / kern.w_bo_ms : 0.0;
}

}  // namespace

double backoff_overlap_pf(int k_src, int k_dst, const BackoffKernel& kern) {
    return window_overlap((k_src - 1) * kern.t_rap_ms, kern.t_pf0_ms, k_src,
                          k_dst, kern);
}

double backoff_overlap_mf(int k_src, int k_dst, const BackoffKernel& kern) {
    return window_overlap((k_src - 1) * kern.t_rap_ms, kern.t_mf0_ms, k_src,
                          k_dst, kern);
}

DetectSplit detect_split(double u_k_l, double u_k, int attempt,
                         const PreamblePool& pool, double p_s2) {
    DetectSplit out{0.0, 0.0, 0.0, false};
    if (u_k_l <= 0.0 || u_k <= 0.0) {
        out.u_pf = std::max(u_k_l, 0.0);
        return out;
    }
    const double R = pool.num_preambles;
    double p_l = pool.detection_probability(attempt);
    double solo = u_k_l * p_l * std::exp(-u_k / R);
    // pair coefficient is an expectation; for sub-unit fluid mass it would
    // go negative, which just means no pairs
    double pair_coeff = std::max(p_s2 * (u_k - 1.0) / (2.0 * (R - 1.0)), 0.0);
    double grouped = pair_coeff * solo;
    double detected = solo + grouped;
    if (detected > u_k_l) {
        double scale = u_k_l / detected;
        solo *= scale;
        grouped *= scale;
        detected = u_k_l;
        out.clamped = true;
    }
    out.u_ps1 = solo;
    out.u_ps2 = grouped;
    out.u_pf = u_k_l - detected;
    return out;
}

MessageSplit message_split(double u_ps1, double u_ps2,
                           const OutageParams& outage) {
    double p0 = outage_single(outage);
    auto [p1, p2] = outage_group(outage);
    double u_ms = (1.0 - p0) * u_ps1 + (1.0 - 0.5 * (p1 + p2)) * u_ps2;
    return {u_ms, u_ps1 + u_ps2 - u_ms};
}

SlotTrace run_fluid_model(const ScenarioConfig& cfg) {
    cfg.validate();
    const int K = ra_interval_slots(cfg);
    const int L = cfg.max_attempts;
    const BackoffKernel kern = BackoffKernel::from_config(cfg);
    const PreamblePool pool = PreamblePool::from_config(cfg);
    const OutageParams outage = OutageParams::from_config(cfg);
    const double p_s2 = cfg.scheme == Scheme::NORA
                            ? separability_probabilities(cfg.cell).p_s2
                            : 0.0;

    SlotTrace trace;
    trace.resize(K, L);
    for (int k = 0; k < K; ++k) trace.t_ms[k] = k * cfg.t_rap_ms;

    // Relative destination weights depend only on the slot offset because
    // slot starts are equally spaced.
    auto kernel_weights = [&](double turnaround) {
        std::vector<std::pair<int, double>> w;
        int d_min = static_cast<int>(std::floor(turnaround / kern.t_rap_ms));
        int d_max = static_cast<int>(
            std::ceil((turnaround + kern.w_bo_ms) / kern.t_rap_ms) + 1);
        for (int d = std::max(d_min, 1); d <= d_max; ++d) {
            double p = window_overlap(0.0, turnaround, 0, d, kern);
            if (p > 0.0) w.emplace_back(d, p);
        }
        return w;
    };
    const auto pf_weights = kernel_weights(kern.t_pf0_ms);
    const auto mf_weights = kernel_weights(kern.t_mf0_ms);

    // Arrival seeding of first attempts.
    const double total_ues = static_cast<double>(cfg.num_ues);
    for (int k = 0; k < K; ++k)
        trace.at(trace.u, k, 0) =
            arrival_mass(trace.t_ms[k], cfg.t_rap_ms, cfg.arrival, total_ues);

    for (int k = 0; k < K; ++k) {
        double u_k = trace.slot_total(k);
        if (u_k <= 0.0) continue;
        for (int l = 0; l < L; ++l) {
            double u_k_l = trace.at(trace.u, k, l);
            if (u_k_l <= 0.0) continue;
            DetectSplit det = detect_split(u_k_l, u_k, l + 1, pool, p_s2);
            if (det.clamped) ++trace.clamp_events;
            MessageSplit msg = message_split(det.u_ps1, det.u_ps2, outage);
            trace.at(trace.u_ps1, k, l) = det.u_ps1;
            trace.at(trace.u_ps2, k, l) = det.u_ps2;
            trace.at(trace.u_ps, k, l) = det.u_ps1 + det.u_ps2;
            trace.at(trace.u_pf, k, l) = det.u_pf;
            trace.at(trace.u_ms, k, l) = msg.u_ms;
            trace.at(trace.u_mf, k, l) = msg.u_mf;
            if (std::isnan(det.u_pf) || std::isnan(msg.u_ms) || det.u_pf < 0.0 ||
                msg.u_ms < 0.0 || msg.u_mf < 0.0)
                throw std::runtime_error("fluid model produced invalid mass");
            if (l + 1 < L) {
                // redistribute failures to later slots
                for (const auto& [d, p] : pf_weights)
                    if (k + d < K)
                        trace.at(trace.u, k + d, l + 1) += p * det.u_pf;
                for (const auto& [d, p] : mf_weights)
                    if (k + d < K)
                        trace.at(trace.u, k + d, l + 1) += p * msg.u_mf;
            }
        }
    }
    return trace;
}

}  // namespace nora
