#ifndef NORA_METRICS_HPP_
#define NORA_METRICS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "nora/config.hpp"
#include "nora/trace.hpp"

namespace nora {

/// Timing constants of the delay model; all in ms.
struct DelayConstants {
    double t_pf0, t_mf0, t_s;
    double t_backoff_mean;       // W_BO / 2
    double t_pf_mean, t_mf_mean; // turnaround + mean backoff
    double p_pf, p_mf;           // trace-level failure probabilities
    double t_f_mean;             // failure-mix average per Eq-form weighting

    // mean delay of a UE succeeding on attempt l: (l-1) T_F + T_S
    double attempt_delay(int l) const {
        return (l - 1) * t_f_mean + t_s;
    }
};

struct CdfPoint {
    double x;
    double p;
};

/// The eight KPIs plus CDF tables, identical across both engines.
struct MetricsReport {
    double r_ra = 0.0;          // successfully accessed UEs
    double p_c = 0.0;           // collision probability
    std::optional<double> p_s;  // access success probability (needs U > 0)
    std::vector<CdfPoint> preamble_cdf;  // F(m), m = 1..L
    std::vector<CdfPoint> delay_cdf;     // G(d) on the reachable delay grid
    std::optional<double> mean_attempts;    // L-bar
    std::optional<double> mean_delay_ms;    // D-bar_RA (delay-model based)
    std::optional<double> mean_delay_measured_ms;  // simulated runs only
    std::vector<double> per_slot_successes;
    std::vector<double> per_slot_failures;  // U_k - successes
    DelayConstants constants{};
    int negative_collision_slots = 0;  // clamped Eq-form numerators

    std::string to_json() const;
    /// One flat CSV row; `header` emits the column line.
    static std::string csv_header();
    std::string to_csv_row(const std::string& label) const;
    static std::string cdf_csv(const std::vector<CdfPoint>& cdf);
};

DelayConstants delay_constants(const ScenarioConfig& cfg, const SlotTrace& trace);

/// Eq-form collision probability. Analytic traces use the occupancy
/// expectation for idle preambles; simulated traces substitute the realized
/// idle count. Negative per-slot numerators are clamped to zero and counted.
double collision_probability(const SlotTrace& trace, const ScenarioConfig& cfg,
                             int* negative_slots = nullptr);

std::optional<double> access_success(const SlotTrace& trace, double total_ues);

std::vector<CdfPoint> preamble_cdf(const SlotTrace& trace);
std::vector<CdfPoint> delay_cdf(const SlotTrace& trace,
                                const DelayConstants& constants);

struct Averages {
    std::optional<double> mean_attempts;
    std::optional<double> mean_delay_ms;
};
Averages averages(const SlotTrace& trace, const DelayConstants& constants);

/// Full report over one trace.
MetricsReport compute_metrics(const ScenarioConfig& cfg, const SlotTrace& trace);

}  // namespace nora

#endif  // NORA_METRICS_HPP_
