#include "nora/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nora {

DelayConstants delay_constants(const ScenarioConfig& cfg, const SlotTrace& trace) {
    DelayConstants c{};
    c.t_pf0 = cfg.t_pf0_ms();
    c.t_mf0 = cfg.t_mf0_ms();
    c.t_s = cfg.t_s_ms();
    c.t_backoff_mean = 0.5 * cfg.w_bo_ms;
    c.t_pf_mean = c.t_pf0 + c.t_backoff_mean;
    c.t_mf_mean = c.t_mf0 + c.t_backoff_mean;

    double total_u = trace.total(trace.u);
    double total_ps = trace.total(trace.u_ps);
    double total_pf = trace.total(trace.u_pf);
    double total_mf = trace.total(trace.u_mf);
    c.p_pf = total_u > 0.0 ? total_pf / total_u
                           : std::numeric_limits<double>::quiet_NaN();
    c.p_mf = total_ps > 0.0 ? total_mf / total_ps
                            : std::numeric_limits<double>::quiet_NaN();

    // failure-mix average; degenerate when nothing ever fails
    double w_pf = c.p_pf;
    double w_mf = (1.0 - c.p_pf) * (std::isnan(c.p_mf) ? 0.0 : c.p_mf);
    double denom = w_pf + w_mf;
    c.t_f_mean = denom > 0.0
                     ? (w_pf * c.t_pf_mean + w_mf * c.t_mf_mean) / denom
                     : c.t_pf_mean;
    return c;
}

double collision_probability(const SlotTrace& trace, const ScenarioConfig& cfg,
                             int* negative_slots) {
    const double R = cfg.num_preambles;
    const bool realized = trace.has_realized_occupancy();
    double sum = 0.0;
    int negatives = 0;
    for (int k = 0; k < trace.num_slots; ++k) {
        double u_k = trace.slot_total(k);
        double idle = realized ? trace.idle_preambles[k]
                               : R * std::pow(1.0 - 1.0 / R, u_k);
        double u_ps = 0.0;
        for (int l = 0; l < trace.max_attempts; ++l)
            u_ps += trace.at(trace.u_ps, k, l);
        double collided = R - idle - u_ps;
        if (collided < 0.0) {
            ++negatives;
            collided = 0.0;
        }
        sum += collided;
    }
    if (negative_slots) *negative_slots = negatives;
    return trace.num_slots > 0 ? sum / (trace.num_slots * R) : 0.0;
}

std::optional<double> access_success(const SlotTrace& trace, double total_ues) {
    if (total_ues <= 0.0) return std::nullopt;
    return trace.total_successes() / total_ues;
}

std::vector<CdfPoint> preamble_cdf(const SlotTrace& trace) {
    double total = trace.total_successes();
    if (total <= 0.0) return {};
    std::vector<CdfPoint> cdf;
    cdf.reserve(trace.max_attempts);
    double acc = 0.0;
    for (int l = 0; l < trace.max_attempts; ++l) {
        for (int k = 0; k < trace.num_slots; ++k)
            acc += trace.at(trace.u_ms, k, l);
        cdf.push_back({static_cast<double>(l + 1), acc / total});
    }
    return cdf;
}

std::vector<CdfPoint> delay_cdf(const SlotTrace& trace,
                                const DelayConstants& constants) {
    // grid of reachable delay values under the linear delay model
    std::vector<CdfPoint> f = preamble_cdf(trace);
    for (auto& p : f) p.x = constants.attempt_delay(static_cast<int>(p.x));
    return f;
}

Averages averages(const SlotTrace& trace, const DelayConstants& constants) {
    double total = trace.total_successes();
    if (total <= 0.0) return {};
    double weighted = 0.0;
    for (int l = 0; l < trace.max_attempts; ++l)
        for (int k = 0; k < trace.num_slots; ++k)
            weighted += trace.at(trace.u_ms, k, l) * (l + 1);
    double mean_attempts = weighted / total;
    Averages a;
    a.mean_attempts = mean_attempts;
    a.mean_delay_ms = (mean_attempts - 1.0) * constants.t_f_mean + constants.t_s;
    return a;
}

MetricsReport compute_metrics(const ScenarioConfig& cfg, const SlotTrace& trace) {
    MetricsReport r;
    r.constants = delay_constants(cfg, trace);
    r.r_ra = trace.total_successes();
    r.p_c = collision_probability(trace, cfg, &r.negative_collision_slots);
    r.p_s = access_success(trace, static_cast<double>(cfg.num_ues));
    r.preamble_cdf = preamble_cdf(trace);
    r.delay_cdf = delay_cdf(trace, r.constants);
    Averages a = averages(trace, r.constants);
    r.mean_attempts = a.mean_attempts;
    r.mean_delay_ms = a.mean_delay_ms;
    r.per_slot_successes.resize(trace.num_slots);
    r.per_slot_failures.resize(trace.num_slots);
    for (int k = 0; k < trace.num_slots; ++k) {
        double s = trace.slot_successes(k);
        r.per_slot_successes[k] = s;
        r.per_slot_failures[k] = trace.slot_total(k) - s;
    }
    return r;
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

std::string MetricsReport::to_json() const {
    nlohmann::json j;
    j["R_RA"] = r_ra;
    j["P_C"] = p_c;
    j["P_S"] = opt_json(p_s);
    j["mean_attempts"] = opt_json(mean_attempts);
    j["mean_delay_ms"] = opt_json(mean_delay_ms);
    j["mean_delay_measured_ms"] = opt_json(mean_delay_measured_ms);
    auto cdf_json = [](const std::vector<CdfPoint>& cdf) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& p : cdf) a.push_back({{"x", p.x}, {"p", p.p}});
        return a;
    };
    j["preamble_cdf"] = cdf_json(preamble_cdf);
    j["delay_cdf"] = cdf_json(delay_cdf);
    j["per_slot_successes"] = per_slot_successes;
    j["per_slot_failures"] = per_slot_failures;
    j["delay_constants"] = {
        {"T_PF0", constants.t_pf0},     {"T_MF0", constants.t_mf0},
        {"T_S", constants.t_s},         {"T_backoff", constants.t_backoff_mean},
        {"T_PF", constants.t_pf_mean},  {"T_MF", constants.t_mf_mean},
        {"T_F", constants.t_f_mean},    {"p_PF", constants.p_pf},
        {"p_MF", constants.p_mf},
    };
    j["negative_collision_slots"] = negative_collision_slots;
    return j.dump(2);
}

std::string MetricsReport::csv_header() {
    return "label,R_RA,P_C,P_S,mean_attempts,mean_delay_ms,F1,p_PF,p_MF\n";
}

std::string MetricsReport::to_csv_row(const std::string& label) const {
    std::ostringstream out;
    out.precision(17);
    auto opt = [&](const std::optional<double>& v) -> std::string {
        if (!v) return "na";
        std::ostringstream o;
        o.precision(17);
        o << *v;
        return o.str();
    };
    double f1 = preamble_cdf.empty() ? 0.0 : preamble_cdf.front().p;
    out << label << ',' << r_ra << ',' << p_c << ',' << opt(p_s) << ','
        << opt(mean_attempts) << ',' << opt(mean_delay_ms) << ',' << f1 << ','
        << constants.p_pf << ',' << constants.p_mf << '\n';
    return out.str();
}

std::string MetricsReport::cdf_csv(const std::vector<CdfPoint>& cdf) {
    std::ostringstream out;
    out.precision(17);
    out << "x,p\n";
    for (const auto& p : cdf) out << p.x << ',' << p.p << '\n';
    return out.str();
}

}  // namespace nora
