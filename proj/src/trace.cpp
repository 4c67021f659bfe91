#include "nora/trace.hpp"

#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nora {

void SlotTrace::resize(int K, int L) {
    num_slots = K;
    max_attempts = L;
    std::size_t n = static_cast<std::size_t>(K) * L;
    t_ms.assign(K, 0.0);
    for (auto* a : {&u, &u_ps, &u_ps1, &u_ps2, &u_pf, &u_ms, &u_mf})
        a->assign(n, 0.0);
}

double SlotTrace::slot_total(int k) const {
    double s = 0.0;
    for (int l = 0; l < max_attempts; ++l) s += at(u, k, l);
    return s;
}

double SlotTrace::slot_successes(int k) const {
    double s = 0.0;
    for (int l = 0; l < max_attempts; ++l) s += at(u_ms, k, l);
    return s;
}

double SlotTrace::total(const std::vector<double>& a) const {
    return std::accumulate(a.begin(), a.end(), 0.0);
}

double SlotTrace::total_successes() const { return total(u_ms); }

std::string SlotTrace::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "k,l,U,U_PS,U_PS1,U_PS2,U_PF,U_MS,U_MF\n";
    for (int k = 0; k < num_slots; ++k)
        for (int l = 0; l < max_attempts; ++l) {
            std::size_t i = idx(k, l);
            out << (k + 1) << ',' << (l + 1) << ',' << u[i] << ',' << u_ps[i]
                << ',' << u_ps1[i] << ',' << u_ps2[i] << ',' << u_pf[i] << ','
                << u_ms[i] << ',' << u_mf[i] << '\n';
        }
    return out.str();
}

std::string SlotTrace::to_json() const {
    nlohmann::json j;
    j["num_slots"] = num_slots;
    j["max_attempts"] = max_attempts;
    j["t_ms"] = t_ms;
    j["U"] = u;
    j["U_PS"] = u_ps;
    j["U_PS1"] = u_ps1;
    j["U_PS2"] = u_ps2;
    j["U_PF"] = u_pf;
    j["U_MS"] = u_ms;
    j["U_MF"] = u_mf;
    if (has_realized_occupancy()) {
        j["idle_preambles"] = idle_preambles;
        j["undetected_collisions"] = undetected_collisions;
    }
    j["clamp_events"] = clamp_events;
    return j.dump(2);
}

}  // namespace nora
