#ifndef NORA_TRACE_HPP_
#define NORA_TRACE_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace nora {

/// Per-slot, per-attempt expected (or realized) UE counts. Indexed
/// [k][l] with k in [0, K) and l in [0, L); slot k starts at t_ms[k].
/// Analytic traces are real-valued, simulated traces hold integers.
struct SlotTrace {
    int num_slots = 0;     // K
    int max_attempts = 0;  // L
    std::vector<double> t_ms;  // slot start times

    // flattened [k * L + l]
    std::vector<double> u;      // transmitting UEs
    std::vector<double> u_ps;   // preamble detected
    std::vector<double> u_ps1;  // detected, no collision
    std::vector<double> u_ps2;  // detected, member of a resolvable group
    std::vector<double> u_pf;   // preamble failed
    std::vector<double> u_ms;   // message succeeded
    std::vector<double> u_mf;   // preamble ok, message failed

    // Simulated traces additionally record the realized per-slot preamble
    // occupancy outcome; empty for analytic traces.
    std::vector<double> idle_preambles;
    std::vector<double> undetected_collisions;

    // Slots where a detection split had to be clamped to preserve mass.
    int clamp_events = 0;

    void resize(int K, int L);
    std::size_t idx(int k, int l) const {
        return static_cast<std::size_t>(k) * max_attempts + l;
    }

    double& at(std::vector<double>& a, int k, int l) { return a[idx(k, l)]; }
    double at(const std::vector<double>& a, int k, int l) const {
        return a[idx(k, l)];
    }

    double slot_total(int k) const;           // U_k
    double slot_successes(int k) const;       // sum_l U_MS[k][l]
    double total_successes() const;           // R_RA
    double total(const std::vector<double>& a) const;

    bool has_realized_occupancy() const { return !idle_preambles.empty(); }

    /// Columnar CSV: k,l,U,U_PS,U_PS1,U_PS2,U_PF,U_MS,U_MF
    /// (stable order, one row per (k,l); k and l are 1-based).
    std::string to_csv() const;
    std::string to_json() const;
};

}  // namespace nora

#endif  // NORA_TRACE_HPP_
