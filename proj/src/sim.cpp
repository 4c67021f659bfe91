#include "nora/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "nora/fluid.hpp"

namespace nora {

SlotOutcome preamble_phase(std::vector<Transmitter>& txs,
                           const ScenarioConfig& cfg, const PreamblePool& pool,
                           RngStream& rng) {
    const int R = pool.num_preambles;
    for (auto& tx : txs) tx.preamble = static_cast<int>(rng.below(R));

    // stable per-preamble grouping, UEs in id order within a group
    std::map<int, std::vector<const Transmitter*>> groups;
    for (const auto& tx : txs) groups[tx.preamble].push_back(&tx);

    SlotOutcome out;
    out.idle_preambles = R - static_cast<int>(groups.size());

    const double c = CellGeometry::kPropagationSpeed;
    for (auto& [preamble, members] : groups) {
        if (members.size() == 1) {
            const Transmitter* tx = members.front();
            if (rng.uniform() < pool.detection_probability(tx->attempt))
                out.detected_singles.push_back(tx->id);
            else
                out.preamble_failures.push_back(tx->id);
            continue;
        }
        if (members.size() == 2 && cfg.scheme == Scheme::NORA) {
            const Transmitter* a = members[0];
            const Transmitter* b = members[1];
            double gap_s = std::fabs(a->distance_m - b->distance_m) / c;
            if (gap_s >= cfg.cell.t_rms_s) {
                bool a_ok = rng.uniform() < pool.detection_probability(a->attempt);
                bool b_ok = rng.uniform() < pool.detection_probability(b->attempt);
                if (a_ok && b_ok) {
                    // decode order by TA: nearer UE first
                    const Transmitter* near = a->distance_m <= b->distance_m ? a : b;
                    const Transmitter* far = near == a ? b : a;
                    out.nora_pairs.emplace_back(near->id, far->id);
                } else if (a_ok || b_ok) {
                    out.lone_group_detections.push_back(a_ok ? a->id : b->id);
                    out.preamble_failures.push_back(a_ok ? b->id : a->id);
                } else {
                    out.preamble_failures.push_back(a->id);
                    out.preamble_failures.push_back(b->id);
                }
                continue;
            }
            // unresolvable pair
            ++out.undetected_collisions;
            if (cfg.realistic_scenario1) {
                out.msg3_collisions.push_back(a->id);
                out.msg3_collisions.push_back(b->id);
            } else {
                out.preamble_failures.push_back(a->id);
                out.preamble_failures.push_back(b->id);
            }
            continue;
        }
        // ORA collision, or >= 3 UEs on one preamble
        ++out.undetected_collisions;
        for (const Transmitter* tx : members)
            out.preamble_failures.push_back(tx->id);
    }
    return out;
}

MessageOutcome rar_msg3_phase(const SlotOutcome& outcome,
                              const OutageParams& params, RngStream& rng) {
    MessageOutcome res;
    for (std::int64_t id : outcome.detected_singles) {
        if (sample_single_decode(params, rng))
            res.succeeded.push_back(id);
        else
            res.msg_failures.push_back(id);
    }
    // A lone detected member of a resolvable pair transmits alone in the
    // group's resources at order-1 power.
    for (std::int64_t id : outcome.lone_group_detections) {
        if (sample_single_decode(params, rng))
            res.succeeded.push_back(id);
        else
            res.msg_failures.push_back(id);
    }
    for (const auto& [first, second] : outcome.nora_pairs) {
        SicDecodeResult sic = sample_sic_decode(params, rng);
        (sic.ue1_ok ? res.succeeded : res.msg_failures).push_back(first);
        (sic.ue2_ok ? res.succeeded : res.msg_failures).push_back(second);
    }
    return res;
}

double schedule_backoff(AttemptOutcome outcome, double now_ms,
                        const BackoffKernel& kern, RngStream& rng) {
    double turnaround = outcome == AttemptOutcome::MessageFail ? kern.t_mf0_ms
                                                               : kern.t_pf0_ms;
    return now_ms + turnaround + rng.uniform_pos() * kern.w_bo_ms;
}

namespace {

// first slot whose transmission interval (t_{k-1}, t_k] contains tau
int slot_for_time(double tau_ms, double t_rap_ms, int num_slots) {
    int k = static_cast<int>(std::ceil(tau_ms / t_rap_ms));
    if (k < 0) k = 0;
    if (k >= num_slots) k = num_slots - 1;
    return k;
}

}  // namespace

SimulationResult run_simulation(const ScenarioConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int K = ra_interval_slots(cfg);
    const int L = cfg.max_attempts;
    const BackoffKernel kern = BackoffKernel::from_config(cfg);
    const PreamblePool pool = PreamblePool::from_config(cfg);
    const OutageParams outage = OutageParams::from_config(cfg);

    RngStream rng(seed);

    SimulationResult result;
    result.trace.resize(K, L);
    for (int k = 0; k < K; ++k) result.trace.t_ms[k] = k * cfg.t_rap_ms;
    result.trace.idle_preambles.assign(K, 0.0);
    result.trace.undetected_collisions.assign(K, 0.0);

    // The Eq-(4)-style horizon covers all but pathological backoff sample
    // paths; a few extra internal slots let every UE terminate. Attempts in
    // the overflow region are not recorded in the trace.
    const int overflow = static_cast<int>(std::ceil(
        L * (std::max(kern.t_pf0_ms, kern.t_mf0_ms) + kern.w_bo_ms +
             kern.t_rap_ms) /
        kern.t_rap_ms)) + 2;
    const int K_sim = K + overflow;

    result.ues.resize(cfg.num_ues);
    std::vector<std::vector<std::int64_t>> buckets(K_sim);
    for (std::int64_t id = 0; id < cfg.num_ues; ++id) {
        UERecord& ue = result.ues[id];
        ue.id = id;
        ue.arrival_ms = sample_arrival_time(cfg.arrival, rng);
        ue.distance_m = sample_distance(cfg.cell, rng);
        buckets[slot_for_time(ue.arrival_ms, cfg.t_rap_ms, K_sim)].push_back(id);
    }

    SlotTrace& trace = result.trace;
    std::vector<Transmitter> txs;
    for (int k = 0; k < K_sim; ++k) {
        const bool recorded = k < K;
        const double slot_time = k * cfg.t_rap_ms;
        if (buckets[k].empty()) {
            if (recorded) trace.idle_preambles[k] = pool.num_preambles;
            continue;
        }
        std::sort(buckets[k].begin(), buckets[k].end());
        txs.clear();
        for (std::int64_t id : buckets[k]) {
            UERecord& ue = result.ues[id];
            ++ue.attempts;
            if (ue.attempts == 1) ue.first_tx_ms = slot_time;
            ue.state = UEState::AwaitingRAR;
            txs.push_back({id, ue.distance_m, ue.attempts, -1});
            if (recorded) trace.at(trace.u, k, ue.attempts - 1) += 1.0;
        }

        SlotOutcome outcome = preamble_phase(txs, cfg, pool, rng);
        if (recorded) {
            trace.idle_preambles[k] = outcome.idle_preambles;
            trace.undetected_collisions[k] = outcome.undetected_collisions;
        }
        MessageOutcome msg = rar_msg3_phase(outcome, outage, rng);

        auto attempt_of = [&](std::int64_t id) {
            return result.ues[id].attempts - 1;  // 0-based l
        };
        auto bump = [&](std::vector<double>& col, std::int64_t id) {
            if (recorded) trace.at(col, k, attempt_of(id)) += 1.0;
        };
        for (std::int64_t id : outcome.detected_singles) bump(trace.u_ps1, id);
        for (std::int64_t id : outcome.lone_group_detections)
            bump(trace.u_ps2, id);
        for (const auto& [a, b] : outcome.nora_pairs) {
            bump(trace.u_ps2, a);
            bump(trace.u_ps2, b);
        }
        for (std::int64_t id : outcome.msg3_collisions) bump(trace.u_ps1, id);

        auto fail_or_retry = [&](std::int64_t id, AttemptOutcome why) {
            UERecord& ue = result.ues[id];
            ue.outcomes.push_back(why);
            double turnaround = why == AttemptOutcome::MessageFail
                                    ? kern.t_mf0_ms
                                    : kern.t_pf0_ms;
            if (ue.attempts >= L) {
                ue.state = UEState::Failed;
                ue.completion_ms = slot_time + turnaround;
                return;
            }
            ue.state = UEState::BackingOff;
            double tau = schedule_backoff(why, slot_time, kern, rng);
            int dest = slot_for_time(tau, cfg.t_rap_ms, K_sim);
            if (dest <= k) {  // ran off the simulated horizon
                ue.state = UEState::Failed;
                ue.completion_ms = slot_time + turnaround;
                return;
            }
            buckets[dest].push_back(id);
        };

        for (std::int64_t id : outcome.preamble_failures) {
            bump(trace.u_pf, id);
            fail_or_retry(id, AttemptOutcome::PreambleFail);
        }
        // scenario-1 realistic path: detected RAR but guaranteed Msg3 collision
        for (std::int64_t id : outcome.msg3_collisions) {
            bump(trace.u_mf, id);
            fail_or_retry(id, AttemptOutcome::MessageFail);
        }
        for (std::int64_t id : msg.msg_failures) {
            bump(trace.u_mf, id);
            fail_or_retry(id, AttemptOutcome::MessageFail);
        }
        for (std::int64_t id : msg.succeeded) {
            UERecord& ue = result.ues[id];
            ue.outcomes.push_back(AttemptOutcome::Success);
            ue.state = UEState::Succeeded;
            ue.completion_ms = slot_time + cfg.t_s_ms();
            bump(trace.u_ms, id);
        }
    }

    for (std::size_t i = 0; i < trace.u.size(); ++i)
        trace.u_ps[i] = trace.u_ps1[i] + trace.u_ps2[i];
    return result;
}

SlotTrace mean_trace(const ScenarioConfig& cfg, int replications,
                     int num_threads) {
    if (replications < 1) throw std::invalid_argument("replications >= 1");
    if (num_threads <= 0)
        num_threads = static_cast<int>(
            std::max(1u, std::thread::hardware_concurrency()));
    num_threads = std::min(num_threads, replications);

    std::vector<SlotTrace> partial(num_threads);
    std::vector<std::thread> workers;
    for (int w = 0; w < num_threads; ++w) {
        workers.emplace_back([&, w] {
            SlotTrace acc;
            for (int r = w; r < replications; r += num_threads) {
                SimulationResult res =
                    run_simulation(cfg, derive_seed(cfg.seed, r));
                if (acc.num_slots == 0) {
                    acc = std::move(res.trace);
                } else {
                    for (std::size_t i = 0; i < acc.u.size(); ++i) {
                        acc.u[i] += res.trace.u[i];
                        acc.u_ps[i] += res.trace.u_ps[i];
                        acc.u_ps1[i] += res.trace.u_ps1[i];
                        acc.u_ps2[i] += res.trace.u_ps2[i];
                        acc.u_pf[i] += res.trace.u_pf[i];
                        acc.u_ms[i] += res.trace.u_ms[i];
                        acc.u_mf[i] += res.trace.u_mf[i];
                    }
                    for (int k = 0; k < acc.num_slots; ++k) {
                        acc.idle_preambles[k] += res.trace.idle_preambles[k];
                        acc.undetected_collisions[k] +=
                            res.trace.undetected_collisions[k];
                    }
                    acc.clamp_events += res.trace.clamp_events;
                }
            }
            partial[w] = std::move(acc);
        });
    }
    for (auto& t : workers) t.join();

    SlotTrace sum;
    for (auto& p : partial) {
        if (p.num_slots == 0) continue;
        if (sum.num_slots == 0) {
            sum = std::move(p);
            continue;
        }
        for (std::size_t i = 0; i < sum.u.size(); ++i) {
            sum.u[i] += p.u[i];
            sum.u_ps[i] += p.u_ps[i];
            sum.u_ps1[i] += p.u_ps1[i];
            sum.u_ps2[i] += p.u_ps2[i];
            sum.u_pf[i] += p.u_pf[i];
            sum.u_ms[i] += p.u_ms[i];
            sum.u_mf[i] += p.u_mf[i];
        }
        for (int k = 0; k < sum.num_slots; ++k) {
            sum.idle_preambles[k] += p.idle_preambles[k];
            sum.undetected_collisions[k] += p.undetected_collisions[k];
        }
        sum.clamp_events += p.clamp_events;
    }
    double inv = 1.0 / replications;
    for (auto* a : {&sum.u, &sum.u_ps, &sum.u_ps1, &sum.u_ps2, &sum.u_pf,
                    &sum.u_ms, &sum.u_mf, &sum.idle_preambles,
                    &sum.undetected_collisions})
        for (double& v : *a) v *= inv;
    return sum;
}

namespace {

const char* state_name(UEState s) {
    switch (s) {
        case UEState::Succeeded: return "succeeded";
        case UEState::Failed: return "failed";
        case UEState::WaitingSlot: return "waiting";
        case UEState::BackingOff: return "backing_off";
        case UEState::AwaitingRAR: return "awaiting_rar";
        default: return "awaiting_cr";
    }
}

}  // namespace

std::string SimulationResult::ue_log_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "id,arrival_ms,distance_m,attempts,delay_ms,state\n";
    for (const auto& ue : ues)
        out << ue.id << ',' << ue.arrival_ms << ',' << ue.distance_m << ','
            << ue.attempts << ',' << ue.access_delay_ms() << ','
            << state_name(ue.state) << '\n';
    return out.str();
}

}  // namespace nora
