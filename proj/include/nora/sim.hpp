#ifndef NORA_SIM_HPP_
#define NORA_SIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nora/channel.hpp"
#include "nora/config.hpp"
#include "nora/model_core.hpp"
#include "nora/trace.hpp"

namespace nora {

enum class UEState { WaitingSlot, BackingOff, AwaitingRAR, AwaitingCR, Succeeded, Failed };

enum class AttemptOutcome : std::uint8_t {
    PreambleFail,       // not detected (gate, unresolvable pair, >=3 group)
    MessageFail,        // detected but Msg3/CR failed
    Success,
};

/// One simulated UE across its whole RA lifetime.
struct UERecord {
    std::int64_t id = 0;
    double arrival_ms = 0.0;
    double distance_m = 0.0;
    int attempts = 0;
    UEState state = UEState::WaitingSlot;
    double first_tx_ms = -1.0;      // start of the first preamble slot
    double completion_ms = -1.0;    // success or declared-failure time
    std::vector<AttemptOutcome> outcomes;  // one per attempt

    double access_delay_ms() const {
        return completion_ms >= 0.0 && first_tx_ms >= 0.0
                   ? completion_ms - first_tx_ms
                   : -1.0;
    }
};

/// One UE transmitting a preamble in the current slot.
struct Transmitter {
    std::int64_t id;
    double distance_m;
    int attempt;        // 1-based attempt index l
    int preamble = -1;  // filled by preamble_phase
};

/// Per-slot detection outcome; every transmitter lands in exactly one bucket.
struct SlotOutcome {
    std::vector<std::int64_t> detected_singles;  // alone on preamble, gate passed
    // resolvable pair, both gates passed; .first decodes first (smaller TA)
    std::vector<std::pair<std::int64_t, std::int64_t>> nora_pairs;
    std::vector<std::int64_t> lone_group_detections;  // partner's gate failed
    std::vector<std::int64_t> preamble_failures;
    // realistic scenario-1 only: pair shares one RAR, Msg3 collides
    std::vector<std::int64_t> msg3_collisions;
    int idle_preambles = 0;
    int undetected_collisions = 0;  // unresolvable or >= 3 UEs on one preamble
};

/// Uniform preamble choice per transmitter, then per-preamble resolution:
/// singles gated by p_l; two-UE groups resolvable when their arrival-time
/// gap reaches t_rms (NORA only), each member gated by its own p_l; groups
/// of three or more always collide. Transmitters must be sorted by id.
SlotOutcome preamble_phase(std::vector<Transmitter>& txs,
                           const ScenarioConfig& cfg, const PreamblePool& pool,
                           RngStream& rng);

struct MessageOutcome {
    std::vector<std::int64_t> succeeded;
    std::vector<std::int64_t> msg_failures;
};

/// Msg3/CR phase over the detected UEs of one slot: solo decodes for singles
/// and lone group detections, sampled SIC decodes for pairs.
MessageOutcome rar_msg3_phase(const SlotOutcome& outcome,
                              const OutageParams& params, RngStream& rng);

/// Retry eligibility time after a failure at slot start `now_ms`:
/// turnaround + Uniform(0, W_BO].
double schedule_backoff(AttemptOutcome outcome, double now_ms,
                        const struct BackoffKernel& kern, RngStream& rng);

struct SimulationResult {
    SlotTrace trace;
    std::vector<UERecord> ues;

    std::string ue_log_csv() const;  // id,arrival_ms,distance_m,attempts,delay_ms,state
};

/// Per-UE Monte Carlo pass over the full four-message handshake.
/// Deterministic for fixed (cfg, seed): UEs are processed in id order and
/// slot buckets keyed by (slot, id).
SimulationResult run_simulation(const ScenarioConfig& cfg, std::uint64_t seed);

/// Mean trace over `replications` independent runs seeded by
/// derive_seed(cfg.seed, r).
SlotTrace mean_trace(const ScenarioConfig& cfg, int replications,
                     int num_threads = 0);

}  // namespace nora

#endif  // NORA_SIM_HPP_
