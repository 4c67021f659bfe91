#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "nora/channel.hpp"
#include "nora/fluid.hpp"
#include "nora/rng.hpp"
#include "nora/sim.hpp"

using namespace nora;

namespace {

ScenarioConfig small_cfg() {
    ScenarioConfig cfg;
    cfg.num_ues = 800;
    cfg.arrival.t_ap_ms = 400.0;
    cfg.seed = 11;
    return cfg;
}

}  // namespace

TEST_CASE("preamble phase: singles, resolvable pairs, unresolvable pairs") {
    ScenarioConfig cfg;
    cfg.num_preambles = 2;
    PreamblePool pool = PreamblePool::from_config(cfg);
    RngStream rng(5);
    const int far_attempt = 30;  // detection gate ~ 1 - e^{-30}

    int paired = 0, colocated_failures = 0, ora_collisions = 0;
    for (int trial = 0; trial < 400; ++trial) {
        // 10 m and 490 m: arrival gap 1.6 us >= t_rms
        std::vector<Transmitter> txs = {{0, 490.0, far_attempt, -1},
                                        {1, 10.0, far_attempt, -1}};
        SlotOutcome out = preamble_phase(txs, cfg, pool, rng);
        if (txs[0].preamble == txs[1].preamble) {
            REQUIRE(out.nora_pairs.size() == 1);
            // nearer UE decodes first
            CHECK(out.nora_pairs[0].first == 1);
            CHECK(out.nora_pairs[0].second == 0);
            CHECK(out.idle_preambles == 1);
            CHECK(out.undetected_collisions == 0);
            ++paired;
        } else {
            CHECK(out.detected_singles.size() == 2);
            CHECK(out.idle_preambles == 0);
        }

        // co-located UEs can never be separated
        std::vector<Transmitter> close = {{0, 250.0, far_attempt, -1},
                                          {1, 250.0000001, far_attempt, -1}};
        SlotOutcome out2 = preamble_phase(close, cfg, pool, rng);
        if (close[0].preamble == close[1].preamble) {
            CHECK(out2.undetected_collisions == 1);
            CHECK(out2.preamble_failures.size() == 2);
            CHECK(out2.nora_pairs.empty());
            ++colocated_failures;
        }

        // under ORA any same-preamble pair collides
        ScenarioConfig ora = cfg;
        ora.scheme = Scheme::ORA;
        std::vector<Transmitter> otx = {{0, 490.0, far_attempt, -1},
                                        {1, 10.0, far_attempt, -1}};
        SlotOutcome out3 = preamble_phase(otx, ora, pool, rng);
        if (otx[0].preamble == otx[1].preamble) {
            CHECK(out3.undetected_collisions == 1);
            CHECK(out3.preamble_failures.size() == 2);
            ++ora_collisions;
        }
    }
    CHECK(paired > 100);  // same-preamble probability is 1/2
    CHECK(colocated_failures > 100);
    CHECK(ora_collisions > 100);
}

TEST_CASE("preamble phase: three or more on one preamble always collide") {
    ScenarioConfig cfg;
    cfg.num_preambles = 2;
    PreamblePool pool = PreamblePool::from_config(cfg);
    RngStream rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        // five equidistant UEs on two preambles: the >= 3 group collides and
        // the possible 2-group is unresolvable
        std::vector<Transmitter> txs;
        for (int i = 0; i < 5; ++i) txs.push_back({i, 300.0, 30, -1});
        SlotOutcome out = preamble_phase(txs, cfg, pool, rng);
        int on_first = 0;
        for (const auto& tx : txs)
            if (tx.preamble == txs[0].preamble) ++on_first;
        // the >= 3 group collides; a lone opposite UE is a detected single
        bool lone_single = on_first == 4 || on_first == 1;
        CHECK(out.preamble_failures.size() == (lone_single ? 4u : 5u));
        CHECK(out.detected_singles.size() == (lone_single ? 1u : 0u));
        CHECK(out.nora_pairs.empty());
        CHECK(out.undetected_collisions >= 1);
    }
}

TEST_CASE("unresolvable pairs can follow the shared-RAR Msg3-collision path") {
    ScenarioConfig cfg;
    cfg.num_preambles = 2;
    cfg.realistic_scenario1 = true;
    PreamblePool pool = PreamblePool::from_config(cfg);
    RngStream rng(13);
    int seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Transmitter> txs = {{0, 250.0, 30, -1},
                                        {1, 250.0, 30, -1}};
        SlotOutcome out = preamble_phase(txs, cfg, pool, rng);
        if (txs[0].preamble == txs[1].preamble) {
            CHECK(out.msg3_collisions.size() == 2);
            CHECK(out.preamble_failures.empty());
            CHECK(out.undetected_collisions == 1);
            ++seen;
        }
    }
    CHECK(seen > 50);
}

TEST_CASE("backoff scheduling lands in (turnaround, turnaround + W_BO]") {
    BackoffKernel kern = BackoffKernel::from_config(ScenarioConfig{});
    RngStream rng(77);
    for (int i = 0; i < 5000; ++i) {
        double pf = schedule_backoff(AttemptOutcome::PreambleFail, 100.0, kern, rng);
        CHECK(pf > 100.0 + kern.t_pf0_ms);
        CHECK(pf <= 100.0 + kern.t_pf0_ms + kern.w_bo_ms);
        double mf = schedule_backoff(AttemptOutcome::MessageFail, 100.0, kern, rng);
        CHECK(mf > 100.0 + kern.t_mf0_ms);
        CHECK(mf <= 100.0 + kern.t_mf0_ms + kern.w_bo_ms);
    }
}

TEST_CASE("single-UE runs reproduce the per-attempt success chain") {
    ScenarioConfig cfg;
    cfg.num_ues = 1;
    cfg.arrival.t_ap_ms = 50.0;
    OutageParams outage = OutageParams::from_config(cfg);
    double q0 = 1.0 - outage_single(outage);

    const int reps = 10'000;
    int first_attempt_success = 0, eventual_success = 0;
    for (int r = 0; r < reps; ++r) {
        SimulationResult res = run_simulation(cfg, derive_seed(3, r));
        const UERecord& ue = res.ues[0];
        REQUIRE((ue.state == UEState::Succeeded || ue.state == UEState::Failed));
        if (!ue.outcomes.empty() && ue.outcomes[0] == AttemptOutcome::Success) {
            ++first_attempt_success;
            CHECK(ue.attempts == 1);
            CHECK(ue.access_delay_ms() == doctest::Approx(cfg.t_s_ms()));
        }
        if (ue.state == UEState::Succeeded) ++eventual_success;
        CHECK(ue.first_tx_ms >= ue.arrival_ms);
        CHECK(ue.first_tx_ms - ue.arrival_ms < cfg.t_rap_ms + 1e-9);
    }
    // attempt 1: detected with 1 - e^{-1}, decoded with 1 - p_out0
    double p1 = (1.0 - std::exp(-1.0)) * q0;
    double se1 = std::sqrt(p1 * (1.0 - p1) / reps);
    CHECK(std::abs(first_attempt_success / double(reps) - p1) < 3.0 * se1);

    double p_fail = 1.0;
    for (int l = 1; l <= cfg.max_attempts; ++l)
        p_fail *= 1.0 - (1.0 - std::exp(-l)) * q0;
    double pe = 1.0 - p_fail;
    double se2 = std::sqrt(pe * (1.0 - pe) / reps) + 1e-9;
    CHECK(std::abs(eventual_success / double(reps) - pe) < 4.0 * se2);
}

TEST_CASE("every UE terminates and the trace is consistent") {
    for (bool nora : {true, false}) {
        ScenarioConfig cfg = small_cfg();
        cfg.scheme = nora ? Scheme::NORA : Scheme::ORA;
        SimulationResult res = run_simulation(cfg, 271828);
        const SlotTrace& t = res.trace;

        int succeeded = 0, failed = 0;
        for (const auto& ue : res.ues) {
            REQUIRE((ue.state == UEState::Succeeded ||
                     ue.state == UEState::Failed));
            CHECK(ue.attempts >= 1);
            CHECK(ue.attempts <= cfg.max_attempts);
            CHECK(static_cast<int>(ue.outcomes.size()) == ue.attempts);
            if (ue.state == UEState::Succeeded) {
                ++succeeded;
                CHECK(ue.outcomes.back() == AttemptOutcome::Success);
                CHECK(ue.access_delay_ms() >= cfg.t_s_ms() - 1e-9);
            } else {
                ++failed;
            }
        }
        CHECK(succeeded + failed == cfg.num_ues);
        CHECK(t.total_successes() == doctest::Approx(succeeded));

        for (int k = 0; k < t.num_slots; ++k) {
            double occupied = 0.0;
            for (int l = 0; l < t.max_attempts; ++l) {
                double u = t.at(t.u, k, l);
                double ps = t.at(t.u_ps, k, l);
                CHECK(t.at(t.u_ps1, k, l) + t.at(t.u_ps2, k, l) ==
                      doctest::Approx(ps));
                CHECK(ps + t.at(t.u_pf, k, l) == doctest::Approx(u));
                CHECK(t.at(t.u_ms, k, l) + t.at(t.u_mf, k, l) ==
                      doctest::Approx(ps));
                occupied += u;
            }
            // realized idle preambles never exceed R and account for load
            CHECK(t.idle_preambles[k] <= cfg.num_preambles);
            CHECK(t.idle_preambles[k] >=
                  cfg.num_preambles - occupied - 1e-9);
        }
    }
}

TEST_CASE("simulation is deterministic by seed") {
    ScenarioConfig cfg = small_cfg();
    SimulationResult a = run_simulation(cfg, 42);
    SimulationResult b = run_simulation(cfg, 42);
    SimulationResult c = run_simulation(cfg, 43);
    CHECK(a.trace.to_csv() == b.trace.to_csv());
    CHECK(a.ue_log_csv() == b.ue_log_csv());
    CHECK(a.trace.to_csv() != c.trace.to_csv());
}

TEST_CASE("mean trace averages independent replications") {
    ScenarioConfig cfg = small_cfg();
    cfg.num_ues = 300;
    SlotTrace mean = mean_trace(cfg, 2, 1);
    SlotTrace r0 = run_simulation(cfg, derive_seed(cfg.seed, 0)).trace;
    SlotTrace r1 = run_simulation(cfg, derive_seed(cfg.seed, 1)).trace;
    REQUIRE(mean.num_slots == r0.num_slots);
    for (std::size_t i = 0; i < mean.u.size(); ++i) {
        CHECK(mean.u[i] == doctest::Approx(0.5 * (r0.u[i] + r1.u[i])));
        CHECK(mean.u_ms[i] == doctest::Approx(0.5 * (r0.u_ms[i] + r1.u_ms[i])));
    }
    // the threaded path merges identically
    SlotTrace threaded = mean_trace(cfg, 2, 2);
    for (std::size_t i = 0; i < mean.u.size(); ++i)
        CHECK(threaded.u[i] == doctest::Approx(mean.u[i]));
}

TEST_CASE("ORA traces never contain group detections") {
    ScenarioConfig cfg = small_cfg();
    cfg.scheme = Scheme::ORA;
    SimulationResult res = run_simulation(cfg, 5);
    for (double v : res.trace.u_ps2) CHECK(v == 0.0);
}

TEST_CASE("light-load simulation tracks the fluid engine") {
    ScenarioConfig cfg;
    cfg.num_ues = 2000;
    cfg.seed = 6;
    SlotTrace sim = mean_trace(cfg, 30);
    SlotTrace fluid = run_fluid_model(cfg);
    double s = sim.total_successes();
    double f = fluid.total_successes();
    CHECK(std::abs(s - f) / f < 0.01);
}
