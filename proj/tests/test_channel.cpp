#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nora/channel.hpp"
#include "nora/config.hpp"
#include "nora/rng.hpp"

using namespace nora;

namespace {

struct SampledOutage {
    double p0, p1, p2;
};

// Sampling oracle over n independent decode realizations.
SampledOutage sample_outage(const OutageParams& p, int n, std::uint64_t seed) {
    RngStream rng(seed);
    int f0 = 0, f1 = 0, f2 = 0;
    for (int i = 0; i < n; ++i)
        if (!sample_single_decode(p, rng)) ++f0;
    for (int i = 0; i < n; ++i) {
        SicDecodeResult r = sample_sic_decode(p, rng);
        if (!r.ue1_ok) ++f1;
        if (!r.ue2_ok) ++f2;
    }
    return {static_cast<double>(f0) / n, static_cast<double>(f1) / n,
            static_cast<double>(f2) / n};
}

double se(double p, int n) {
    double v = std::max(p * (1.0 - p), 1e-12);
    return std::sqrt(v / n);
}

}  // namespace

TEST_CASE("threshold constants at the default operating point") {
    OutageParams p = OutageParams::from_config(ScenarioConfig{});
    // gamma_target = 10^(10/10) = 10 linear
    CHECK(p.gamma_target == doctest::Approx(10.0));
    CHECK(p.gamma(1) == doctest::Approx(10.0));
    CHECK(p.gamma(2) == doctest::Approx(10.0 * std::pow(10.0, -0.3)));
    CHECK(p.phi0() == doctest::Approx((std::pow(2.0, 1.6) - 1.0) / 10.0)
                          .epsilon(1e-12));
    CHECK(p.phi0() == doctest::Approx(0.2031433).epsilon(1e-6));
    CHECK(p.phi1() == doctest::Approx(p.phi0()).epsilon(1e-12));
    CHECK(p.phi2() == doctest::Approx(0.4053241).epsilon(1e-6));
    CHECK(p.alpha1() == doctest::Approx(0.9910174).epsilon(1e-6));
    CHECK(p.group_forms_valid());
}

TEST_CASE("outage closed forms at defaults match the quoted values") {
    OutageParams p = OutageParams::from_config(ScenarioConfig{});
    double p0 = outage_single(p);
    auto [p1, p2] = outage_group(p);
    CHECK(p0 == doctest::Approx(0.0966).epsilon(5e-3));
    CHECK(p1 == doctest::Approx(0.1047).epsilon(5e-3));
    CHECK(p2 == doctest::Approx(0.2688).epsilon(5e-3));
    // the exact arithmetic the forms reduce to
    CHECK(p0 == doctest::Approx(1.0 - std::exp(-p.phi0() / 2.0)).epsilon(1e-12));
    CHECK(p2 ==
          doctest::Approx(1.0 - (1.0 - p1) * std::exp(-p.phi2() / 2.0))
              .epsilon(1e-12));
}

TEST_CASE("outage closed forms match the sampling oracle at defaults") {
    OutageParams p = OutageParams::from_config(ScenarioConfig{});
    double p0 = outage_single(p);
    auto [p1, p2] = outage_group(p);
    const int n = 1'000'000;
    SampledOutage s = sample_outage(p, n, 4242);
    CHECK(std::abs(s.p0 - p0) < 3.0 * se(p0, n));
    CHECK(std::abs(s.p1 - p1) < 3.0 * se(p1, n));
    CHECK(std::abs(s.p2 - p2) < 3.0 * se(p2, n));
}

TEST_CASE("closed forms vs sampling across the parameter grid") {
    const int n = 200'000;
    std::uint64_t seed = 1;
    int valid_points = 0, flagged_points = 0;
    for (double gamma_db : {5.0, 10.0, 20.0})
        for (double delta : {0.0, 3.0, 6.0})
            for (double rate : {0.5, 1.6, 3.0}) {
                ScenarioConfig cfg;
                cfg.gamma_target_db = gamma_db;
                cfg.delta_db = delta;
                cfg.rate_target0 = cfg.rate_target1 = cfg.rate_target2 = rate;
                OutageParams p = OutageParams::from_config(cfg);
                double p0 = outage_single(p);
                auto [p1, p2] = outage_group(p);
                CHECK(p0 >= 0.0); CHECK(p0 <= 1.0);
                CHECK(p1 >= 0.0); CHECK(p1 <= 1.0);
                CHECK(p2 >= 0.0); CHECK(p2 <= 1.0);
                SampledOutage s = sample_outage(p, n, seed++);
                // the solo form is exact everywhere
                CHECK(std::abs(s.p0 - p0) < 4.0 * se(p0, n));
                if (p.group_forms_valid()) {
                    ++valid_points;
                    CHECK(std::abs(s.p1 - p1) < 4.0 * se(p1, n));
                    CHECK(std::abs(s.p2 - p2) < 4.0 * se(p2, n));
                } else {
                    ++flagged_points;
                }
            }
    CHECK(valid_points + flagged_points == 27);
    CHECK(valid_points > 0);
    // the low-rate corner always violates the derivation's validity bound
    ScenarioConfig low;
    low.rate_target0 = low.rate_target1 = low.rate_target2 = 0.5;
    CHECK_FALSE(OutageParams::from_config(low).group_forms_valid());
}

TEST_CASE("validity boundary of the group forms") {
    // 10^{-delta/10} (2^{rate1} - 1) == 1 exactly at rate1 = 1, delta = 0
    ScenarioConfig cfg;
    cfg.delta_db = 0.0;
    cfg.rate_target1 = 1.0;
    OutageParams p = OutageParams::from_config(cfg);
    CHECK(p.alpha1() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.group_forms_valid());
    cfg.rate_target1 = 0.999;
    CHECK_FALSE(OutageParams::from_config(cfg).group_forms_valid());
    // rate -> 0 pushes alpha1 toward its supremum of 2
    cfg.rate_target1 = 1e-9;
    CHECK(OutageParams::from_config(cfg).alpha1() ==
          doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("outage monotonicity in rate and SNR") {
    ScenarioConfig cfg;
    double prev = -1.0;
    for (double rate : {0.4, 0.8, 1.6, 2.4, 3.2}) {
        cfg.rate_target0 = rate;
        double p0 = outage_single(OutageParams::from_config(cfg));
        CHECK(p0 > prev);
        prev = p0;
    }
    cfg = ScenarioConfig{};
    prev = 2.0;
    for (double g : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        cfg.gamma_target_db = g;
        double p0 = outage_single(OutageParams::from_config(cfg));
        CHECK(p0 < prev);
        prev = p0;
    }
}

TEST_CASE("group back-off reduces the transmit power by delta per order") {
    double p1 = backoff_transmit_power_dbm(1, 23.0, 3.0, 1.0, 1.0, 100.0);
    double p2 = backoff_transmit_power_dbm(2, 23.0, 3.0, 1.0, 1.0, 100.0);
    CHECK(p1 - p2 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(backoff_transmit_power_dbm(1, 23.0, 0.0, 1.0, 1.0, 100.0) ==
          doctest::Approx(backoff_transmit_power_dbm(2, 23.0, 0.0, 1.0, 1.0,
                                                     100.0))
              .epsilon(1e-12));
}

TEST_CASE("decode sampling is reproducible by seed") {
    OutageParams p = OutageParams::from_config(ScenarioConfig{});
    RngStream a(123), b(123), c(456);
    std::vector<int> ra, rb, rc;
    for (int i = 0; i < 2000; ++i) {
        SicDecodeResult x = sample_sic_decode(p, a);
        SicDecodeResult y = sample_sic_decode(p, b);
        SicDecodeResult z = sample_sic_decode(p, c);
        ra.push_back(x.ue1_ok * 2 + x.ue2_ok);
        rb.push_back(y.ue1_ok * 2 + y.ue2_ok);
        rc.push_back(z.ue1_ok * 2 + z.ue2_ok);
    }
    CHECK(ra == rb);
    CHECK(ra != rc);
}
