#ifndef NORA_CONFIG_HPP_
#define NORA_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nora {

enum class Scheme { NORA, ORA };
enum class Engine { Analytic, MonteCarlo, Both };
enum class ArrivalKind { Uniform, Beta };

std::string to_string(Scheme s);
std::string to_string(Engine e);
std::string to_string(ArrivalKind k);

/// Arrival-time distribution of first access attempts over [0, T_AP].
struct ArrivalModel {
    ArrivalKind kind = ArrivalKind::Uniform;
    double t_ap_ms = 10000.0;  // arrival period
    double alpha = 3.0;        // beta shape (Beta only)
    double beta = 4.0;

    // density at time t (ms), zero outside [0, T_AP]
    double density(double t_ms) const;
};

/// Cell geometry driving the arrival-time separability of same-preamble UEs.
struct CellGeometry {
    double d_c_m = 500.0;        // cell radius
    double t_rms_s = 0.3e-6;     // RMS delay spread
    static constexpr double kPropagationSpeed = 3.0e8;  // m/s
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every scenario parameter for a run; single source of truth.
/// Defaults are the bold Traffic Model 1 operating point.
struct ScenarioConfig {
    // Load and scheme switches
    std::int64_t num_ues = 40000;
    Scheme scheme = Scheme::NORA;
    Engine engine = Engine::Analytic;
    int replications = 1;
    std::uint64_t seed = 1;
    // When set, an unresolvable same-preamble pair is delivered a shared RAR,
    // collides on Msg3 and fails with message-failure timing. Default keeps
    // such pairs on the preamble-failure path, matching the fluid model.
    bool realistic_scenario1 = false;

    ArrivalModel arrival;
    CellGeometry cell;

    // RACH resources
    double t_rap_ms = 5.0;  // RA slot period
    int num_preambles = 54;
    int max_attempts = 10;

    // Power / channel
    double rate_target0 = 1.6;  // target rate, uncollided UE (bits/s/Hz)
    double rate_target1 = 1.6;  // target rate, 1st decoded UE of a group
    double rate_target2 = 1.6;  // target rate, 2nd decoded UE of a group
    double delta_db = 3.0;      // power back-off offset
    double gamma_target_db = 10.0;  // target arrived SNR
    double theta = 1.0;             // Rayleigh scale
    double alpha_pc = 1.0;          // fractional power control exponent

    // Handshake timing (ms)
    double t_prach_ms = 2.0;
    double t_pd_ms = 2.0;
    double t_rar_ms = 1.0;
    double t_r3_ms = 3.0;
    double t_msg3_ms = 3.0;
    double t_cr_ms = 1.0;
    double w_rar_ms = 6.0;
    double w_cr_ms = 16.0;
    double w_bo_ms = 20.0;
    double eta = 0.5;  // fraction of W_RAR elapsed before RAR reception
    double xi = 0.5;   // fraction of W_CR elapsed before CR reception

    // Derived timing constants
    double t_pf0_ms() const { return t_prach_ms + t_pd_ms + w_rar_ms; }
    double t_mf0_ms() const {
        return t_prach_ms + t_pd_ms + eta * w_rar_ms + t_rar_ms + t_r3_ms +
               t_msg3_ms + w_cr_ms;
    }
    double t_s_ms() const {
        return t_prach_ms + t_pd_ms + eta * w_rar_ms + t_rar_ms + t_r3_ms +
               t_msg3_ms + xi * w_cr_ms + t_cr_ms;
    }

    // Preamble detection probability of the l-th attempt, default 1 - e^{-l}.
    double detection_probability(int attempt) const;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// Traffic model presets: tm1 = uniform arrivals, U=40000;
    /// tm2 = Beta(3,4) arrivals, U=20000.
    void apply_traffic_model(const std::string& name);

    /// Set one field from its config key (snake_case). Throws ConfigError on
    /// unknown key or unparsable value.
    void set_key(const std::string& key, const std::string& value);
};

/// Parse a line-oriented `key = value` config file with optional [section]
/// headers (sections are organisational only; keys are globally unique).
/// `overrides` are applied after the file, so they win.
ScenarioConfig parse_config(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>&
                                overrides = {});

ScenarioConfig config_from_overrides(
    const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace nora

#endif  // NORA_CONFIG_HPP_
