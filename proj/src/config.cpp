#include "nora/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace nora {

std::string to_string(Scheme s) { return s == Scheme::NORA ? "nora" : "ora"; }

std::string to_string(Engine e) {
    switch (e) {
        case Engine::Analytic: return "analytic";
        case Engine::MonteCarlo: return "montecarlo";
        default: return "both";
    }
}

std::string to_string(ArrivalKind k) {
    return k == ArrivalKind::Uniform ? "uniform" : "beta";
}

double ArrivalModel::density(double t_ms) const {
    if (t_ms < 0.0 || t_ms > t_ap_ms) return 0.0;
    if (kind == ArrivalKind::Uniform) return 1.0 / t_ap_ms;
    // Beta(alpha, beta) scaled to [0, T_AP]
    double x = t_ms / t_ap_ms;
    if (x <= 0.0) return alpha > 1.0 ? 0.0 : (alpha == 1.0 ? beta / t_ap_ms : 0.0);
    if (x >= 1.0) return beta > 1.0 ? 0.0 : (beta == 1.0 ? alpha / t_ap_ms : 0.0);
    double log_b = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
    double logf = (alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) - log_b;
    return std::exp(logf) / t_ap_ms;
}

double ScenarioConfig::detection_probability(int attempt) const {
    return 1.0 - std::exp(-static_cast<double>(attempt));
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) bad(field, why);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        bad(key, "cannot parse '" + v + "' as a number");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        bad(key, "cannot parse '" + v + "' as an integer");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    bad(key, "cannot parse '" + v + "' as a boolean");
}

}  // namespace

void ScenarioConfig::validate() const {
    require(num_ues >= 0, "num_ues", "must be >= 0");
    require(replications >= 1, "replications", "must be >= 1");
    require(arrival.t_ap_ms >= 0.0, "t_ap_ms", "must be >= 0");
    require(arrival.alpha > 0.0, "beta_alpha", "must be > 0");
    require(arrival.beta > 0.0, "beta_beta", "must be > 0");
    require(cell.d_c_m > 0.0, "d_c_m", "must be > 0");
    require(cell.t_rms_s >= 0.0, "t_rms_us", "must be >= 0");
    require(t_rap_ms > 0.0, "t_rap_ms", "must be > 0");
    require(num_preambles >= 2, "num_preambles", "must be >= 2");
    require(max_attempts >= 1, "max_attempts", "must be >= 1");
    require(rate_target0 >= 0.0, "rate_target0", "must be >= 0");
    require(rate_target1 >= 0.0, "rate_target1", "must be >= 0");
    require(rate_target2 >= 0.0, "rate_target2", "must be >= 0");
    require(delta_db >= 0.0, "delta_db", "must be >= 0");
    require(theta > 0.0, "theta", "must be > 0");
    require(gamma_target_db > -100.0, "gamma_target_db", "implausible value");
    for (auto [v, name] : {std::pair<double, const char*>{t_prach_ms, "t_prach_ms"},
                           {t_pd_ms, "t_pd_ms"},
                           {t_rar_ms, "t_rar_ms"},
                           {t_r3_ms, "t_r3_ms"},
                           {t_msg3_ms, "t_msg3_ms"},
                           {t_cr_ms, "t_cr_ms"}})
        require(v >= 0.0, name, "must be >= 0");
    require(w_rar_ms > 0.0, "w_rar_ms", "must be > 0");
    require(w_cr_ms > 0.0, "w_cr_ms", "must be > 0");
    require(w_bo_ms > 0.0, "w_bo_ms", "must be > 0");
    require(eta > 0.0 && eta < 1.0, "eta", "must be in (0,1)");
    require(xi > 0.0 && xi < 1.0, "xi", "must be in (0,1)");
}

void ScenarioConfig::apply_traffic_model(const std::string& name) {
    std::string n = lower(trim(name));
    if (n == "tm1") {
        arrival.kind = ArrivalKind::Uniform;
        num_ues = 40000;
    } else if (n == "tm2") {
        arrival.kind = ArrivalKind::Beta;
        arrival.alpha = 3.0;
        arrival.beta = 4.0;
        num_ues = 20000;
    } else {
        bad("traffic_model", "expected tm1 or tm2, got '" + name + "'");
    }
}

void ScenarioConfig::set_key(const std::string& raw_key, const std::string& raw_value) {
    // accept kebab-case CLI spellings too
    std::string key = lower(trim(raw_key));
    std::replace(key.begin(), key.end(), '-', '_');
    std::string value = trim(raw_value);

    if (key == "num_ues" || key == "u") {
        num_ues = parse_int(key, value);
    } else if (key == "scheme") {
        std::string v = lower(value);
        if (v == "nora") scheme = Scheme::NORA;
        else if (v == "ora") scheme = Scheme::ORA;
        else bad(key, "expected nora or ora, got '" + value + "'");
    } else if (key == "engine") {
        std::string v = lower(value);
        if (v == "analytic") engine = Engine::Analytic;
        else if (v == "montecarlo" || v == "mc") engine = Engine::MonteCarlo;
        else if (v == "both") engine = Engine::Both;
        else bad(key, "expected analytic, montecarlo or both, got '" + value + "'");
    } else if (key == "traffic_model") {
        apply_traffic_model(value);
    } else if (key == "replications") {
        replications = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "realistic_scenario1") {
        realistic_scenario1 = parse_bool(key, value);
    } else if (key == "arrival_kind") {
        std::string v = lower(value);
        if (v == "uniform") arrival.kind = ArrivalKind::Uniform;
        else if (v == "beta") arrival.kind = ArrivalKind::Beta;
        else bad(key, "expected uniform or beta, got '" + value + "'");
    } else if (key == "t_ap_ms") {
        arrival.t_ap_ms = parse_double(key, value);
    } else if (key == "beta_alpha") {
        arrival.alpha = parse_double(key, value);
    } else if (key == "beta_beta") {
        arrival.beta = parse_double(key, value);
    } else if (key == "d_c_m") {
        cell.d_c_m = parse_double(key, value);
    } else if (key == "t_rms_us") {
        cell.t_rms_s = parse_double(key, value) * 1e-6;
    } else if (key == "t_rap_ms") {
        t_rap_ms = parse_double(key, value);
    } else if (key == "num_preambles" || key == "r") {
        num_preambles = static_cast<int>(parse_int(key, value));
    } else if (key == "max_attempts" || key == "l") {
        max_attempts = static_cast<int>(parse_int(key, value));
    } else if (key == "rate_target0") {
        rate_target0 = parse_double(key, value);
    } else if (key == "rate_target1") {
        rate_target1 = parse_double(key, value);
    } else if (key == "rate_target2") {
        rate_target2 = parse_double(key, value);
    } else if (key == "rate_target") {
        rate_target0 = rate_target1 = rate_target2 = parse_double(key, value);
    } else if (key == "delta_db") {
        delta_db = parse_double(key, value);
    } else if (key == "gamma_target_db") {
        gamma_target_db = parse_double(key, value);
    } else if (key == "theta") {
        theta = parse_double(key, value);
    } else if (key == "alpha_pc") {
        alpha_pc = parse_double(key, value);
    } else if (key == "t_prach_ms") {
        t_prach_ms = parse_double(key, value);
    } else if (key == "t_pd_ms") {
        t_pd_ms = parse_double(key, value);
    } else if (key == "t_rar_ms") {
        t_rar_ms = parse_double(key, value);
    } else if (key == "t_r3_ms") {
        t_r3_ms = parse_double(key, value);
    } else if (key == "t_msg3_ms") {
        t_msg3_ms = parse_double(key, value);
    } else if (key == "t_cr_ms") {
        t_cr_ms = parse_double(key, value);
    } else if (key == "w_rar_ms") {
        w_rar_ms = parse_double(key, value);
    } else if (key == "w_cr_ms") {
        w_cr_ms = parse_double(key, value);
    } else if (key == "w_bo_ms") {
        w_bo_ms = parse_double(key, value);
    } else if (key == "eta") {
        eta = parse_double(key, value);
    } else if (key == "xi") {
        xi = parse_double(key, value);
    } else {
        throw ConfigError("unknown config key '" + raw_key + "'");
    }
}

ScenarioConfig parse_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            continue;  // sections are organisational only
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        try {
            cfg.set_key(t.substr(0, eq), t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    for (const auto& [k, v] : overrides) cfg.set_key(k, v);
    cfg.validate();
    return cfg;
}

ScenarioConfig config_from_overrides(
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    ScenarioConfig cfg;
    for (const auto& [k, v] : overrides) cfg.set_key(k, v);
    cfg.validate();
    return cfg;
}

}  // namespace nora
