// Command-line front end: single runs, load sweeps and the preamble
// throughput curve, emitting JSON reports and CSV traces.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nora/channel.hpp"
#include "nora/config.hpp"
#include "nora/fluid.hpp"
#include "nora/io.hpp"
#include "nora/metrics.hpp"
#include "nora/model_core.hpp"
#include "nora/sim.hpp"
#include "nora/trace.hpp"

namespace {

using nora::ScenarioConfig;

// every settable config key, mirrored as a kebab-case CLI flag
const std::vector<std::string> kConfigKeys = {
    "num-ues", "scheme", "engine", "traffic-model", "replications", "seed",
    "realistic-scenario1", "arrival-kind", "t-ap-ms", "beta-alpha",
    "beta-beta", "d-c-m", "t-rms-us", "t-rap-ms", "num-preambles",
    "max-attempts", "rate-target0", "rate-target1", "rate-target2",
    "rate-target", "delta-db", "gamma-target-db", "theta", "alpha-pc",
    "t-prach-ms", "t-pd-ms", "t-rar-ms", "t-r3-ms", "t-msg3-ms", "t-cr-ms",
    "w-rar-ms", "w-cr-ms", "w-bo-ms", "eta", "xi",
};

struct CommonArgs {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string out_dir = "out";
    std::string format = "json";
};

void add_common(CLI::App* app, CommonArgs& args) {
    app->add_option("--config", args.config_path, "config file (key = value)");
    app->add_option("--out", args.out_dir, "output directory");
    app->add_option("--format", args.format, "stdout summary format")
        ->check(CLI::IsMember({"json", "csv"}));
    for (const auto& key : kConfigKeys) {
        app->add_option_function<std::string>(
            "--" + key,
            [&args, key](const std::string& v) {
                args.overrides.emplace_back(key, v);
            },
            "config key " + key);
    }
}

ScenarioConfig load_config(const CommonArgs& args) {
    // option callbacks fire in registration order, so re-order here: the
    // traffic-model preset must not clobber explicit per-key flags
    auto overrides = args.overrides;
    std::stable_partition(overrides.begin(), overrides.end(),
                          [](const auto& kv) {
                              return kv.first == "traffic-model";
                          });
    if (!args.config_path.empty())
        return nora::parse_config(args.config_path, overrides);
    return nora::config_from_overrides(overrides);
}

struct EngineOutput {
    nora::SlotTrace trace;
    nora::MetricsReport report;
    bool model_breakdown = false;
};

EngineOutput run_engine(const ScenarioConfig& cfg, nora::Engine engine) {
    EngineOutput out;
    if (engine == nora::Engine::Analytic) {
        out.trace = nora::run_fluid_model(cfg);
        out.report = nora::compute_metrics(cfg, out.trace);
    } else {
        out.trace = nora::mean_trace(cfg, cfg.replications);
        out.report = nora::compute_metrics(cfg, out.trace);
    }
    out.model_breakdown = out.trace.clamp_events > 0;
    return out;
}

std::optional<double> rel_diff(std::optional<double> a, std::optional<double> b) {
    if (!a || !b) return std::nullopt;
    double denom = std::max(std::fabs(*a), std::fabs(*b));
    if (denom == 0.0) return 0.0;
    return std::fabs(*a - *b) / denom;
}

nlohmann::json comparison_json(const nora::MetricsReport& analytic,
                               const nora::MetricsReport& mc) {
    auto entry = [](std::optional<double> a, std::optional<double> b) {
        nlohmann::json e;
        e["analytic"] = a ? nlohmann::json(*a) : nlohmann::json(nullptr);
        e["montecarlo"] = b ? nlohmann::json(*b) : nlohmann::json(nullptr);
        auto d = rel_diff(a, b);
        e["rel_diff"] = d ? nlohmann::json(*d) : nlohmann::json(nullptr);
        return e;
    };
    nlohmann::json j;
    j["R_RA"] = entry(analytic.r_ra, mc.r_ra);
    j["P_C"] = entry(analytic.p_c, mc.p_c);
    j["P_S"] = entry(analytic.p_s, mc.p_s);
    j["mean_attempts"] = entry(analytic.mean_attempts, mc.mean_attempts);
    j["mean_delay_ms"] = entry(analytic.mean_delay_ms, mc.mean_delay_ms);
    return j;
}

void write_ue_artifacts(const std::string& dir, const ScenarioConfig& cfg) {
    // per-UE log and empirical delay CDF come from replication 0
    nora::SimulationResult res =
        nora::run_simulation(cfg, nora::derive_seed(cfg.seed, 0));
    nora::atomic_write(dir + "/ue_log.csv", res.ue_log_csv());

    std::vector<double> delays;
    for (const auto& ue : res.ues)
        if (ue.state == nora::UEState::Succeeded)
            delays.push_back(ue.access_delay_ms());
    std::sort(delays.begin(), delays.end());
    std::ostringstream out;
    out << "delay_ms,p\n";
    if (!delays.empty()) {
        double maxd = delays.back();
        std::size_t i = 0;
        for (double d = 0.0; d <= maxd + 1.0; d += 1.0) {  // 1 ms grid
            while (i < delays.size() && delays[i] <= d) ++i;
            out << d << ',' << static_cast<double>(i) / delays.size() << '\n';
        }
    }
    nora::atomic_write(dir + "/delay_cdf_empirical.csv", out.str());
}

int cmd_run(const CommonArgs& args) {
    ScenarioConfig cfg = load_config(args);
    std::string dir = args.out_dir;
    bool breakdown = false;

    if (cfg.engine == nora::Engine::Both) {
        ScenarioConfig acfg = cfg;
        EngineOutput a = run_engine(acfg, nora::Engine::Analytic);
        EngineOutput m = run_engine(cfg, nora::Engine::MonteCarlo);
        breakdown = a.model_breakdown || m.model_breakdown;
        nora::atomic_write(dir + "/trace_analytic.csv", a.trace.to_csv());
        nora::atomic_write(dir + "/trace_montecarlo.csv", m.trace.to_csv());
        nora::atomic_write(dir + "/report_analytic.json", a.report.to_json());
        nora::atomic_write(dir + "/report_montecarlo.json", m.report.to_json());
        nlohmann::json cmp = comparison_json(a.report, m.report);
        nora::atomic_write(dir + "/comparison.json", cmp.dump(2));
        write_ue_artifacts(dir, cfg);
        std::cout << cmp.dump(2) << std::endl;
    } else {
        EngineOutput out = run_engine(cfg, cfg.engine);
        breakdown = out.model_breakdown;
        nora::atomic_write(dir + "/trace.csv", out.trace.to_csv());
        nora::atomic_write(dir + "/trace.json", out.trace.to_json());
        nora::atomic_write(dir + "/report.json", out.report.to_json());
        nora::atomic_write(dir + "/preamble_cdf.csv",
                           nora::MetricsReport::cdf_csv(out.report.preamble_cdf));
        nora::atomic_write(dir + "/delay_cdf.csv",
                           nora::MetricsReport::cdf_csv(out.report.delay_cdf));
        if (cfg.engine == nora::Engine::MonteCarlo) write_ue_artifacts(dir, cfg);
        if (args.format == "csv")
            std::cout << nora::MetricsReport::csv_header()
                      << out.report.to_csv_row(nora::to_string(cfg.scheme));
        else
            std::cout << out.report.to_json() << std::endl;
    }
    if (breakdown) {
        std::cerr << "model breakdown: detection split clamped\n";
        return 2;
    }
    return 0;
}

struct SweepArgs {
    CommonArgs common;
    std::string axis;
    std::vector<std::string> values;
    bool both_schemes = false;
    int jobs = 0;
};

int cmd_sweep(const SweepArgs& sw) {
    std::vector<ScenarioConfig> points;
    std::vector<std::string> labels;
    {
        ScenarioConfig base = load_config(sw.common);
        std::vector<nora::Scheme> schemes =
            sw.both_schemes ? std::vector<nora::Scheme>{nora::Scheme::NORA,
                                                        nora::Scheme::ORA}
                            : std::vector<nora::Scheme>{base.scheme};
        for (const auto& v : sw.values) {
            for (nora::Scheme s : schemes) {
                ScenarioConfig cfg = base;
                cfg.set_key(sw.axis, v);  // throws on invalid axis
                cfg.scheme = s;
                cfg.validate();
                points.push_back(cfg);
                labels.push_back(sw.axis + "=" + v + "," +
                                 nora::to_string(s));
            }
        }
    }

    struct Row {
        nora::MetricsReport report;
        nora::Engine engine;
        std::string label;
        bool breakdown = false;
    };
    std::vector<std::vector<Row>> rows(points.size());

    int jobs = sw.jobs > 0 ? sw.jobs
                           : static_cast<int>(std::max(
                                 1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, static_cast<int>(points.size()));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < points.size(); i += jobs) {
                const ScenarioConfig& cfg = points[i];
                std::vector<nora::Engine> engines =
                    cfg.engine == nora::Engine::Both
                        ? std::vector<nora::Engine>{nora::Engine::Analytic,
                                                    nora::Engine::MonteCarlo}
                        : std::vector<nora::Engine>{cfg.engine};
                for (nora::Engine e : engines) {
                    EngineOutput out = run_engine(cfg, e);
                    rows[i].push_back({std::move(out.report), e,
                                       labels[i] + "," + nora::to_string(e),
                                       out.model_breakdown});
                }
            }
        });
    for (auto& t : workers) t.join();

    bool breakdown = false;
    std::ostringstream csv;
    csv << "axis,value,scheme,engine,R_RA,P_C,P_S,mean_attempts,mean_delay_ms,F1\n";
    csv.precision(17);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& row : rows[i]) {
            breakdown = breakdown || row.breakdown;
            auto opt = [](std::optional<double> v) {
                return v ? std::to_string(*v) : std::string("na");
            };
            double f1 = row.report.preamble_cdf.empty()
                            ? 0.0
                            : row.report.preamble_cdf.front().p;
            csv << sw.axis << ',' << row.label.substr(sw.axis.size() + 1)
                << ',' << row.report.r_ra << ',' << row.report.p_c << ','
                << opt(row.report.p_s) << ',' << opt(row.report.mean_attempts)
                << ',' << opt(row.report.mean_delay_ms) << ',' << f1 << '\n';
            nora::atomic_write(sw.common.out_dir + "/report_" +
                                   std::to_string(i) + "_" +
                                   nora::to_string(row.engine) + ".json",
                               row.report.to_json());
        }
    }
    nora::atomic_write(sw.common.out_dir + "/sweep.csv", csv.str());
    std::cout << csv.str();
    return breakdown ? 2 : 0;
}

int cmd_preamble_throughput(const CommonArgs& args, int m_max,
                            std::optional<double> p_s2_override) {
    ScenarioConfig cfg = load_config(args);
    double p_s2 = p_s2_override
                      ? *p_s2_override
                      : nora::separability_probabilities(cfg.cell).p_s2;
    std::ostringstream out;
    out.precision(17);
    out << "m,ora,nora\n";
    for (int m = 0; m <= m_max; ++m)
        out << m << ','
            << nora::expected_preamble_successes(m, cfg.num_preambles, p_s2,
                                                 nora::Scheme::ORA)
            << ','
            << nora::expected_preamble_successes(m, cfg.num_preambles, p_s2,
                                                 nora::Scheme::NORA)
            << '\n';
    nora::atomic_write(args.out_dir + "/preamble_throughput.csv", out.str());
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NORA/ORA random-access congestion laboratory"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "single scenario run");
    add_common(run, run_args);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "sweep one numeric config key");
    add_common(sweep, sweep_args.common);
    sweep->add_option("--axis", sweep_args.axis, "config key to sweep")
        ->required();
    sweep->add_option("--values", sweep_args.values, "comma-separated values")
        ->required()
        ->delimiter(',');
    sweep->add_flag("--both-schemes", sweep_args.both_schemes,
                    "run NORA and ORA at every point");
    sweep->add_option("--jobs", sweep_args.jobs, "worker pool size");

    CommonArgs pt_args;
    int m_max = 200;
    std::optional<double> p_s2_override;
    CLI::App* pt = app.add_subcommand("preamble-throughput",
                                      "expected detected preambles vs m");
    add_common(pt, pt_args);
    pt->add_option("--m-max", m_max, "largest m to tabulate");
    pt->add_option_function<double>(
        "--p-s2", [&](double v) { p_s2_override = v; },
        "override the geometric separability probability");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        return cmd_preamble_throughput(pt_args, m_max, p_s2_override);
    } catch (const nora::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
