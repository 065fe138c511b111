// d2dcrowd command-line front end: run, sweep, verify.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "d2dcrowd/io.hpp"
#include "d2dcrowd/simkit.hpp"
#include "d2dcrowd/verify.hpp"

namespace {

using namespace d2dcrowd;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Common {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> rounds;
    std::optional<std::string> schemes;
    bool incentive = false;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::size_t> jobs;
    bool timing = false;
    bool verify_certificates = false;

    void add(CLI::App* app) {
        app->add_option("--config", config, "JSON config file (defaults when omitted)");
        app->add_option("--seed", seed, "Base RNG seed (overrides scenario.rng_seed)");
        app->add_option("--rounds", rounds, "Rounds per experiment");
        app->add_option("--schemes", schemes, "Comma list of optimal,greedy,reciprocal,random,local");
        app->add_flag("--incentive", incentive, "Enable the tit-for-tat filter");
        app->add_option("--out", out, "Output directory (beats $D2DCROWD_OUT_DIR and the config)");
        app->add_option("--format", format, "csv or json");
        app->add_option("--jobs", jobs, "Worker threads for independent rounds");
        app->add_flag("--timing", timing, "Measure per-round solve times");
        app->add_flag("--verify-certificates", verify_certificates,
                      "Check the dual certificate of every optimal solve");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg = config ? io::load_config(*config) : ExperimentConfig{};
        if (seed) cfg.scenario.rng_seed = *seed;
        if (rounds) cfg.rounds = *rounds;
        if (schemes) {
            cfg.schemes.clear();
            std::stringstream ss(*schemes);
            std::string name;
            while (std::getline(ss, name, ',')) {
                auto s = parse_scheme(name);
                if (!s) throw ConfigError("unknown scheme \"" + name + "\"");
                cfg.schemes.push_back(*s);
            }
        }
        if (incentive) cfg.incentive = true;
        if (format) {
            auto f = io::parse_format(*format);
            if (!f) throw ConfigError("--format must be csv or json, got \"" + *format + "\"");
            cfg.format = *f;
        }
        if (jobs) cfg.jobs = *jobs;
        if (timing) cfg.timing = true;
        if (verify_certificates) cfg.verify_certificates = true;
        cfg.validate();
        return cfg;
    }
};

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError("not a number in --values: \"" + item + "\"");
        out.push_back(v);
    }
    return out;
}

void print_summary(const ExperimentSummary& s) {
    std::printf("%-11s %7s %12s %10s %12s %10s\n", "scheme", "rounds", "mean_saving", "ci_half",
                "mean_energy", "p95_ms");
    for (const auto& x : s.schemes) {
        std::string p95 = x.p95_solve_ms ? io::format_double(*x.p95_solve_ms) : "-";
        std::printf("%-11s %7zu %12.4f %10.4f %12.3f %10s\n", std::string(to_string(x.scheme)).c_str(),
                    x.rounds, x.mean_saving_ratio, x.ci_half_width, x.mean_energy_j, p95.c_str());
    }
}

int cmd_run(const Common& c) {
    const ExperimentConfig cfg = c.resolve();
    const auto dir = io::resolve_output_dir(c.out, cfg);
    const ExperimentResult result = run_experiment(cfg);
    const auto files = io::write_run_outputs(dir, cfg, result);
    print_summary(result.summary);
    std::cout << "wrote";
    for (const auto& f : files) std::cout << ' ' << (dir / f).string();
    std::cout << '\n';
    return 0;
}

int cmd_sweep(const Common& c, const std::string& param_name, const std::string& values_text,
              bool keep_density) {
    const auto param = parse_sweep_param(param_name);
    if (!param) throw ConfigError("unknown sweep parameter \"" + param_name + "\" (devices, task-freq)");
    const auto values = parse_values(values_text);
    const ExperimentConfig cfg = c.resolve();
    const auto dir = io::resolve_output_dir(c.out, cfg);
    const auto points = sweep(cfg, *param, values, keep_density);
    const auto files = io::write_sweep_outputs(dir, cfg, *param, values, keep_density, points);
    for (const auto& p : points) {
        std::cout << to_string(*param) << " = " << io::format_double(p.value) << '\n';
        print_summary(p.summary);
    }
    std::cout << "wrote";
    for (const auto& f : files) std::cout << ' ' << (dir / f).string();
    std::cout << '\n';
    return 0;
}

int cmd_verify(const verify::Options& opt) {
    const auto rep = verify::run(opt);
    std::printf("assignment oracle   %zu/%zu agree\n", rep.oracle_agree, rep.instances);
    std::printf("assignment certs    %zu/%zu valid\n", rep.certificate_ok, rep.instances);
    std::printf("assignment feasible %zu/%zu\n", rep.feasible, rep.instances);
    std::printf("matching oracle     %zu/%zu agree\n", rep.graph_agree, rep.graphs);
    std::printf("matching certs      %zu/%zu valid\n", rep.graph_certificate_ok, rep.graphs);
    for (const auto& f : rep.failures) std::printf("  %s\n", f.c_str());
    std::printf("%s\n", rep.passed() ? "PASS" : "FAIL");
    return rep.passed() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-optimal D2D task assignment simulator"};
    app.set_version_flag("--version", std::string(io::version()));
    app.require_subcommand(1);

    Common run_opts;
    auto* run = app.add_subcommand("run", "Run a multi-round experiment");
    run_opts.add(run);

    Common sweep_opts;
    std::string param, values;
    bool keep_density = false;
    auto* sw = app.add_subcommand("sweep", "Run one experiment per parameter value");
    sweep_opts.add(sw);
    sw->add_option("--param", param, "devices or task-freq")->required();
    sw->add_option("--values", values, "Comma list of values")->required();
    sw->add_flag("--keep-density", keep_density, "Scale the area with the device count");

    verify::Options vopt;
    bool inject = false;
    double fault_amount = 1.0;
    auto* ver = app.add_subcommand("verify", "Check the optimal solver against brute force");
    ver->add_option("--instances", vopt.instances, "Random assignment instances")->capture_default_str();
    ver->add_option("--max-devices", vopt.max_devices, "Devices per instance, at most 8")->capture_default_str();
    ver->add_option("--graphs", vopt.graphs, "Random matching instances")->capture_default_str();
    ver->add_option("--max-graph-vertices", vopt.max_graph_vertices, "Vertices per graph, at most 16")
        ->capture_default_str();
    ver->add_option("--seed", vopt.seed, "Seed")->capture_default_str();
    ver->add_flag("--inject-fault", inject, "Perturb local edge weights (negative control)");
    ver->add_option("--fault-amount", fault_amount, "Joules added per local edge with --inject-fault")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_opts);
        if (*sw) return cmd_sweep(sweep_opts, param, values, keep_density);
        if (*ver) {
            if (inject) vopt.inject_fault = fault_amount;
            return cmd_verify(vopt);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
