#include "d2dcrowd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "d2dcrowd/energy_kernels.hpp"

#ifndef D2DCROWD_VERSION
#define D2DCROWD_VERSION "0.0.0"
#endif

namespace d2dcrowd::io {

using nlohmann::json;

const char* version() { return D2DCROWD_VERSION; }

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

// Reads the keys of one JSON object, rejecting anything not consumed.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) fail(where_, "expected an object");
    }

    ~Reader() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(where_, "unknown key \"" + k + "\"");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) fail(path(key), "expected a number");
            out = v->get<double>();
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                            v->get<long long>() < 0))
                fail(path(key), "expected a non-negative integer");
            const auto u = v->get<unsigned long long>();
            if (u > static_cast<unsigned long long>(std::numeric_limits<Int>::max()))
                fail(path(key), "value too large");
            out = static_cast<Int>(u);
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) fail(path(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) fail(path(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void range(const std::string& key, Range& out) {
        if (const json* v = find(key)) {
            Reader r(*v, path(key));
            r.number("min", out.min);
            r.number("max", out.max);
        }
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

void read_scenario(const json& j, ScenarioConfig& s) {
    Reader r(j, "scenario");
    r.integer("device_count", s.device_count);
    if (const json* a = r.find("area")) {
        Reader ar(*a, "scenario.area");
        ar.number("width", s.area.width);
        ar.number("height", s.area.height);
    }
    r.number("max_d2d_distance", s.max_d2d_distance);
    r.number("d2d_bandwidth", s.d2d_bandwidth);
    r.number("path_loss_exponent", s.path_loss_exponent);
    r.number("noise", s.noise);
    r.number("task_frequency", s.task_frequency);
    if (const json* m = r.find("task_type_mix")) {
        Reader mr(*m, "scenario.task_type_mix");
        mr.number("pure_cpu", s.task_type_mix.pure_cpu);
        mr.number("pure_cellular", s.task_type_mix.pure_cellular);
        mr.number("hybrid", s.task_type_mix.hybrid);
    }
    r.range("input_size_range", s.input_size_range);
    if (const json* d = r.find("processing_density")) {
        Reader dr(*d, "scenario.processing_density");
        dr.number("pure_cpu", s.processing_density.pure_cpu);
        dr.number("hybrid", s.processing_density.hybrid);
    }
    r.number("output_ratio", s.output_ratio);
    r.number("hybrid_cellular_ratio", s.hybrid_cellular_ratio);
    r.range("cellular_rate_range", s.cellular_rate_range);
    r.range("load_range", s.load_range);
    r.range("cpu_capacity_range", s.cpu_capacity_range);
    r.number("compute_power", s.compute_power);
    r.number("cellular_tx_power", s.cellular_tx_power);
    r.number("d2d_tx_power", s.d2d_tx_power);
    r.number("d2d_rx_power", s.d2d_rx_power);
    r.integer("rng_seed", s.rng_seed);
    r.range("mobility_speed_range", s.mobility_speed_range);
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}}; }

json scenario_json(const ScenarioConfig& s) {
    return {
        {"device_count", s.device_count},
        {"area", {{"width", s.area.width}, {"height", s.area.height}}},
        {"max_d2d_distance", s.max_d2d_distance},
        {"d2d_bandwidth", s.d2d_bandwidth},
        {"path_loss_exponent", s.path_loss_exponent},
        {"noise", s.noise},
        {"task_frequency", s.task_frequency},
        {"task_type_mix",
         {{"pure_cpu", s.task_type_mix.pure_cpu},
          {"pure_cellular", s.task_type_mix.pure_cellular},
          {"hybrid", s.task_type_mix.hybrid}}},
        {"input_size_range", range_json(s.input_size_range)},
        {"processing_density",
         {{"pure_cpu", s.processing_density.pure_cpu}, {"hybrid", s.processing_density.hybrid}}},
        {"output_ratio", s.output_ratio},
        {"hybrid_cellular_ratio", s.hybrid_cellular_ratio},
        {"cellular_rate_range", range_json(s.cellular_rate_range)},
        {"load_range", range_json(s.load_range)},
        {"cpu_capacity_range", range_json(s.cpu_capacity_range)},
        {"compute_power", s.compute_power},
        {"cellular_tx_power", s.cellular_tx_power},
        {"d2d_tx_power", s.d2d_tx_power},
        {"d2d_rx_power", s.d2d_rx_power},
        {"rng_seed", s.rng_seed},
        {"mobility_speed_range", range_json(s.mobility_speed_range)},
    };
}

json incentive_json(const IncentiveConfig& c) {
    return {{"alpha_cpu", c.alpha_cpu},
            {"alpha_cell", c.alpha_cell},
            {"beta_cpu_fraction", c.beta_cpu_fraction},
            {"beta_cell_fraction", c.beta_cell_fraction},
            {"cpu_allowance", c.cpu_allowance},
            {"cell_allowance", c.cell_allowance}};
}

json config_json(const ExperimentConfig& cfg) {
    json schemes = json::array();
    for (Scheme s : cfg.schemes) schemes.push_back(std::string(to_string(s)));
    json j = {
        {"scenario", scenario_json(cfg.scenario)},
        {"rounds", cfg.rounds},
        {"schemes", schemes},
        {"incentive", cfg.incentive},
        {"confidence_level", cfg.confidence_level},
        {"output_dir", cfg.output_dir},
        {"format", to_string(cfg.format)},
        {"jobs", cfg.jobs},
        {"timing", cfg.timing},
    };
    if (cfg.incentive_params) j["incentive_params"] = incentive_json(*cfg.incentive_params);
    return j;
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

json summary_json(const SchemeSummary& s) {
    return {{"scheme", std::string(to_string(s.scheme))},
            {"rounds", s.rounds},
            {"mean_saving_ratio", s.mean_saving_ratio},
            {"ci_half_width", s.ci_half_width},
            {"aggregate_saving_ratio", s.aggregate_saving_ratio},
            {"mean_energy_j", s.mean_energy_j},
            {"mean_tasks", s.mean_tasks},
            {"mean_solve_ms", opt_json(s.mean_solve_ms)},
            {"p50_solve_ms", opt_json(s.p50_solve_ms)},
            {"p95_solve_ms", opt_json(s.p95_solve_ms)}};
}

std::string summary_fields(const SchemeSummary& s, double confidence_level) {
    std::string row;
    row += csv_field(to_string(s.scheme));
    row += ',' + std::to_string(s.rounds);
    row += ',' + format_double(s.mean_saving_ratio);
    row += ',' + format_double(s.ci_half_width);
    row += ',' + format_double(confidence_level);
    row += ',' + format_double(s.aggregate_saving_ratio);
    row += ',' + format_double(s.mean_energy_j);
    row += ',' + format_double(s.mean_tasks);
    row += ',' + opt_double(s.mean_solve_ms);
    row += ',' + opt_double(s.p50_solve_ms);
    row += ',' + opt_double(s.p95_solve_ms);
    return row;
}

constexpr const char* summary_header =
    "scheme,rounds,mean_saving_ratio,ci_half_width,confidence_level,aggregate_saving_ratio,"
    "mean_energy_j,mean_tasks,mean_solve_ms,p50_solve_ms,p95_solve_ms";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json manifest_base(const std::string& command, const ExperimentConfig& cfg) {
    return {{"artifact", "d2dcrowd"},
            {"version", version()},
            {"command", command},
            {"seed", cfg.scenario.rng_seed},
            {"config", config_json(cfg)},
            {"kernel_isa", std::string(kernels::to_string(kernels::active_isa()))}};
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    {
        Reader r(j, "config");
        if (const json* s = r.find("scenario")) read_scenario(*s, cfg.scenario);
        r.integer("rounds", cfg.rounds);
        if (const json* s = r.find("schemes")) {
            if (!s->is_array()) fail("config.schemes", "expected an array of names");
            cfg.schemes.clear();
            for (const auto& name : *s) {
                if (!name.is_string()) fail("config.schemes", "expected an array of names");
                auto sc = parse_scheme(name.get<std::string>());
                if (!sc) fail("config.schemes", "unknown scheme \"" + name.get<std::string>() + "\"");
                cfg.schemes.push_back(*sc);
            }
        }
        r.boolean("incentive", cfg.incentive);
        if (const json* p = r.find("incentive_params")) {
            IncentiveConfig ic = default_incentive(cfg.scenario);
            Reader pr(*p, "config.incentive_params");
            pr.number("alpha_cpu", ic.alpha_cpu);
            pr.number("alpha_cell", ic.alpha_cell);
            pr.number("beta_cpu_fraction", ic.beta_cpu_fraction);
            pr.number("beta_cell_fraction", ic.beta_cell_fraction);
            pr.number("cpu_allowance", ic.cpu_allowance);
            pr.number("cell_allowance", ic.cell_allowance);
            cfg.incentive_params = ic;
        }
        r.number("confidence_level", cfg.confidence_level);
        r.string("output_dir", cfg.output_dir);
        std::string fmt = to_string(cfg.format);
        r.string("format", fmt);
        auto f = parse_format(fmt);
        if (!f) fail("config.format", "expected \"csv\" or \"json\"");
        cfg.format = *f;
        r.integer("jobs", cfg.jobs);
        r.boolean("timing", cfg.timing);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
    return config_json(cfg).dump(indent);
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return std::nullopt;
}

std::filesystem::path resolve_output_dir(const std::optional<std::string>& cli_out,
                                         const ExperimentConfig& cfg) {
    if (cli_out && !cli_out->empty()) return *cli_out;
    if (const char* env = std::getenv(out_dir_env); env && *env) return env;
    return cfg.output_dir.empty() ? std::filesystem::path("out") : std::filesystem::path(cfg.output_dir);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buf, end);
}

void write_rounds_csv(std::ostream& os, const std::vector<RoundRecord>& records) {
    os << "round,scheme,tasks,energy_j,saving_ratio,solve_ms,n_local,n_offload,n_exchange,"
          "all_local_j,input_hash\n";
    for (const auto& r : records) {
        os << r.round << ',' << csv_field(to_string(r.scheme)) << ',' << r.tasks << ','
           << format_double(r.energy_j) << ',' << format_double(r.saving_ratio) << ','
           << opt_double(r.solve_ms) << ',' << r.n_local << ',' << r.n_offload << ','
           << r.n_exchange << ',' << format_double(r.all_local_j) << ',' << hex64(r.input_hash)
           << '\n';
    }
}

void write_summary_csv(std::ostream& os, const ExperimentSummary& s, double confidence_level) {
    os << summary_header << '\n';
    for (const auto& sm : s.schemes) os << summary_fields(sm, confidence_level) << '\n';
}

void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepPoint>& points,
                     double confidence_level) {
    os << "param,value,seed," << summary_header << '\n';
    for (const auto& p : points)
        for (const auto& sm : p.summary.schemes)
            os << csv_field(to_string(param)) << ',' << format_double(p.value) << ',' << p.seed
               << ',' << summary_fields(sm, confidence_level) << '\n';
}

std::vector<std::string> write_run_outputs(const std::filesystem::path& dir,
                                           const ExperimentConfig& cfg,
                                           const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    if (cfg.format == OutputFormat::Csv) {
        std::ostringstream rounds, summary;
        write_rounds_csv(rounds, result.records);
        write_summary_csv(summary, result.summary, cfg.confidence_level);
        write_file(dir / "rounds.csv", rounds.str());
        write_file(dir / "summary.csv", summary.str());
        files = {"rounds.csv", "summary.csv"};
    } else {
        json rounds = json::array();
        for (const auto& r : result.records)
            rounds.push_back({{"round", r.round},
                              {"scheme", std::string(to_string(r.scheme))},
                              {"tasks", r.tasks},
                              {"energy_j", r.energy_j},
                              {"saving_ratio", r.saving_ratio},
                              {"solve_ms", opt_json(r.solve_ms)},
                              {"n_local", r.n_local},
                              {"n_offload", r.n_offload},
                              {"n_exchange", r.n_exchange},
                              {"all_local_j", r.all_local_j},
                              {"input_hash", hex64(r.input_hash)}});
        json summary = {{"confidence_level", cfg.confidence_level}, {"schemes", json::array()}};
        for (const auto& sm : result.summary.schemes) summary["schemes"].push_back(summary_json(sm));
        write_file(dir / "rounds.json", rounds.dump(2) + "\n");
        write_file(dir / "summary.json", summary.dump(2) + "\n");
        files = {"rounds.json", "summary.json"};
    }
    if (result.incentive) {
        const auto& tr = *result.incentive;
        if (cfg.format == OutputFormat::Csv) {
            std::ostringstream os;
            os << "round,received_cpu,contributed_cpu,received_cell,contributed_cell\n";
            for (std::size_t r = 0; r < tr.totals.size(); ++r)
                os << r << ',' << format_double(tr.totals[r][0]) << ','
                   << format_double(tr.totals[r][1]) << ',' << format_double(tr.totals[r][2])
                   << ',' << format_double(tr.totals[r][3]) << '\n';
            write_file(dir / "incentive.csv", os.str());
            files.push_back("incentive.csv");
        } else {
            json j = {{"ineligible_offloads", tr.ineligible_offloads}, {"rounds", json::array()}};
            for (std::size_t r = 0; r < tr.totals.size(); ++r)
                j["rounds"].push_back({{"round", r},
                                       {"received_cpu", tr.totals[r][0]},
                                       {"contributed_cpu", tr.totals[r][1]},
                                       {"received_cell", tr.totals[r][2]},
                                       {"contributed_cell", tr.totals[r][3]}});
            write_file(dir / "incentive.json", j.dump(2) + "\n");
            files.push_back("incentive.json");
        }
    }
    json manifest = manifest_base("run", cfg);
    manifest["files"] = files;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    files.push_back("manifest.json");
    return files;
}

std::vector<std::string> write_sweep_outputs(const std::filesystem::path& dir,
                                             const ExperimentConfig& cfg, SweepParam param,
                                             const std::vector<double>& values, bool keep_density,
                                             const std::vector<SweepPoint>& points) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    if (cfg.format == OutputFormat::Csv) {
        std::ostringstream os;
        write_sweep_csv(os, param, points, cfg.confidence_level);
        write_file(dir / "sweep.csv", os.str());
        files.push_back("sweep.csv");
    } else {
        json rows = json::array();
        for (const auto& p : points)
            for (const auto& sm : p.summary.schemes) {
                json row = summary_json(sm);
                row["param"] = to_string(param);
                row["value"] = p.value;
                row["seed"] = p.seed;
                rows.push_back(row);
            }
        write_file(dir / "sweep.json", rows.dump(2) + "\n");
        files.push_back("sweep.json");
    }
    json manifest = manifest_base("sweep", cfg);
    manifest["sweep"] = {{"param", to_string(param)}, {"values", values}, {"keep_density", keep_density}};
    manifest["files"] = files;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    files.push_back("manifest.json");
    return files;
}

}  // namespace d2dcrowd::io
