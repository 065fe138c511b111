#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "d2dcrowd/io.hpp"

using namespace d2dcrowd;

TEST_CASE("csv fields are quoted only when needed") {
    CHECK(io::csv_field("optimal") == "optimal");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("doubles print in shortest round-trip form") {
    for (double v : {0.1, 1.0 / 3.0, 21.6, 1e-300, 123456789.125, 0.0}) {
        const auto s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("config parsing") {
    SUBCASE("defaults for an empty object") {
        auto c = io::parse_config("{}");
        CHECK(c.rounds == 100);
        CHECK(c.scenario.device_count == 50);
        CHECK(c.schemes.size() == 4);
    }
    SUBCASE("nested fields") {
        auto c = io::parse_config(R"({"scenario": {"device_count": 12, "area": {"width": 100, "height": 80},
            "load_range": {"min": 0.1, "max": 0.2}, "rng_seed": 18446744073709551615},
            "rounds": 7, "schemes": ["optimal", "local"], "format": "json", "incentive": true,
            "incentive_params": {"alpha_cpu": 0.5}})");
        CHECK(c.scenario.device_count == 12);
        CHECK(c.scenario.area.height == 80);
        CHECK(c.scenario.load_range.min == 0.1);
        CHECK(c.scenario.rng_seed == 18446744073709551615ull);
        CHECK(c.rounds == 7);
        CHECK(c.schemes == std::vector<Scheme>{Scheme::Optimal, Scheme::Local});
        CHECK(c.format == OutputFormat::Json);
        REQUIRE(c.incentive_params.has_value());
        CHECK(c.incentive_params->alpha_cpu == 0.5);
        CHECK(c.incentive_params->cpu_allowance == default_incentive(c.scenario).cpu_allowance);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(io::parse_config("{"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"round": 5})"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"scenario": {"devices": 5}})"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"rounds": -1})"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"rounds": 0})"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"schemes": ["hungarian"]})"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"scenario": {"task_frequency": 1.5}})"), ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"format": "xml"})"), ConfigError);
    }
    SUBCASE("missing file names the path") {
        try {
            io::load_config("/nonexistent/cfg.json");
            FAIL("expected an error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("/nonexistent/cfg.json") != std::string::npos);
        }
    }
}

TEST_CASE("config survives a json round trip") {
    ExperimentConfig c;
    c.scenario.device_count = 33;
    c.scenario.task_frequency = 0.37;
    c.rounds = 9;
    c.schemes = {Scheme::Random};
    c.incentive_params = default_incentive(c.scenario);
    auto back = io::parse_config(io::config_to_json(c));
    CHECK(io::config_to_json(back) == io::config_to_json(c));
}

TEST_CASE("output directory precedence") {
    ExperimentConfig c;
    c.output_dir = "from_config";
    ::unsetenv(io::out_dir_env);
    CHECK(io::resolve_output_dir(std::nullopt, c) == "from_config");
    ::setenv(io::out_dir_env, "from_env", 1);
    CHECK(io::resolve_output_dir(std::nullopt, c) == "from_env");
    CHECK(io::resolve_output_dir(std::string("from_cli"), c) == "from_cli");
    ::unsetenv(io::out_dir_env);
    c.output_dir.clear();
    CHECK(io::resolve_output_dir(std::nullopt, c) == "out");
}

TEST_CASE("rounds csv layout") {
    RoundRecord r;
    r.round = 3;
    r.scheme = Scheme::Greedy;
    r.tasks = 2;
    r.energy_j = 1.5;
    r.saving_ratio = 0.25;
    r.n_local = 1;
    r.n_offload = 1;
    r.all_local_j = 2.0;
    r.input_hash = 255;
    std::ostringstream os;
    io::write_rounds_csv(os, {r});
    CHECK(os.str() ==
          "round,scheme,tasks,energy_j,saving_ratio,solve_ms,n_local,n_offload,n_exchange,all_local_j,input_hash\n"
          "3,greedy,2,1.5,0.25,,1,1,0,2,00000000000000ff\n");
}

TEST_CASE("json outputs and manifest") {
    ExperimentConfig c;
    c.scenario.device_count = 8;
    c.rounds = 2;
    c.format = OutputFormat::Json;
    c.incentive = true;
    auto dir = std::filesystem::temp_directory_path() / "d2dcrowd_test_json";
    std::filesystem::remove_all(dir);
    auto files = io::write_run_outputs(dir, c, run_experiment(c));
    CHECK(files == std::vector<std::string>{"rounds.json", "summary.json", "incentive.json", "manifest.json"});
    std::ifstream f(dir / "manifest.json");
    std::stringstream ss;
    ss << f.rdbuf();
    const auto m = ss.str();
    CHECK(m.find("\"version\"") != std::string::npos);
    CHECK(m.find("\"seed\"") != std::string::npos);
    CHECK(m.find("\"device_count\": 8") != std::string::npos);
}
