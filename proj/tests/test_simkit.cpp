#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "d2dcrowd/io.hpp"
#include "d2dcrowd/simkit.hpp"

using namespace d2dcrowd;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.scenario.device_count = 20;
    c.scenario.area = {300, 300};
    c.rounds = 12;
    c.scenario.rng_seed = 2024;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("d2dcrowd_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("one device with one task saves nothing under any scheme") {
    ExperimentConfig c;
    c.scenario.device_count = 1;
    c.scenario.task_frequency = 1.0;
    c.rounds = 1;
    auto res = run_experiment(c);
    REQUIRE(res.records.size() == c.schemes.size());
    for (const auto& r : res.records) {
        CHECK(r.tasks == 1);
        CHECK(r.n_local == 1);
        CHECK(r.saving_ratio == 0.0);
    }
}

TEST_CASE("same seed, byte-identical outputs; worker count does not matter") {
    auto c = small_config();
    auto a = scratch("det_a"), b = scratch("det_b");
    io::write_run_outputs(a, c, run_experiment(c));
    c.jobs = 4;
    io::write_run_outputs(b, c, run_experiment(c));
    CHECK(slurp(a / "rounds.csv") == slurp(b / "rounds.csv"));
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
    CHECK_FALSE(slurp(a / "rounds.csv").empty());
    auto other = small_config();
    other.scenario.rng_seed = 2025;
    auto d = scratch("det_c");
    io::write_run_outputs(d, other, run_experiment(other));
    CHECK(slurp(a / "rounds.csv") != slurp(d / "rounds.csv"));
}

TEST_CASE("records are complete, share round inputs and recompute the summary") {
    auto c = small_config();
    c.schemes = {Scheme::Optimal, Scheme::Greedy, Scheme::Local};
    c.verify_certificates = true;
    auto res = run_experiment(c);
    REQUIRE(res.records.size() == c.rounds * 3);
    for (std::size_t r = 0; r < c.rounds; ++r) {
        const auto& first = res.records[r * 3];
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& rec = res.records[r * 3 + k];
            CHECK(rec.round == r);
            CHECK(rec.scheme == c.schemes[k]);
            CHECK(rec.input_hash == first.input_hash);
            CHECK(rec.tasks == first.tasks);
            CHECK(rec.n_local + rec.n_offload + rec.n_exchange == rec.tasks);
            CHECK(rec.violations == 0);
            CHECK_FALSE(rec.solve_ms.has_value());
        }
        CHECK(first.certificate_ok == true);
        CHECK(res.records[r * 3 + 2].saving_ratio == 0.0);
        CHECK(first.energy_j <= res.records[r * 3 + 1].energy_j + 1e-9 * first.energy_j);
    }
    // Independent recomputation of the optimal row.
    double sum = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < c.rounds; ++r) sum += res.records[r * 3].saving_ratio;
    const double mean = sum / c.rounds;
    for (std::size_t r = 0; r < c.rounds; ++r) sq += std::pow(res.records[r * 3].saving_ratio - mean, 2);
    const double half = 1.6448536269514722 * std::sqrt(sq / (c.rounds - 1)) / std::sqrt(double(c.rounds));
    const auto& s = res.summary.at(Scheme::Optimal);
    CHECK(s.rounds == c.rounds);
    CHECK(s.mean_saving_ratio == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.ci_half_width == doctest::Approx(half).epsilon(1e-9));
    CHECK_FALSE(s.mean_solve_ms.has_value());
    auto again = summarize(res.records, c.schemes, c.confidence_level);
    CHECK(again.at(Scheme::Greedy).mean_energy_j == res.summary.at(Scheme::Greedy).mean_energy_j);
}

TEST_CASE("timing fills the solve-time columns") {
    auto c = small_config();
    c.rounds = 3;
    c.timing = true;
    auto res = run_experiment(c);
    for (const auto& r : res.records) CHECK(r.solve_ms.has_value());
    const auto& s = res.summary.at(Scheme::Optimal);
    REQUIRE(s.p95_solve_ms.has_value());
    CHECK(*s.p50_solve_ms <= *s.p95_solve_ms);
}

TEST_CASE("rounds move devices and redraw tasks") {
    auto c = small_config();
    auto rounds = generate_rounds(c.scenario, 3);
    REQUIRE(rounds.size() == 3);
    CHECK(input_hash(rounds[0]) != input_hash(rounds[1]));
    auto again = generate_rounds(c.scenario, 3);
    for (std::size_t r = 0; r < 3; ++r) CHECK(input_hash(rounds[r]) == input_hash(again[r]));
}

TEST_CASE("incentive trace conserves resources and never offloads ineligible owners") {
    auto c = small_config();
    c.rounds = 40;
    c.incentive = true;
    IncentiveConfig ic = default_incentive(c.scenario);
    ic.cpu_allowance *= 0.5;
    ic.cell_allowance *= 0.5;
    c.incentive_params = ic;
    auto res = run_experiment(c);
    REQUIRE(res.incentive.has_value());
    const auto& tr = *res.incentive;
    CHECK(tr.totals.size() == c.rounds);
    for (const auto& t : tr.totals) {
        CHECK(t[0] == t[1]);
        CHECK(t[2] == t[3]);
    }
    CHECK(tr.ineligible_offloads == 0);
    CHECK(tr.totals.back()[0] > 0.0);
    for (DeviceId d = 0; d < tr.ledger.size(); ++d) {
        const auto& cr = tr.ledger.credit(d);
        CHECK(cr.received_cpu <= tr.ledger.beta_cpu() + cr.contributed_cpu);
        CHECK(cr.received_cell <= tr.ledger.beta_cell() + cr.contributed_cell);
    }
}

TEST_CASE("scheme failures name the round") {
    auto c = small_config();
    c.scenario.load_range = {1.0, 1.0};
    c.scenario.task_type_mix = {1.0, 0.0, 0.0};
    try {
        run_experiment(c);
        FAIL("expected a round error");
    } catch (const RoundError& e) {
        CHECK(e.round() == 0);
        CHECK(std::string(e.what()).find("round 0") != std::string::npos);
    }
}

TEST_CASE("experiment config validation") {
    auto c = small_config();
    c.rounds = 0;
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    c = small_config();
    c.schemes.clear();
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    c = small_config();
    c.schemes = {Scheme::Greedy, Scheme::Greedy};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sweeps") {
    auto c = small_config();
    c.rounds = 3;
    CHECK_THROWS_AS(sweep(c, SweepParam::TaskFrequency, {}), ConfigError);
    CHECK_THROWS_AS(sweep(c, SweepParam::TaskFrequency, {0.2, 1.5}), ConfigError);
    CHECK_THROWS_AS(sweep(c, SweepParam::Devices, {10, 2.5}), ConfigError);
    auto pts = sweep(c, SweepParam::TaskFrequency, {0.2, 0.5, 0.8});
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].seed != pts[1].seed);
    std::ostringstream os;
    io::write_sweep_csv(os, SweepParam::TaskFrequency, pts, c.confidence_level);
    std::size_t lines = 0;
    for (char ch : os.str()) lines += ch == '\n';
    CHECK(lines == 1 + 3 * c.schemes.size());

    auto dense = sweep(c, SweepParam::Devices, {10, 40}, true);
    CHECK(dense.size() == 2);
    CHECK(parse_sweep_param("devices") == SweepParam::Devices);
    CHECK(parse_sweep_param("task-freq") == SweepParam::TaskFrequency);
    CHECK_FALSE(parse_sweep_param("alpha").has_value());
}
