#include "doctest.h"

#include <cmath>
#include <set>

#include "d2dcrowd/scenario.hpp"

using namespace d2dcrowd;

TEST_CASE("d2d rate at 1 m and at the range limit") {
    ScenarioConfig cfg;
    const double at1 = 2e7 * std::log2(1.0 + 0.2 / 1e-8);
    const double at200 = 2e7 * std::log2(1.0 + 0.2 * std::pow(200.0, -3.0) / 1e-8);
    CHECK(d2d_rate(1.0, cfg) == doctest::Approx(at1).epsilon(1e-12));
    CHECK(d2d_rate(1.0, cfg) == doctest::Approx(4.86e8).epsilon(5e-3));
    CHECK(d2d_rate(200.0, cfg) == doctest::Approx(at200).epsilon(1e-12));
    CHECK(d2d_rate(200.0, cfg) == doctest::Approx(3.61e7).epsilon(5e-3));
}

TEST_CASE("d2d rate is decreasing, clamped below 1 m and bounded above") {
    ScenarioConfig cfg;
    double prev = d2d_rate(1.0, cfg);
    for (double d = 5.0; d <= 200.0; d += 5.0) {
        const double r = d2d_rate(d, cfg);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(d2d_rate(0.25, cfg) == d2d_rate(1.0, cfg));
    CHECK_THROWS_AS(d2d_rate(0.0, cfg), std::out_of_range);
    CHECK_THROWS_AS(d2d_rate(-3.0, cfg), std::out_of_range);
    CHECK_THROWS_AS(d2d_rate(200.5, cfg), std::out_of_range);
}

TEST_CASE("connectivity follows the distance cap") {
    ScenarioConfig cfg;
    std::vector<DeviceProfile> devs(3);
    for (DeviceId i = 0; i < 3; ++i) devs[i].id = i;
    devs[0].position = {0, 0};
    devs[1].position = {100, 0};
    devs[2].position = {350, 0};
    auto g = build_connectivity(devs, cfg);
    REQUIRE(g.links().size() == 1);
    CHECK(g.rate(0, 1).has_value());
    CHECK(g.rate(1, 0) == g.rate(0, 1));
    CHECK_FALSE(g.rate(1, 2).has_value());
    CHECK(*g.rate(0, 1) == doctest::Approx(d2d_rate(100.0, cfg)));
}

TEST_CASE("co-located devices form a complete graph") {
    ScenarioConfig cfg;
    const std::size_t k = 6;
    std::vector<DeviceProfile> devs(k);
    for (DeviceId i = 0; i < k; ++i) {
        devs[i].id = i;
        devs[i].position = {42, 42};
    }
    auto g = build_connectivity(devs, cfg);
    CHECK(g.links().size() == k * (k - 1) / 2);
    for (const auto& l : g.links()) CHECK(l.rate == d2d_rate(1.0, cfg));
}

TEST_CASE("connectivity graph rejects bad links") {
    ConnectivityGraph g(3);
    CHECK_THROWS(g.add_link(1, 1, 1e6));
    g.add_link(0, 1, 1e6);
    CHECK_THROWS(g.add_link(1, 0, 1e6));
    CHECK_THROWS(g.add_link(0, 2, 0.0));
    CHECK_THROWS(g.add_link(0, 5, 1e6));
}

TEST_CASE("device generation") {
    ScenarioConfig cfg;
    Rng rng(7);
    cfg.device_count = 0;
    CHECK(generate_devices(cfg, rng).empty());

    cfg.device_count = 200;
    Rng a(11), b(11);
    auto d1 = generate_devices(cfg, a);
    auto d2 = generate_devices(cfg, b);
    REQUIRE(d1.size() == 200);
    for (std::size_t i = 0; i < d1.size(); ++i) {
        CHECK(d1[i].id == i);
        CHECK(d1[i].position.x == d2[i].position.x);
        CHECK(d1[i].load == d2[i].load);
        CHECK(d1[i].cpu_capacity == 2e9);
        CHECK(d1[i].compute_power == 0.9);
        CHECK(d1[i].cellular_tx_power == 0.6);
        CHECK(d1[i].d2d_tx_power == 0.2);
        CHECK(d1[i].d2d_rx_power == 0.2);
        CHECK(d1[i].load >= 0.0);
        CHECK(d1[i].load <= 0.7);
        CHECK(d1[i].cellular_rate >= 1e6);
        CHECK(d1[i].cellular_rate <= 10e6);
        CHECK(d1[i].position.x >= 0.0);
        CHECK(d1[i].position.x <= cfg.area.width);
    }
}

TEST_CASE("task generation") {
    ScenarioConfig cfg;
    cfg.device_count = 40;
    Rng rng(3);
    auto devs = generate_devices(cfg, rng);

    SUBCASE("p = 0 gives no tasks") {
        cfg.task_frequency = 0.0;
        CHECK(generate_tasks(devs, cfg, rng).empty());
    }
    SUBCASE("p = 1 gives one task per device") {
        cfg.task_frequency = 1.0;
        auto tasks = generate_tasks(devs, cfg, rng);
        CHECK(tasks.size() == devs.size());
    }
    SUBCASE("pure-cpu at 500 KB") {
        cfg.task_frequency = 1.0;
        cfg.task_type_mix = {1.0, 0.0, 0.0};
        cfg.input_size_range = {4.096e6, 4.096e6};
        for (const auto& t : generate_tasks(devs, cfg, rng)) {
            CHECK(t.kind == TaskKind::PureCpu);
            CHECK(t.input_bits == 4.096e6);
            CHECK(t.cpu_cycles == 1.2288e10);
            CHECK(t.cellular_bits == 0.0);
            CHECK(t.output_bits == std::round(0.2 * 4.096e6));
        }
    }
    SUBCASE("per-kind shapes") {
        cfg.task_frequency = 1.0;
        for (const auto& t : generate_tasks(devs, cfg, rng)) {
            CHECK(t.input_bits >= cfg.input_size_range.min);
            CHECK(t.input_bits <= cfg.input_size_range.max);
            switch (t.kind) {
                case TaskKind::PureCpu:
                    CHECK(t.cellular_bits == 0.0);
                    CHECK(t.cpu_cycles == std::round(3000.0 * t.input_bits));
                    break;
                case TaskKind::PureCellular:
                    CHECK(t.cpu_cycles == 0.0);
                    CHECK(t.cellular_bits == t.input_bits);
                    CHECK(t.output_bits == 0.0);
                    break;
                case TaskKind::Hybrid:
                    CHECK(t.cpu_cycles == std::round(1000.0 * t.input_bits));
                    CHECK(t.cellular_bits == std::round(0.1 * t.input_bits));
                    break;
            }
        }
    }
}

TEST_CASE("task ownership frequency stays within 3 sigma") {
    ScenarioConfig cfg;
    cfg.device_count = 100;
    cfg.task_frequency = 0.3;
    Rng rng(99);
    auto devs = generate_devices(cfg, rng);
    const int rounds = 200;
    double owned = 0;
    for (int r = 0; r < rounds; ++r) owned += static_cast<double>(generate_tasks(devs, cfg, rng).size());
    const double n = 100.0 * rounds;
    const double sigma = std::sqrt(n * 0.3 * 0.7);
    CHECK(std::abs(owned - 0.3 * n) <= 3.0 * sigma);
}

TEST_CASE("mobility stays inside the area and is reproducible") {
    ScenarioConfig cfg;
    cfg.device_count = 100;
    cfg.mobility_speed_range = {0.0, 400.0};
    Rng rng(5);
    auto devs = generate_devices(cfg, rng);
    Rng a(8), b(8);
    auto x = devs, y = devs;
    for (int s = 0; s < 50; ++s) {
        x = step_mobility(x, cfg, a);
        y = step_mobility(y, cfg, b);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i].position.x >= 0.0);
            CHECK(x[i].position.x <= cfg.area.width);
            CHECK(x[i].position.y >= 0.0);
            CHECK(x[i].position.y <= cfg.area.height);
            CHECK(x[i].position.x == y[i].position.x);
            CHECK(x[i].position.y == y[i].position.y);
            CHECK(x[i].cellular_rate == devs[i].cellular_rate);
        }
    }
}

TEST_CASE("zero speed leaves positions unchanged") {
    ScenarioConfig cfg;
    cfg.mobility_speed_range = {0.0, 0.0};
    Rng rng(2);
    auto devs = generate_devices(cfg, rng);
    auto moved = step_mobility(devs, cfg, rng);
    for (std::size_t i = 0; i < devs.size(); ++i) {
        CHECK(moved[i].position.x == devs[i].position.x);
        CHECK(moved[i].position.y == devs[i].position.y);
    }
}

TEST_CASE("config validation") {
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.task_frequency = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.task_type_mix = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.load_range = {0.8, 0.2};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.area.width = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("input hash changes with any field a scheme reads") {
    ScenarioConfig cfg;
    cfg.device_count = 10;
    cfg.task_frequency = 1.0;
    Rng rng(1);
    Round r;
    r.devices = generate_devices(cfg, rng);
    r.tasks = generate_tasks(r.devices, cfg, rng);
    r.connectivity = build_connectivity(r.devices, cfg);
    const auto h = input_hash(r);
    CHECK(input_hash(r) == h);
    auto r2 = r;
    r2.tasks[0].offload_allowed = false;
    CHECK(input_hash(r2) != h);
    auto r3 = r;
    r3.devices[3].load += 0.01;
    CHECK(input_hash(r3) != h);
}
