#include "doctest.h"

#include "d2dcrowd/schemes.hpp"
#include "d2dcrowd/verify.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace d2dcrowd;
using namespace testsupport;

namespace {

// Owners 0 and 1 on busy CPUs; idle 2 is fast, idle 3 a little slower.
// Owner 0 (small task) sees both idles, owner 1 (large task) only sees 2.
Round greedy_trap() {
    return make_round({device(0, 0.7), device(1, 0.7), device(2, 0.0), device(3, 0.3)},
                      {cpu_task(0, 1e6), cpu_task(1, 1e7)},
                      {{0, 2, 1e8}, {0, 3, 1e8}, {1, 2, 1e8}});
}

}  // namespace

TEST_CASE("a lone owner runs locally") {
    auto r = make_round({device(0)}, {cpu_task(0, 1e6)}, {});
    for (Scheme s : {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random, Scheme::Local}) {
        Rng rng(1);
        auto a = run_scheme(s, r, rng);
        REQUIRE(a.placements.size() == 1);
        CHECK(a.placements[0].executor == 0);
        CHECK(a.total_energy_j == local_energy(r.devices[0], r.tasks[0]).total);
    }
}

TEST_CASE("a cheaper idle neighbour takes the task") {
    auto r = make_round({device(0, 0.7), device(1, 0.0)}, {cpu_task(0, 1e6)}, {{0, 1, 1e8}});
    const double el = local_energy(r.devices[0], r.tasks[0]).total;
    const double eo = offload_energy(r.devices[0], r.devices[1], r.tasks[0], 1e8, 1e8).total;
    REQUIRE(eo < el);
    for (auto a : {assign_optimal(r), assign_greedy(r), brute_force_assignment(r)}) {
        CHECK(a.placements[0].executor == 1);
        CHECK(a.total_energy_j == doctest::Approx(std::min(el, eo)).epsilon(1e-12));
    }
}

TEST_CASE("no tasks costs nothing") {
    auto r = make_round({device(0), device(1)}, {}, {{0, 1, 1e7}});
    Rng rng(1);
    for (Scheme s : {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random}) {
        auto a = run_scheme(s, r, rng);
        CHECK(a.placements.empty());
        CHECK(a.total_energy_j == 0.0);
    }
    CHECK(brute_force_assignment(r).total_energy_j == 0.0);
}

TEST_CASE("greedy takes the cheapest edge and loses overall") {
    const Round r = greedy_trap();
    const auto opt = assign_optimal(r);
    const auto gr = assign_greedy(r);
    const auto oracle = enumerate_assignments(r);
    CHECK(opt.total_energy_j == doctest::Approx(oracle.energy).epsilon(1e-12));
    CHECK(gr.total_energy_j > opt.total_energy_j + 1.0);
    CHECK(gr.placements[0].executor == 2);
    CHECK(gr.placements[1].executor == 1);
    CHECK(opt.placements[0].executor == 3);
    CHECK(opt.placements[1].executor == 2);
}

TEST_CASE("reciprocal needs both sides to gain") {
    SUBCASE("no reciprocal pair") {
        auto r = make_round({device(0, 0.1), device(1, 0.6)}, {cpu_task(0, 1e6), cpu_task(1, 1e6)}, {{0, 1, 1e8}});
        const auto a = assign_reciprocal(r);
        CHECK(a.local_count() == 2);
        CHECK(a.total_energy_j == doctest::Approx(all_local_assignment(r).total_energy_j).epsilon(1e-12));
    }
    SUBCASE("one reciprocal pair") {
        // A cpu task on a loaded phone with a good cellular link, a cellular
        // task on an idle CPU with a bad link: each is better off swapping.
        auto r = make_round({device(0, 0.7, 9e6), device(1, 0.0, 1e6), device(2, 0.5, 5e6)},
                            {cpu_task(0, 1e6), cell_task(1, 1e6), cpu_task(2, 1e6)}, {{0, 1, 1e8}});
        const auto a = assign_reciprocal(r);
        CHECK(a.exchange_count() == 2);
        CHECK(a.placements[0].executor == 1);
        CHECK(a.placements[1].executor == 0);
        const double want = offload_energy(r.devices[0], r.devices[1], r.tasks[0], 1e8, 1e8).total +
                            offload_energy(r.devices[1], r.devices[0], r.tasks[1], 1e8, 1e8).total +
                            local_energy(r.devices[2], r.tasks[2]).total;
        CHECK(a.total_energy_j == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("random baseline") {
    SUBCASE("no idle neighbours means all local") {
        auto r = make_round({device(0), device(1)}, {cpu_task(0, 1e6), cpu_task(1, 1e6)}, {{0, 1, 1e8}});
        Rng rng(3);
        CHECK(assign_random(r, rng).local_count() == 2);
    }
    SUBCASE("same seed, same assignment") {
        Rng gen(17);
        for (int k = 0; k < 20; ++k) {
            const Round r = verify::random_small_round(gen, 8);
            Rng a(99), b(99);
            const auto x = assign_random(r, a);
            const auto y = assign_random(r, b);
            REQUIRE(x.placements.size() == y.placements.size());
            for (std::size_t i = 0; i < x.placements.size(); ++i)
                CHECK(x.placements[i].executor == y.placements[i].executor);
        }
    }
    SUBCASE("mean over many draws is no better than optimal") {
        Rng gen(5);
        const Round r = verify::random_small_round(gen, 8);
        const double opt = assign_optimal(r).total_energy_j;
        Rng rng(6);
        double sum = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const auto a = assign_random(r, rng);
            CHECK(a.total_energy_j >= opt - 1e-9 * std::max(1.0, opt));
            sum += a.total_energy_j;
        }
        CHECK(sum / 1000.0 >= opt - 1e-9 * std::max(1.0, opt));
    }
}

TEST_CASE("optimal matches two independent exhaustive searches") {
    Rng rng(8080);
    for (int trial = 0; trial < 300; ++trial) {
        const Round r = verify::random_small_round(rng, 6);
        CAPTURE(trial);
        const double want = enumerate_assignments(r).energy;
        CHECK(rel_close(assign_optimal(r).total_energy_j, want, 1e-9));
        CHECK(rel_close(brute_force_assignment(r).total_energy_j, want, 1e-9));
    }
}

TEST_CASE("every scheme is feasible and no scheme beats optimal") {
    Rng rng(1357);
    for (int trial = 0; trial < 300; ++trial) {
        const Round r = verify::random_small_round(rng, 8);
        CAPTURE(trial);
        const auto opt = solve_optimal(r);
        CHECK(opt.verify().ok);
        const double local = all_local_assignment(r).total_energy_j;
        for (Scheme s : {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random, Scheme::Local}) {
            Rng srng(trial);
            const auto a = run_scheme(s, r, srng);
            CAPTURE(to_string(s));
            CHECK(feasibility_violations(a, r).empty());
            CHECK(a.task_count() == r.tasks.size());
            CHECK(rel_close(a.total_energy_j, objective_energy(a, r), 1e-12));
            CHECK(opt.assignment.total_energy_j <= a.total_energy_j + 1e-9 * std::max(1.0, a.total_energy_j));
            CHECK(saving_ratio(opt.assignment.total_energy_j, local) >= saving_ratio(a.total_energy_j, local) - 1e-9);
        }
        CHECK(assign_greedy(r).total_energy_j <= local + 1e-9 * std::max(1.0, local));
        CHECK(saving_ratio(assign_greedy(r).total_energy_j, local) >= -1e-9);
    }
}

TEST_CASE("pinned owners stay local in every scheme") {
    auto r = greedy_trap();
    r.tasks[0].offload_allowed = false;
    r.tasks[1].offload_allowed = false;
    Rng rng(1);
    for (Scheme s : {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random})
        CHECK(run_scheme(s, r, rng).local_count() == 2);
    CHECK(brute_force_assignment(r).local_count() == 2);
}

TEST_CASE("saving ratio") {
    CHECK(saving_ratio(10.0, 10.0) == 0.0);
    CHECK(saving_ratio(5.0, 10.0) == 0.5);
    CHECK(saving_ratio(0.0, 0.0) == 0.0);
}

TEST_CASE("brute force refuses large rounds") {
    std::vector<DeviceProfile> devs;
    for (DeviceId i = 0; i < 9; ++i) devs.push_back(device(i));
    auto r = make_round(devs, {cpu_task(0, 1e6)}, {});
    CHECK_THROWS_AS(brute_force_assignment(r), matching::SizeLimitError);
}

TEST_CASE("scheme names round-trip") {
    for (Scheme s : {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random, Scheme::Local})
        CHECK(parse_scheme(to_string(s)) == s);
    CHECK_FALSE(parse_scheme("hungarian").has_value());
}
