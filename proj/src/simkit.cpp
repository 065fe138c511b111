#include "d2dcrowd/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace d2dcrowd {

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kDeviceStream = 1;
constexpr std::uint64_t kMobilityStream = 2;
constexpr std::uint64_t kTaskStream = 3;
constexpr std::uint64_t kRandomSchemeStream = 4;
constexpr std::uint64_t kSweepStream = 5;

std::string round_message(std::size_t round, Scheme scheme, const std::string& what) {
    std::ostringstream os;
    os << "round " << round << ", scheme " << to_string(scheme) << ": " << what;
    return os.str();
}

}  // namespace

RoundError::RoundError(std::size_t round, Scheme scheme, const std::string& what)
    : std::runtime_error(round_message(round, scheme, what)), round_(round), scheme_(scheme) {}

void ExperimentConfig::validate() const {
    scenario.validate();
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
    if (schemes.empty()) throw ConfigError("schemes must not be empty");
    for (std::size_t i = 0; i < schemes.size(); ++i)
        for (std::size_t j = i + 1; j < schemes.size(); ++j)
            if (schemes[i] == schemes[j])
                throw ConfigError("scheme listed twice: " + std::string(to_string(schemes[i])));
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw ConfigError("confidence_level must lie in (0, 1)");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (incentive_params) incentive_params->validate();
}

IncentiveConfig ExperimentConfig::effective_incentive() const {
    return incentive_params ? *incentive_params : default_incentive(scenario);
}

const SchemeSummary& ExperimentSummary::at(Scheme s) const {
    for (const auto& x : schemes)
        if (x.scheme == s) return x;
    throw std::out_of_range("scheme not in summary: " + std::string(to_string(s)));
}

std::vector<Round> generate_rounds(const ScenarioConfig& cfg, std::size_t rounds) {
    cfg.validate();
    const std::uint64_t seed = cfg.rng_seed;
    Rng dev_rng(derive_seed(seed, kDeviceStream, 0));
    std::vector<DeviceProfile> devices = generate_devices(cfg, dev_rng);
    std::vector<Round> out;
    out.reserve(rounds);
    for (std::size_t r = 0; r < rounds; ++r) {
        if (r > 0) {
            Rng mob(derive_seed(seed, kMobilityStream, r));
            devices = step_mobility(devices, cfg, mob);
        }
        Rng task_rng(derive_seed(seed, kTaskStream, r));
        Round round;
        round.devices = devices;
        round.tasks = generate_tasks(devices, cfg, task_rng);
        round.connectivity = build_connectivity(devices, cfg);
        out.push_back(std::move(round));
    }
    return out;
}

namespace {

struct SchemeRun {
    Assignment assignment;
    RoundRecord record;
};

SchemeRun run_one(const ExperimentConfig& cfg, const Round& round, std::size_t r, Scheme s,
                  double all_local_j, std::uint64_t hash) {
    if (input_hash(round) != hash)
        throw RoundError(r, s, "round input changed between schemes");
    SchemeRun out;
    RoundRecord& rec = out.record;
    rec.round = r;
    rec.scheme = s;
    rec.input_hash = hash;
    rec.all_local_j = all_local_j;
    try {
        using clock = std::chrono::steady_clock;
        const auto t0 = clock::now();
        if (s == Scheme::Optimal) {
            OptimalSolution sol = solve_optimal(round);
            const auto t1 = clock::now();
            if (cfg.timing) rec.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (cfg.verify_certificates) rec.certificate_ok = sol.verify().ok;
            out.assignment = std::move(sol.assignment);
        } else {
            Rng rng(derive_seed(cfg.scenario.rng_seed, kRandomSchemeStream, r));
            out.assignment = run_scheme(s, round, rng);
            const auto t1 = clock::now();
            if (cfg.timing) rec.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
    } catch (const RoundError&) {
        throw;
    } catch (const std::exception& e) {
        throw RoundError(r, s, e.what());
    }
    const Assignment& a = out.assignment;
    rec.tasks = a.task_count();
    rec.energy_j = a.total_energy_j;
    rec.saving_ratio = saving_ratio(a.total_energy_j, all_local_j);
    rec.n_local = a.local_count();
    rec.n_offload = a.offload_count();
    rec.n_exchange = a.exchange_count();
    rec.violations = feasibility_violations(a, round).size();
    return out;
}

// The all-local baseline every saving ratio is measured against.
double baseline_energy(const Round& round, std::size_t r) {
    try {
        return all_local_assignment(round).total_energy_j;
    } catch (const std::exception& e) {
        throw RoundError(r, Scheme::Local, e.what());
    }
}

std::size_t ineligible_offloads(const Assignment& a, const Round& round) {
    const auto task_of = round.task_index();
    std::size_t n = 0;
    for (const auto& p : a.placements)
        if (p.owner != p.executor && !round.tasks[task_of[p.owner]].offload_allowed) ++n;
    return n;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<Round> rounds = generate_rounds(cfg.scenario, cfg.rounds);
    const std::size_t ns = cfg.schemes.size();
    std::vector<RoundRecord> records(rounds.size() * ns);
    ExperimentResult result;

    if (cfg.incentive) {
        // Credits carry over between rounds, so this path is sequential.
        IncentiveTrace trace;
        trace.ledger = CreditLedger(cfg.scenario.device_count, cfg.effective_incentive());
        for (std::size_t r = 0; r < rounds.size(); ++r) {
            const Round round = filter_round(rounds[r], trace.ledger);
            const std::uint64_t hash = input_hash(round);
            const double local = baseline_energy(round, r);
            Assignment credited;
            for (std::size_t k = 0; k < ns; ++k) {
                SchemeRun run = run_one(cfg, round, r, cfg.schemes[k], local, hash);
                trace.ineligible_offloads += ineligible_offloads(run.assignment, round);
                records[r * ns + k] = run.record;
                if (k == 0) credited = std::move(run.assignment);
            }
            trace.ledger.record(credited, round);
            trace.totals.push_back({trace.ledger.total_received_cpu(),
                                    trace.ledger.total_contributed_cpu(),
                                    trace.ledger.total_received_cell(),
                                    trace.ledger.total_contributed_cell()});
        }
        result.incentive = std::move(trace);
    } else {
        auto do_round = [&](std::size_t r) {
            const Round& round = rounds[r];
            const std::uint64_t hash = input_hash(round);
            const double local = baseline_energy(round, r);
            for (std::size_t k = 0; k < ns; ++k)
                records[r * ns + k] = run_one(cfg, round, r, cfg.schemes[k], local, hash).record;
        };
        const std::size_t workers = std::min(cfg.jobs, rounds.size());
        if (workers <= 1) {
            for (std::size_t r = 0; r < rounds.size(); ++r) do_round(r);
        } else {
            std::atomic<std::size_t> next{0};
            std::mutex err_mu;
            std::exception_ptr first_error;
            std::size_t first_error_round = rounds.size();
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t r = next++; r < rounds.size(); r = next++) {
                        try {
                            do_round(r);
                        } catch (...) {
                            std::lock_guard lock(err_mu);
                            // Report the earliest failing round, as a sequential run would.
                            if (r < first_error_round) {
                                first_error_round = r;
                                first_error = std::current_exception();
                            }
                        }
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (first_error) std::rethrow_exception(first_error);
        }
    }
    result.records = std::move(records);
    result.summary = summarize(result.records, cfg.schemes, cfg.confidence_level);
    return result;
}

namespace {

// Linear interpolation between order statistics.
double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

ExperimentSummary summarize(const std::vector<RoundRecord>& records,
                            const std::vector<Scheme>& schemes, double confidence_level) {
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw ConfigError("confidence_level must lie in (0, 1)");
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 0.5 + 0.5 * confidence_level);

    ExperimentSummary out;
    for (Scheme s : schemes) {
        SchemeSummary sm;
        sm.scheme = s;
        std::vector<double> savings;
        std::vector<double> times;
        double energy = 0.0, local = 0.0, tasks = 0.0;
        bool all_timed = true;
        for (const auto& r : records) {
            if (r.scheme != s) continue;
            savings.push_back(r.saving_ratio);
            energy += r.energy_j;
            local += r.all_local_j;
            tasks += static_cast<double>(r.tasks);
            if (r.solve_ms) times.push_back(*r.solve_ms);
            else all_timed = false;
        }
        sm.rounds = savings.size();
        if (sm.rounds > 0) {
            const double n = static_cast<double>(sm.rounds);
            double sum = 0.0;
            for (double x : savings) sum += x;
            sm.mean_saving_ratio = sum / n;
            if (sm.rounds > 1) {
                double ss = 0.0;
                for (double x : savings) ss += (x - sm.mean_saving_ratio) * (x - sm.mean_saving_ratio);
                sm.ci_half_width = z * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
            }
            sm.aggregate_saving_ratio = saving_ratio(energy, local);
            sm.mean_energy_j = energy / n;
            sm.mean_tasks = tasks / n;
            if (all_timed) {
                double t = 0.0;
                for (double x : times) t += x;
                sm.mean_solve_ms = t / n;
                sm.p50_solve_ms = percentile(times, 0.50);
                sm.p95_solve_ms = percentile(times, 0.95);
            }
        }
        out.schemes.push_back(sm);
    }
    return out;
}

const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::Devices: return "devices";
        case SweepParam::TaskFrequency: return "task-freq";
    }
    return "unknown";
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) {
    if (name == "devices") return SweepParam::Devices;
    if (name == "task-freq") return SweepParam::TaskFrequency;
    return std::nullopt;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepParam param,
                              const std::vector<double>& values, bool keep_density) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    for (double v : values) {
        std::ostringstream os;
        if (param == SweepParam::Devices) {
            if (!(v >= 1.0 && v == std::floor(v) && v <= 4294967295.0)) {
                os << "devices value must be a positive integer, got " << v;
                throw ConfigError(os.str());
            }
        } else if (!(v >= 0.0 && v <= 1.0)) {
            os << "task-freq value must lie in [0, 1], got " << v;
            throw ConfigError(os.str());
        }
    }
    cfg.validate();

    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ExperimentConfig c = cfg;
        c.scenario.rng_seed = derive_seed(cfg.scenario.rng_seed, kSweepStream, i);
        if (param == SweepParam::Devices) {
            c.scenario.device_count = static_cast<std::uint32_t>(values[i]);
            if (keep_density) {
                const double scale = std::sqrt(values[i] / static_cast<double>(cfg.scenario.device_count));
                c.scenario.area.width = cfg.scenario.area.width * scale;
                c.scenario.area.height = cfg.scenario.area.height * scale;
            }
        } else {
            c.scenario.task_frequency = values[i];
        }
        SweepPoint pt;
        pt.value = values[i];
        pt.seed = c.scenario.rng_seed;
        pt.summary = run_experiment(c).summary;
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace d2dcrowd
