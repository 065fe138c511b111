#include "d2dcrowd/incentive.hpp"

#include <cmath>
#include <string>

namespace d2dcrowd {

void IncentiveConfig::validate() const {
    auto unit = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
    };
    unit(alpha_cpu, "incentive.alpha_cpu");
    unit(alpha_cell, "incentive.alpha_cell");
    unit(beta_cpu_fraction, "incentive.beta_cpu_fraction");
    unit(beta_cell_fraction, "incentive.beta_cell_fraction");
    if (!(cpu_allowance >= 0.0) || !std::isfinite(cpu_allowance))
        throw ConfigError("incentive.cpu_allowance must be >= 0");
    if (!(cell_allowance >= 0.0) || !std::isfinite(cell_allowance))
        throw ConfigError("incentive.cell_allowance must be >= 0");
}

IncentiveConfig default_incentive(const ScenarioConfig& cfg) {
    const double input = 0.5 * (cfg.input_size_range.min + cfg.input_size_range.max);
    const auto& mix = cfg.task_type_mix;
    IncentiveConfig ic;
    ic.cpu_allowance = input * (mix.pure_cpu * cfg.processing_density.pure_cpu +
                                mix.hybrid * cfg.processing_density.hybrid);
    ic.cell_allowance = input * (mix.pure_cellular + mix.hybrid * cfg.hybrid_cellular_ratio);
    return ic;
}

CreditLedger::CreditLedger(std::size_t device_count, const IncentiveConfig& cfg)
    : cfg_(cfg), credits_(device_count) {
    cfg_.validate();
}

bool CreditLedger::eligible(DeviceId d) const { return eligible_after(d, 0.0, 0.0); }

bool CreditLedger::eligible_after(DeviceId d, double cycles, double cell_bits) const {
    const Credit& c = credits_.at(d);
    return cfg_.alpha_cpu * (c.received_cpu + cycles) <= beta_cpu() + c.contributed_cpu &&
           cfg_.alpha_cell * (c.received_cell + cell_bits) <= beta_cell() + c.contributed_cell;
}

void CreditLedger::record(const Assignment& a, const Round& round) {
    const auto task_of = round.task_index();
    for (const auto& p : a.placements) {
        if (p.owner == p.executor) continue;
        const Task& t = round.tasks.at(static_cast<std::size_t>(task_of.at(p.owner)));
        credits_.at(p.owner).received_cpu += t.cpu_cycles;
        credits_.at(p.owner).received_cell += t.cellular_bits;
        credits_.at(p.executor).contributed_cpu += t.cpu_cycles;
        credits_.at(p.executor).contributed_cell += t.cellular_bits;
    }
}

double CreditLedger::total_received_cpu() const {
    double s = 0.0;
    for (const auto& c : credits_) s += c.received_cpu;
    return s;
}
double CreditLedger::total_contributed_cpu() const {
    double s = 0.0;
    for (const auto& c : credits_) s += c.contributed_cpu;
    return s;
}
double CreditLedger::total_received_cell() const {
    double s = 0.0;
    for (const auto& c : credits_) s += c.received_cell;
    return s;
}
double CreditLedger::total_contributed_cell() const {
    double s = 0.0;
    for (const auto& c : credits_) s += c.contributed_cell;
    return s;
}

bool eligible(DeviceId d, const CreditLedger& ledger) { return ledger.eligible(d); }

Round filter_round(const Round& round, const CreditLedger& ledger) {
    Round out = round;
    for (auto& t : out.tasks)
        if (!ledger.eligible_after(t.owner, t.cpu_cycles, t.cellular_bits)) t.offload_allowed = false;
    return out;
}

}  // namespace d2dcrowd
