#include "d2dcrowd/assignment.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace d2dcrowd {

std::size_t Assignment::local_count() const {
    return static_cast<std::size_t>(std::count_if(placements.begin(), placements.end(),
                                                  [](const Placement& p) { return p.owner == p.executor; }));
}

std::size_t Assignment::exchange_count() const {
    std::map<DeviceId, DeviceId> exec;
    for (const auto& p : placements) exec[p.owner] = p.executor;
    std::size_t n = 0;
    for (const auto& p : placements) {
        if (p.owner == p.executor) continue;
        auto it = exec.find(p.executor);
        if (it != exec.end() && it->second == p.owner) ++n;
    }
    return n;
}

std::size_t Assignment::offload_count() const {
    return placements.size() - local_count() - exchange_count();
}

std::vector<std::string> feasibility_violations(const Assignment& a, const Round& round) {
    std::vector<std::string> out;
    auto report = [&](auto&&... parts) {
        std::ostringstream os;
        (os << ... << parts);
        out.push_back(os.str());
    };
    const std::size_t n = round.devices.size();
    const auto task_of = round.task_index();

    std::map<std::pair<DeviceId, DeviceId>, int> decisions;
    std::vector<int> placed(n, 0);
    std::vector<int> executes(n, 0);
    std::vector<long> executor_of(n, -1);
    for (const auto& p : a.placements) {
        if (p.owner >= n || p.executor >= n) {
            report("placement references unknown device (", p.owner, " -> ", p.executor, ")");
            continue;
        }
        if (++decisions[{p.owner, p.executor}] > 1)
            report("binary: decision ", p.owner, " -> ", p.executor, " appears more than once");
        if (task_of[p.owner] < 0) report("coverage: device ", p.owner, " has no task but is placed");
        ++placed[p.owner];
        ++executes[p.executor];
        executor_of[p.owner] = p.executor;
        if (p.owner != p.executor && !round.connectivity.connected(p.owner, p.executor))
            report("connectivity: ", p.owner, " -> ", p.executor, " has no D2D link");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (task_of[i] >= 0 && placed[i] != 1)
            report("coverage: task of device ", i, " placed ", placed[i], " times");
        if (executes[i] > 1) report("capacity: device ", i, " executes ", executes[i], " tasks");
    }
    for (const auto& p : a.placements) {
        if (p.owner >= n || p.executor >= n || p.owner == p.executor) continue;
        if (task_of[p.executor] >= 0 && executor_of[p.executor] != static_cast<long>(p.owner))
            report("mutuality: ", p.owner, " -> ", p.executor, " but ", p.executor, " does not run on ",
                   p.owner);
    }
    return out;
}

double objective_energy(const Assignment& a, const Round& round) {
    const auto task_of = round.task_index();
    double total = 0.0;
    for (const auto& p : a.placements) {
        const Task& t = round.tasks.at(static_cast<std::size_t>(task_of.at(p.owner)));
        if (p.owner == p.executor) {
            total += local_energy(round.devices[p.owner], t).total;
        } else {
            const auto rate = round.connectivity.rate(p.owner, p.executor);
            if (!rate) throw std::invalid_argument("objective_energy: placement over a missing link");
            total += offload_energy(round.devices[p.owner], round.devices[p.executor], t, *rate, *rate)
                         .total;
        }
    }
    return total;
}

Assignment all_local_assignment(const Round& round) {
    Assignment a;
    for (const auto& t : round.tasks) {
        const double e = local_energy(round.devices.at(t.owner), t).total;
        a.placements.push_back({t.owner, t.owner, e});
    }
    std::sort(a.placements.begin(), a.placements.end(),
              [](const Placement& x, const Placement& y) { return x.owner < y.owner; });
    for (const auto& p : a.placements) a.total_energy_j += p.energy_j;
    return a;
}

}  // namespace d2dcrowd
