#include "pnc/explorer.hpp"

#include "pnc/errors.hpp"

#include <algorithm>

namespace pnc {

std::optional<std::size_t> ReachabilitySet::find(const Marking& m) const
{
    auto it = index.find(m);
    if (it == index.end())
        return std::nullopt;
    return it->second;
}

FiringSequence ReachabilitySet::path_to(std::size_t i) const
{
    FiringSequence path;
    while (parent.at(i).first != i) {
        path.push_back(parent[i].second);
        i = parent[i].first;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

ReachabilitySet reachability_set(const Net& net, const ExploreLimits& limits)
{
    if (limits.max_markings < 1)
        throw Error("max_markings must be at least 1");
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();

    ReachabilitySet r;
    auto within_token_bound = [&](const Marking& m) {
        if (!limits.max_token_per_place)
            return true;
        for (const auto& [p, v] : m.entries())
            if (v > *limits.max_token_per_place)
                return false;
        return true;
    };

    const Marking& m0 = net.initial_marking();
    if (!within_token_bound(m0))
        return r;
    r.markings.push_back(m0);
    r.parent.emplace_back(0, TransId{});
    r.index.emplace(m0, 0);

    const auto transitions = net.transitions();
    for (std::size_t head = 0; head < r.markings.size(); ++head) {
        if (limits.time_budget && (head & 1023) == 0 && Clock::now() - started > *limits.time_budget)
            return r;
        for (TransId t : transitions) {
            if (!enabled(net, r.markings[head], t))
                continue;
            Marking next = fire(net, r.markings[head], t);
            if (r.index.count(next))
                continue;
            if (!within_token_bound(next) || r.markings.size() >= limits.max_markings)
                return r;
            r.index.emplace(next, r.markings.size());
            r.markings.push_back(std::move(next));
            r.parent.emplace_back(head, t);
        }
    }
    r.complete = true;
    r.frontier_exhausted = true;
    return r;
}

BigInt count_reachable(const Net& net, const ExploreLimits& limits)
{
    const ReachabilitySet r = reachability_set(net, limits);
    if (!r.complete)
        throw ExplorationLimitError("exploration of '" + net.name() + "' stopped after " +
                                    std::to_string(r.size()) + " markings");
    return BigInt(r.size());
}

std::string dump_markings(const Net& net, const ReachabilitySet& set)
{
    std::string out;
    for (const auto& m : set.markings)
        out += format_marking(net, m) + "\n";
    return out;
}

}  // namespace pnc
