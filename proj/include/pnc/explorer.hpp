#pragma once

#include "pnc/net.hpp"
#include "pnc/numeric.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pnc {

struct ExploreLimits {
    std::size_t max_markings = 1'000'000;
    std::optional<Tokens> max_token_per_place;
    std::optional<std::chrono::milliseconds> time_budget;
};

/// Markings in breadth-first discovery order with a predecessor link each.
struct ReachabilitySet {
    std::vector<Marking> markings;
    /// parent[i] = (index of predecessor, transition fired); the root points to itself.
    std::vector<std::pair<std::size_t, TransId>> parent;
    bool complete = false;
    bool frontier_exhausted = false;

    std::size_t size() const { return markings.size(); }
    bool contains(const Marking& m) const { return index.count(m) != 0; }
    std::optional<std::size_t> find(const Marking& m) const;
    /// Firing sequence from m0 to markings[i].
    FiringSequence path_to(std::size_t i) const;

    std::unordered_map<Marking, std::size_t, MarkingHash> index;
};

/// Breadth-first closure of m0 under firing. Stops at the first limit hit with
/// complete = false.
ReachabilitySet reachability_set(const Net& net, const ExploreLimits& limits = {});

/// Throws ExplorationLimitError when the exploration does not complete.
BigInt count_reachable(const Net& net, const ExploreLimits& limits = {});

/// One marking per line: "p0:1 q:2" (the empty marking is an empty line).
std::string dump_markings(const Net& net, const ReachabilitySet& set);

}  // namespace pnc
