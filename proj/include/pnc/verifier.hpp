#pragma once

#include "pnc/explorer.hpp"
#include "pnc/linear.hpp"
#include "pnc/net.hpp"
#include "pnc/reduction.hpp"

#include <optional>
#include <string>

namespace pnc {

/// (N1, Q, N2): R(N1) should be the Q-consistent extension of R(N2) projected on P1.
struct AbstractionTriple {
    Net n1;
    LinSystem q;
    Net n2;
};

/// Both sides are materialized by exploration. Variables that lifting adds are
/// searched up to the largest token count seen in either state space plus the
/// largest constant of q. Throws InconclusiveError when an exploration stops early.
bool check_abstraction(const AbstractionTriple& triple, const ExploreLimits& limits = {});

/// The single-step relation for the step's rule:
///   T, D   R(before) = R(after)
///   R, A   abstraction with the step's equation
///   L      abstraction with p <= k and |R(before)| = (k+1) |R(after)|
///   F      R(before) = {m0} + R(after), disjointly
bool check_step(const Net& before, const ReductionStep& step, const Net& after, const ExploreLimits& limits = {});

struct TraceCheck {
    bool ok = true;
    /// Index of the first step after which the relation breaks.
    std::optional<std::size_t> failing_step;
    std::string message;
};

/// Checks the initial net against every intermediate net with the matching
/// prefix of Q (or only the residual when all_prefixes is false). Markings
/// consumed by fire-once steps are added back from the initial marking of the
/// net each step was applied to.
TraceCheck check_trace(const ReductionTrace& trace, const ExploreLimits& limits = {}, bool all_prefixes = true);

}  // namespace pnc
