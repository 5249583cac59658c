#include "pnc/verifier.hpp"

#include "pnc/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace pnc {

namespace {

using Point = std::vector<Tokens>;
using PointSet = std::set<Point>;

ReachabilitySet explore(const Net& net, const ExploreLimits& limits)
{
    ReachabilitySet r = reachability_set(net, limits);
    if (!r.complete)
        throw InconclusiveError("inconclusive: exploration of '" + net.name() + "' stopped after " +
                                std::to_string(r.size()) + " markings");
    return r;
}

Tokens max_token(const ReachabilitySet& r)
{
    Tokens top = 0;
    for (const auto& m : r.markings)
        for (const auto& [p, v] : m.entries())
            top = std::max(top, v);
    return top;
}

Tokens max_constant(const LinSystem& q)
{
    Tokens top = 0;
    for (const auto& c : q.constraints())
        top = std::max<Tokens>(top, static_cast<Tokens>(std::llabs(c.bound())));
    return top;
}

/// Marking of `net` laid out along the places of `frame` (matched by name).
Point point_of(const Net& frame, const Net& net, const Marking& m)
{
    Point out;
    out.reserve(frame.num_places());
    for (PlaceId p : frame.places())
        out.push_back(m.get(net.place(frame.place_name(p))));
    return out;
}

PointSet points_of(const Net& net, const ReachabilitySet& r)
{
    PointSet out;
    for (const auto& m : r.markings)
        out.insert(point_of(net, net, m));
    return out;
}

/// ((ms lifted) intersected with (Q lifted)) projected on P1; nullopt when some
/// place of n1 is constrained by neither n2 nor q, so the set is infinite.
std::optional<PointSet> lift_project(const Net& n1, const LinSystem& q, const Net& n2,
                                     const std::vector<Marking>& ms, Tokens window)
{
    const auto qv = q.vars();
    const std::set<Var> qvars(qv.begin(), qv.end());
    for (PlaceId p : n1.places()) {
        const std::string& name = n1.place_name(p);
        if (!n2.find_place(name) && !qvars.count(name))
            return std::nullopt;
    }
    PointSet out;
    for (const auto& m2 : ms) {
        Valuation fixed;
        for (PlaceId p : n2.places())
            if (qvars.count(n2.place_name(p)))
                fixed[n2.place_name(p)] = m2.get(p);
        auto emit = [&](const Valuation& sol) {
            Point pt;
            pt.reserve(n1.num_places());
            for (PlaceId p : n1.places()) {
                const std::string& name = n1.place_name(p);
                if (auto p2 = n2.find_place(name)) {
                    pt.push_back(m2.get(*p2));
                } else {
                    auto it = sol.find(name);
                    pt.push_back(it != sol.end() ? it->second : fixed.at(name));
                }
            }
            out.insert(std::move(pt));
            return true;
        };
        if (q.size() == 0)
            emit({});
        else
            for_each_solution(q, fixed, std::max<Tokens>(window, 1), emit, SolutionOrder::Fast);
    }
    return out;
}

bool same_points(const PointSet& lhs, const std::optional<PointSet>& rhs)
{
    return rhs && lhs == *rhs;
}

}  // namespace

bool check_abstraction(const AbstractionTriple& triple, const ExploreLimits& limits)
{
    const ReachabilitySet r1 = explore(triple.n1, limits);
    const ReachabilitySet r2 = explore(triple.n2, limits);
    const Tokens window = std::max(max_token(r1), max_token(r2)) + max_constant(triple.q);
    return same_points(points_of(triple.n1, r1), lift_project(triple.n1, triple.q, triple.n2, r2.markings, window));
}

bool check_step(const Net& before, const ReductionStep& step, const Net& after, const ExploreLimits& limits)
{
    switch (step.kind) {
    case RuleKind::T:
    case RuleKind::D: {
        if (before.num_places() != after.num_places())
            return false;
        const ReachabilitySet r1 = explore(before, limits);
        const ReachabilitySet r2 = explore(after, limits);
        PointSet rhs;
        for (const auto& m : r2.markings)
            rhs.insert(point_of(before, after, m));
        return points_of(before, r1) == rhs;
    }
    case RuleKind::F: {
        if (before.num_places() != after.num_places())
            return false;
        const ReachabilitySet r1 = explore(before, limits);
        const ReachabilitySet r2 = explore(after, limits);
        PointSet rhs;
        for (const auto& m : r2.markings)
            rhs.insert(point_of(before, after, m));
        if (!rhs.insert(point_of(before, before, before.initial_marking())).second)
            return false;
        return points_of(before, r1) == rhs;
    }
    case RuleKind::R:
    case RuleKind::A:
    case RuleKind::L: {
        if (!step.constraint)
            return false;
        LinSystem q;
        q.add(*step.constraint);
        if (!check_abstraction({before, q, after}, limits))
            return false;
        if (step.kind != RuleKind::L)
            return true;
        const auto& terms = step.constraint->coefficients();
        if (terms.size() != 1 || !before.find_place(terms[0].var))
            return false;
        const Tokens k = before.initial(before.place(terms[0].var));
        return explore(before, limits).size() == (k + 1) * explore(after, limits).size();
    }
    }
    return false;
}

TraceCheck check_trace(const ReductionTrace& trace, const ExploreLimits& limits, bool all_prefixes)
{
    const std::vector<Net> nets = trace.nets();
    const Net& n0 = nets.front();
    const ReachabilitySet r0 = explore(n0, limits);
    const PointSet expected = points_of(n0, r0);

    const std::size_t n = trace.steps.size();
    for (std::size_t k = all_prefixes ? 1 : n; k <= n; ++k) {
        if (k == 0)
            break;
        const LinSystem q = trace.system_prefix(k);
        const ReachabilitySet rk = explore(nets[k], limits);
        const Tokens window = std::max(max_token(r0), max_token(rk)) + max_constant(q);
        std::optional<PointSet> got = lift_project(n0, q, nets[k], rk.markings, window);
        for (std::size_t j = 0; got && j < k; ++j) {
            if (trace.steps[j].kind != RuleKind::F)
                continue;
            auto fired = lift_project(n0, trace.system_prefix(j), nets[j], {nets[j].initial_marking()}, window);
            if (!fired)
                got.reset();
            else
                got->insert(fired->begin(), fired->end());
        }
        if (!same_points(expected, got)) {
            TraceCheck result;
            result.ok = false;
            result.failing_step = k - 1;
            result.message = "abstraction fails after step " + std::to_string(k) + " (" +
                             format_step(trace.steps[k - 1]) + ")";
            return result;
        }
    }
    return {};
}

}  // namespace pnc
