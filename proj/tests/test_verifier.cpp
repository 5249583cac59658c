#include <doctest.h>

#include "corpus.hpp"
#include "pnc/errors.hpp"
#include "pnc/net_io.hpp"
#include "pnc/verifier.hpp"

using namespace pnc;

TEST_CASE("a net abstracts itself with the empty system")
{
    for (const auto& entry : pnc::testing::corpus(5))
        CHECK_MESSAGE(check_abstraction({entry.net, LinSystem{}, entry.net}), entry.name);
}

TEST_CASE("a constraint that excludes reachable markings breaks the abstraction")
{
    const Net net = pnc::testing::load_fixture("ring3.net");
    LinSystem q;
    q.add(parse_constraint("p1 = 0"));
    CHECK_FALSE(check_abstraction({net, q, net}));
}

TEST_CASE("reduction traces are abstractions, prefix by prefix")
{
    for (const auto& entry : pnc::testing::corpus(20)) {
        const ReductionTrace trace = reduce(entry.net, Strategy::Compact);
        const TraceCheck check = check_trace(trace);
        CHECK_MESSAGE(check.ok, entry.name << ": " << check.message);
        const auto nets = trace.nets();
        for (std::size_t i = 0; i < trace.steps.size(); ++i)
            CHECK_MESSAGE(check_step(nets[i], trace.steps[i], nets[i + 1]),
                          entry.name << " step " << format_step(trace.steps[i]));
    }
}

TEST_CASE("final triple of a trace without fire-once steps")
{
    const ReductionTrace trace = reduce(pnc::testing::load_fixture("house2.net"), Strategy::Compact);
    CHECK(check_abstraction({trace.initial, trace.system(), trace.residual}));
}

TEST_CASE("a corrupted trace is pinpointed at its first bad step")
{
    const Net net = pnc::testing::load_fixture("house2.net");
    const ReductionTrace good = reduce(net, Strategy::Compact);
    std::vector<ReductionStep> steps = good.steps;
    REQUIRE(steps.size() > 3);
    // replace the first redundancy equation by a wrong one over the same place
    REQUIRE(steps[0].kind == RuleKind::R);
    steps[0].constraint = parse_constraint("p20 = p18");
    const ReductionTrace bad = replay(net, steps);
    const TraceCheck check = check_trace(bad);
    CHECK_FALSE(check.ok);
    REQUIRE(check.failing_step);
    CHECK(*check.failing_step == 0);
    const auto nets = bad.nets();
    CHECK_FALSE(check_step(nets[0], bad.steps[0], nets[1]));
}

TEST_CASE("source-sink multiplier")
{
    for (Tokens k : {0, 1, 5, 10}) {
        const Net net = pnc::testing::parse("pl p (" + std::to_string(k) + ")\npl a (2)\npl b (0)\n"
                                            "tr drain p ->\ntr ab a -> b\ntr ba b -> a\n");
        const auto pair = find_source_sink(net);
        REQUIRE(pair);
        ReductionStep step;
        step.kind = RuleKind::L;
        step.constraint = LinearConstraint::at_most("p", static_cast<std::int64_t>(k));
        const Net after = apply_step(net, step);
        CHECK(check_step(net, step, after));
    }
}

TEST_CASE("inconclusive when exploration hits a limit")
{
    const Net net = pnc::testing::load_fixture("big.net");
    ExploreLimits limits;
    limits.max_markings = 100;
    CHECK_THROWS_AS(check_abstraction({net, LinSystem{}, net}, limits), InconclusiveError);
    CHECK_THROWS_AS(check_trace(reduce(net, Strategy::Compact), limits), InconclusiveError);
}
