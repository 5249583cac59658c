#include <doctest.h>

#include "corpus.hpp"
#include "pnc/errors.hpp"
#include "pnc/explorer.hpp"

using namespace pnc;
using pnc::testing::parse;

TEST_CASE("ring of three places with two tokens has six markings")
{
    const Net net = pnc::testing::load_fixture("ring3.net");
    const ReachabilitySet r = reachability_set(net);
    CHECK(r.complete);
    CHECK(r.size() == 6);
    CHECK(count_reachable(net) == 6);
    CHECK(r.markings.front() == net.initial_marking());
}

TEST_CASE("markings come in breadth-first order with replayable paths")
{
    const Net net = pnc::testing::load_fixture("house2.net");
    const ReachabilitySet r = reachability_set(net);
    REQUIRE(r.complete);
    CHECK(r.size() == 1501);
    std::size_t previous = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const FiringSequence path = r.path_to(i);
        CHECK(path.size() >= previous);
        previous = path.size();
        Marking m = net.initial_marking();
        for (TransId t : path)
            m = fire(net, m, t);
        CHECK(m == r.markings[i]);
        CHECK(r.find(m) == i);
    }
}

TEST_CASE("chain net has n + 1 markings")
{
    for (Tokens n : {0, 1, 5, 20}) {
        const Net net = parse("pl p (" + std::to_string(n) + ")\npl q (0)\ntr t p -> q\n");
        CHECK(count_reachable(net) == n + 1);
    }
}

TEST_CASE("limits stop the exploration")
{
    const Net unbounded = parse("pl p (1)\ntr t p -> p p\n");
    ExploreLimits limits;
    limits.max_markings = 50;
    const ReachabilitySet r = reachability_set(unbounded, limits);
    CHECK_FALSE(r.complete);
    CHECK(r.size() == 50);
    CHECK_THROWS_AS(count_reachable(unbounded, limits), ExplorationLimitError);

    ExploreLimits tokens;
    tokens.max_token_per_place = 3;
    CHECK_FALSE(reachability_set(unbounded, tokens).complete);
    CHECK(reachability_set(pnc::testing::load_fixture("ring3.net"), tokens).complete);
}

TEST_CASE("marking dump")
{
    const Net net = parse("pl p (1)\npl q (0)\ntr t p -> q\n");
    CHECK(dump_markings(net, reachability_set(net)) == "p:1\nq:1\n");
    const Net none = parse("");
    CHECK(dump_markings(none, reachability_set(none)) == "\n");
}
