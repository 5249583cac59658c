#include <doctest.h>

#include "corpus.hpp"
#include "pnc/errors.hpp"
#include "pnc/net.hpp"

using namespace pnc;
using pnc::testing::parse;

namespace {

Net sequence_net()
{
    return parse(R"(
net seq
pl p (1)
pl q (0)
pl r (0)
tr t1 p -> q
tr t2 q -> r
tr t3 p*2 -> r q
)");
}

}  // namespace

TEST_CASE("firing moves tokens")
{
    const Net net = sequence_net();
    const Marking m0 = net.initial_marking();
    const TransId t1 = net.transition("t1");
    REQUIRE(enabled(net, m0, t1));
    const Marking m1 = fire(net, m0, t1);
    CHECK(m1.get(net.place("p")) == 0);
    CHECK(m1.get(net.place("q")) == 1);
    CHECK_FALSE(enabled(net, m0, net.transition("t2")));
}

TEST_CASE("firing a disabled transition names the blocking place")
{
    const Net net = sequence_net();
    try {
        fire(net, net.initial_marking(), net.transition("t3"));
        FAIL("expected NotEnabledError");
    } catch (const NotEnabledError& e) {
        CHECK(e.transition() == "t3");
        CHECK(e.blocking_place() == "p");
    }
}

TEST_CASE("unknown identifiers are rejected")
{
    const Net net = sequence_net();
    CHECK_THROWS_AS(net.place("nope"), UnknownIdError);
    CHECK_THROWS_AS(net.transition("nope"), UnknownIdError);
    CHECK_FALSE(net.find_place("nope"));
}

TEST_CASE("displacement and hurdle of sequences")
{
    const Net net = sequence_net();
    const PlaceId p = net.place("p"), q = net.place("q"), r = net.place("r");
    const FiringSequence sigma{net.transition("t1"), net.transition("t2")};

    const Displacement d = displacement(net, sigma);
    CHECK(d.get(p) == -1);
    CHECK(d.get(q) == 0);
    CHECK(d.get(r) == 1);

    const Marking h = hurdle(net, sigma);
    CHECK(h == Marking{{p, 1}});
    CHECK(firable(net, h, sigma));

    // the hurdle is minimal: removing any token disables the sequence
    CHECK_FALSE(firable(net, Marking{}, sigma));

    const FiringSequence twice{net.transition("t3"), net.transition("t2")};
    CHECK(hurdle(net, twice) == Marking{{p, 2}});
    CHECK(hurdle(net, FiringSequence{}) == Marking{});
}

TEST_CASE("hurdle agrees with the smallest firable marking on small boxes")
{
    const Net net = sequence_net();
    const std::vector<TransId> ts{net.transition("t1"), net.transition("t2"), net.transition("t3")};
    for (TransId a : ts)
        for (TransId b : ts)
            for (TransId c : ts) {
                const FiringSequence sigma{a, b, c};
                const Marking h = hurdle(net, sigma);
                CHECK(firable(net, h, sigma));
                for (Tokens x = 0; x <= 4; ++x)
                    for (Tokens y = 0; y <= 4; ++y)
                        for (Tokens z = 0; z <= 4; ++z) {
                            Marking m{{net.place("p"), x}, {net.place("q"), y}, {net.place("r"), z}};
                            if (firable(net, m, sigma))
                                CHECK(covers(m, h));
                        }
            }
}

TEST_CASE("sum places")
{
    const Net net = parse(R"(
pl a (3)
pl b (1)
pl s (4)
tr t a -> b
tr u b s -> a s
)");
    const std::vector<PlaceId> parts{net.place("a"), net.place("b")};
    CHECK_FALSE(is_sum_place(net, net.place("s"), parts));

    const Net sum = parse(R"(
pl a (3)
pl b (1)
pl s (4)
tr t a s -> b s
tr u b s -> a s
tr v -> a s
)");
    CHECK(is_sum_place(sum, sum.place("s"), std::vector<PlaceId>{sum.place("a"), sum.place("b")}));
}

TEST_CASE("removing places and transitions keeps declaration order")
{
    const Net net = sequence_net();
    const std::vector<PlaceId> gone{net.place("q")};
    const Net smaller = remove_places(net, gone);
    REQUIRE(smaller.num_places() == 2);
    CHECK(smaller.place_name(smaller.places()[0]) == "p");
    CHECK(smaller.place_name(smaller.places()[1]) == "r");
    CHECK(smaller.num_transitions() == 3);

    const std::vector<TransId> dropped{net.transition("t2")};
    const Net fewer = remove_transitions(net, dropped);
    CHECK(fewer.num_transitions() == 2);
    CHECK(fewer.transition_name(fewer.transitions()[1]) == "t3");
}

TEST_CASE("marking format")
{
    const Net net = sequence_net();
    Marking m{{net.place("p"), 1}, {net.place("r"), 2}};
    CHECK(format_marking(net, m) == "p:1 r:2");
    CHECK(format_marking(net, Marking{}) == "");
}
