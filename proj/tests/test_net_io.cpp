#include <doctest.h>

#include "corpus.hpp"
#include "pnc/errors.hpp"
#include "pnc/net_io.hpp"
#include "pnc/reduction.hpp"

using namespace pnc;

namespace {

std::size_t error_line(const std::string& text)
{
    try {
        parse_net(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("parse the textual format")
{
    const Net net = parse_net(R"(# a comment
net demo
pl p (2)
pl q (0)   # trailing comment
tr t p*2 q -> r
tr u r -> p q
)");
    CHECK(net.name() == "demo");
    CHECK(net.num_places() == 3);
    CHECK(net.num_transitions() == 2);
    CHECK(net.initial(net.place("p")) == 2);
    CHECK(net.initial(net.place("r")) == 0);
    CHECK(net.pre(net.transition("t"), net.place("p")) == 2);
    CHECK(net.post(net.transition("u"), net.place("q")) == 1);
}

TEST_CASE("serialization round-trips")
{
    for (const auto& entry : pnc::testing::corpus(5)) {
        const std::string text = serialize_net(entry.net);
        const Net again = parse_net(text);
        CHECK(serialize_net(again) == text);
        CHECK(again.num_places() == entry.net.num_places());
        CHECK(again.initial_marking() == entry.net.initial_marking());
    }
}

TEST_CASE("serialized form")
{
    const Net net = parse_net("net n\npl a (1)\ntr t a*2 -> b\ntr u b ->\n");
    CHECK(serialize_net(net) == "net n\npl a (1)\npl b (0)\ntr t a*2 -> b\ntr u b ->\n");
}

TEST_CASE("empty input is the empty net")
{
    const Net net = parse_net("", "empty");
    CHECK(net.num_places() == 0);
    CHECK(net.num_transitions() == 0);
}

TEST_CASE("parse errors carry positions")
{
    CHECK(error_line("pl p (1)\ntr t p q\n") == 2);
    CHECK(error_line("pl p (-1)\n") == 1);
    CHECK(error_line("pl p (1)\npl p (2)\n") == 2);
    CHECK(error_line("tr t p -> q\ntr t q -> p\n") == 2);
    CHECK(error_line("pl t (0)\ntr t -> \n") == 2);
    CHECK(error_line("bogus line\n") == 1);
    CHECK(error_line("pl p (1)\n\n\ntr t p*x -> p\n") == 4);

    try {
        parse_net("pl p (1)\ntr t p q\n");
    } catch (const ParseError& e) {
        CHECK(e.column() > 1);
        CHECK(std::string(e.what()).rfind("2:", 0) == 0);
    }
}

TEST_CASE("trace text round-trips through replay")
{
    const Net net = pnc::testing::load_fixture("house2.net");
    const ReductionTrace trace = reduce(net, Strategy::Compact);
    const std::string text = serialize_trace(trace);
    const ReductionTrace again = parse_trace(text, net);
    CHECK(serialize_trace(again) == text);
    CHECK(serialize_net(again.residual) == serialize_net(trace.residual));
}

TEST_CASE("malformed trace lines")
{
    const Net net = pnc::testing::load_fixture("ring3.net");
    CHECK_THROWS_AS(parse_trace("X |- p0 = p1\n", net), ParseError);
    CHECK_THROWS_AS(parse_trace("R |- p0 = = p1\n", net), ParseError);
    CHECK_THROWS_AS(parse_trace("T |- nosuch removed\n", net), Error);
}
