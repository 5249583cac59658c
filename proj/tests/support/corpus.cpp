#include "corpus.hpp"

#include "pnc/net_io.hpp"

#include <functional>
#include <random>

namespace pnc::testing {

Net parse(const std::string& text)
{
    return parse_net(text);
}

Net load_fixture(const std::string& file)
{
    return read_net_file(std::string(PNC_TEST_DATA) + "/" + file);
}

BigInt brute_nos(unsigned k, unsigned x)
{
    // distributions of x tokens over k slots, counted recursively slot by slot
    std::function<BigInt(unsigned, unsigned)> go = [&](unsigned slots, unsigned left) -> BigInt {
        if (slots == 1)
            return 1;
        BigInt total = 0;
        for (unsigned first = 0; first <= left; ++first)
            total += go(slots - 1, left - first);
        return total;
    };
    return go(k, x);
}

std::vector<CorpusNet> hand_corpus()
{
    std::vector<CorpusNet> out;
    auto add = [&](std::string name, const std::string& text, std::string rules) {
        out.push_back({std::move(name), parse(text), std::move(rules)});
    };

    add("identity_transition", R"(
net identity_transition
pl p (2)
pl q (0)
tr idle p -> p
tr t p -> q
)", "T");

    add("duplicate_transition", R"(
net duplicate_transition
pl p (3)
pl q (0)
tr t1 p -> q
tr t2 p -> q
tr t3 p*2 -> q*2
tr back q -> p
)", "T");

    add("general_transition", R"(
net general_transition
pl p (2)
pl q (0)
pl r (0)
pl s (1)
tr t1 p s -> q s
tr t2 q s -> r s
tr t3 p s -> r s
tr back r -> p
)", "TR");

    add("constant_place", R"(
net constant_place
pl c (3)
pl p (2)
pl q (0)
tr t p c -> q c
tr u q -> p
)", "R");

    add("duplicate_place", R"(
net duplicate_place
pl a (2)
pl b (2)
pl c (0)
tr t a b -> c
tr u c -> a b
)", "R");

    add("general_place", R"(
net general_place
pl x (2)
pl q (0)
pl r (0)
pl s (0)
pl y (0)
tr t1 x -> q s
tr t2 x -> r s
tr t3 q s -> y
tr t4 r s -> y
tr t5 y -> x
)", "R");

    add("weighted_place", R"(
net weighted_place
pl x (2)
pl p (0)
pl q (0)
pl z (1)
pl v (0)
pl w (1)
tr t1 x z -> p q q z
tr t2 p q q z -> x z
tr t3 q w -> q v
tr t4 v -> w
)", "R");

    add("chain", R"(
net chain
pl p (7)
pl q (0)
tr t p -> q
)", "A");

    add("ring3", R"(
net ring3
pl p0 (2)
pl p1 (0)
pl p2 (0)
tr t0 p0 -> p1
tr t1 p1 -> p2
tr t2 p2 -> p0
)", "A");

    add("ring_marked", R"(
net ring_marked
pl p0 (1)
pl p1 (1)
pl p2 (1)
pl p3 (0)
tr t0 p0 -> p1
tr t1 p1 -> p2
tr t2 p2 -> p0
tr t3 p1 p3 -> p3
)", "A");

    add("source_sink", R"(
net source_sink
pl p (3)
pl a (1)
pl b (0)
pl c (1)
tr drain p ->
tr ab a c -> b c
tr ba b c -> a c
)", "L");

    add("fire_once", R"(
net fire_once
pl s (1)
pl a (0)
pl b (0)
tr start s -> a a
tr swap a -> b
tr back b -> a
)", "F");

    add("dead_transition", R"(
net dead_transition
pl p (1)
pl q (0)
pl never (0)
tr t p -> q
tr revive never -> p
)", "D");

    add("fork_join", R"(
net fork_join
pl s (2)
pl a (0)
pl b (0)
pl c (0)
pl d (0)
pl e (0)
tr fork s -> a b
tr ta a -> c
tr tb b -> d
tr join c d -> e
)", "A");

    add("philosophers3", R"(
net philosophers3
pl f0 (1)
pl f1 (1)
pl f2 (1)
pl think0 (1)
pl think1 (1)
pl think2 (1)
pl eat0 (0)
pl eat1 (0)
pl eat2 (0)
tr take0 think0 f0 f1 -> eat0
tr take1 think1 f1 f2 -> eat1
tr take2 think2 f2 f0 -> eat2
tr release0 eat0 -> think0 f0 f1
tr release1 eat1 -> think1 f1 f2
tr release2 eat2 -> think2 f2 f0
)", "R");

    add("producer_consumer", R"(
net producer_consumer
pl ready (1)
pl produced (0)
pl buf (0)
pl free (3)
pl cready (1)
pl consumed (0)
tr produce ready -> produced
tr put produced free -> buf ready
tr get buf cready -> consumed free
tr consume consumed -> cready
)", "R");

    add("weighted_cycle", R"(
net weighted_cycle
pl p (4)
pl q (0)
tr pack p*2 -> q
tr unpack q -> p*2
)", "");

    add("mutex2", R"(
net mutex2
pl idle1 (1)
pl busy1 (0)
pl idle2 (1)
pl busy2 (0)
pl lock (1)
tr enter1 idle1 lock -> busy1
tr exit1 busy1 -> idle1 lock
tr enter2 idle2 lock -> busy2
tr exit2 busy2 -> idle2 lock
)", "");

    add("two_sinks", R"(
net two_sinks
pl p (2)
pl q (5)
pl r (1)
pl s (0)
tr eat_p p ->
tr eat_q q ->
tr rs r -> s
tr sr s -> r
)", "L");

    add("house2", R"(
net house2
pl p1 (2)
tr t1 p1 -> p2
tr t2 p2 -> p3
tr t3 p3 -> p4 p5 p6
tr t4 p5 -> p9 p13
tr t5 p6 -> p7 p8 p12
tr t6 p7 -> p11
tr t7 p11 -> p15
tr t8 p4 p15 -> p16
tr t9 p16 -> p25
tr t10 p8 p9 -> p10
tr t11 p10 p12 p13 -> p14
tr t12 p14 -> p17
tr t13 p17 -> p18 p19 p20
tr t14 p18 -> p21
tr t15 p19 p20 -> p22
tr t16 p22 -> p23 p27
tr t17 p21 p23 -> p26
tr t18 p25 p26 p27 ->
)", "RATL");

    return out;
}

Net random_bounded_net(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    const std::size_t places = pick(3, 6);
    const std::size_t transitions = pick(2, 6);
    NetBuilder builder("random" + std::to_string(seed));
    std::vector<PlaceId> ids;
    for (std::size_t i = 0; i < places; ++i)
        ids.push_back(builder.place("p" + std::to_string(i)));
    std::vector<Tokens> m0(places, 0);
    const std::size_t tokens = pick(2, 5);
    for (std::size_t i = 0; i < tokens; ++i)
        ++m0[pick(0, places - 1)];
    for (std::size_t i = 0; i < places; ++i)
        builder.set_initial(ids[i], m0[i]);
    for (std::size_t i = 0; i < transitions; ++i) {
        const TransId t = builder.add_transition("t" + std::to_string(i));
        const std::size_t inputs = pick(1, 2);
        Weight consumed = 0;
        for (std::size_t k = 0; k < inputs; ++k) {
            const Weight w = pick(0, 4) == 0 ? 2 : 1;
            builder.add_input(t, ids[pick(0, places - 1)], w);
            consumed += w;
        }
        const std::size_t produced = pick(0, 2) == 0 ? pick(0, consumed) : consumed;
        for (std::size_t k = 0; k < produced; ++k)
            builder.add_output(t, ids[pick(0, places - 1)], 1);
    }
    return builder.build();
}

std::vector<CorpusNet> corpus(std::size_t random_count)
{
    std::vector<CorpusNet> out = hand_corpus();
    for (std::size_t i = 0; i < random_count; ++i)
        out.push_back({"random" + std::to_string(i), random_bounded_net(1000 + i), ""});
    return out;
}

}  // namespace pnc::testing
