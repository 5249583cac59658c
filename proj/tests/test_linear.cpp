#include <doctest.h>

#include "pnc/errors.hpp"
#include "pnc/linear.hpp"

#include <random>

using namespace pnc;

namespace {

LinSystem system_of(std::initializer_list<const char*> lines)
{
    LinSystem q;
    for (const char* line : lines)
        q.add(parse_constraint(line));
    return q;
}

/// Counts solutions by trying every point of the box [0, bound]^n.
BigInt box_count(const LinSystem& q, const Valuation& fixed, Tokens bound)
{
    std::vector<Var> free;
    for (const auto& v : q.vars())
        if (!fixed.count(v))
            free.push_back(v);
    BigInt total = 0;
    Valuation e = fixed;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == free.size()) {
            if (is_solution(q, e))
                ++total;
            return;
        }
        for (Tokens x = 0; x <= bound; ++x) {
            e[free[i]] = x;
            go(i + 1);
        }
    };
    go(0);
    return total;
}

}  // namespace

TEST_CASE("constraint syntax")
{
    CHECK(parse_constraint("p19 = p20").to_string() == "p19 = p20");
    CHECK(parse_constraint("a1 = p11 + p7").to_string() == "a1 = p11 + p7");
    CHECK(parse_constraint("2.p2 = a1").to_string() == "2.p2 = a1");
    CHECK(parse_constraint("a17 <= 10").to_string() == "a17 <= 10");
    CHECK(parse_constraint("p9 + p5 = p6 + p8").to_string() == "p9 + p5 = p6 + p8");
    CHECK(parse_constraint("c = 3").to_string() == "c = 3");
    CHECK(parse_constraint("x = y + 2").to_string() == "x = y + 2");
    CHECK_THROWS_AS(parse_constraint("= p"), ParseError);
    CHECK_THROWS_AS(parse_constraint("p = q r"), ParseError);
    CHECK_THROWS_AS(parse_constraint("p"), ParseError);
}

TEST_CASE("canonical form")
{
    const auto c = parse_constraint("2.p + q = q + r + 3");
    REQUIRE(c.coefficients().size() == 2);
    CHECK(c.coefficients()[0] == LinearTerm{2, "p"});
    CHECK(c.coefficients()[1] == LinearTerm{-1, "r"});
    CHECK(c.bound() == 3);
    CHECK(c.equivalent(parse_constraint("2.p = r + 3")));
    CHECK_FALSE(c.equivalent(parse_constraint("2.p <= r + 3")));
}

TEST_CASE("holds")
{
    const auto c = parse_constraint("2.p = a1");
    CHECK(c.holds({{"p", 3}, {"a1", 6}}));
    CHECK_FALSE(c.holds({{"p", 3}, {"a1", 5}}));
    CHECK_THROWS_AS(c.holds({{"p", 3}}), Error);
    CHECK(parse_constraint("a <= 10").holds({{"a", 10}}));
    CHECK_FALSE(parse_constraint("a <= 10").holds({{"a", 11}}));
}

TEST_CASE("enumeration is lexicographic and complete")
{
    const LinSystem q = system_of({"a = x + y", "a <= 2"});
    const auto sols = enumerate_solutions(q, {});
    REQUIRE(sols.size() == 6);
    CHECK(sols.front() == Valuation{{"a", 0}, {"x", 0}, {"y", 0}});
    CHECK(sols[1] == Valuation{{"a", 1}, {"x", 0}, {"y", 1}});
    CHECK(sols.back() == Valuation{{"a", 2}, {"x", 2}, {"y", 0}});
}

TEST_CASE("fixing variables")
{
    const LinSystem q = system_of({"a = x + y + z"});
    CHECK(count_solutions(q, {{"a", 4}}) == 15);
    CHECK(enumerate_solutions(q, {{"a", 1}, {"x", 1}}).size() == 1);
    CHECK(count_solutions(q, {{"a", 1}, {"x", 2}}) == 0);
    CHECK_THROWS_AS(count_solutions(q, {{"nope", 1}}), Error);
}

TEST_CASE("unbounded systems")
{
    const LinSystem q = system_of({"a = x + y"});
    CHECK_THROWS_AS(count_solutions(q, {}), UnboundedError);
    CHECK(count_solutions(q, {}, 3) == box_count(q, {}, 3));
    CHECK(count_solutions(q, {{"a", 3}}) == 4);
}

TEST_CASE("counting agrees with box enumeration on random systems")
{
    std::mt19937_64 rng(7);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const std::vector<Var> names{"a", "b", "c", "d", "e"};
    for (int round = 0; round < 150; ++round) {
        LinSystem q;
        const int rows = pick(1, 3);
        for (int r = 0; r < rows; ++r) {
            std::vector<LinearTerm> lhs, rhs;
            for (const auto& v : names) {
                const int c = pick(-2, 2);
                if (c > 0)
                    lhs.push_back({c, v});
                else if (c < 0)
                    rhs.push_back({-c, v});
            }
            if (lhs.empty())
                lhs.push_back({1, names[pick(0, 4)]});
            const bool eq = pick(0, 1) == 0;
            q.add(LinearConstraint(lhs, eq ? Relation::Eq : Relation::Le, rhs, pick(0, 4)));
        }
        // every variable capped so that the box is an exact oracle
        for (const auto& v : q.vars())
            q.add(LinearConstraint::at_most(v, 4));
        Valuation fixed;
        if (pick(0, 2) == 0)
            fixed[q.vars().front()] = static_cast<Tokens>(pick(0, 3));
        const BigInt expected = box_count(q, fixed, 4);
        CHECK(count_solutions(q, fixed) == expected);
        CHECK(BigInt(enumerate_solutions(q, fixed).size()) == expected);
        BigInt fast = 0;
        for_each_solution(q, fixed, 0, [&](const Valuation& e) {
            CHECK(is_solution(q, e));
            ++fast;
            return true;
        }, SolutionOrder::Fast);
        CHECK(fast == expected);
    }
}

TEST_CASE("early stop")
{
    const LinSystem q = system_of({"a = x + y", "a <= 5"});
    int seen = 0;
    for_each_solution(q, {}, 0, [&](const Valuation&) { return ++seen < 3; });
    CHECK(seen == 3);
}

TEST_CASE("projection and lifting")
{
    const std::set<Valuation> sols{{{"x", 1}, {"y", 0}}, {{"x", 1}, {"y", 2}}, {{"x", 0}, {"y", 2}}};
    const auto px = project(sols, {"x"});
    CHECK(px == std::set<Valuation>{{{"x", 0}}, {{"x", 1}}});

    const auto lifted = lift(px, {"x", "z"}, {{"z", 2}});
    CHECK(lifted.size() == 6);
    CHECK(project(lifted, {"x"}) == px);
    CHECK_THROWS_AS(lift(px, {"x", "z"}, {}), UnboundedError);
}

TEST_CASE("system printing and variables")
{
    const LinSystem q = system_of({"p19 = p20", "a1 = p11 + p7", "a1 <= 3"});
    CHECK(q.vars() == std::vector<Var>{"p19", "p20", "a1", "p11", "p7"});
    CHECK(q.to_string() == "p19 = p20\na1 = p11 + p7\na1 <= 3\n");
}
