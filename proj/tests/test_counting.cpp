#include <doctest.h>

#include "corpus.hpp"
#include "pnc/counting.hpp"
#include "pnc/errors.hpp"
#include "pnc/explorer.hpp"

using namespace pnc;

namespace {

LinExpr v(const char* name) { return LinExpr::var(name); }
LinExpr c(long value) { return LinExpr::value(Rational(value)); }

}  // namespace

TEST_CASE("nos against slot-by-slot counting")
{
    for (unsigned k = 1; k <= 5; ++k)
        for (unsigned x = 0; x <= 12; ++x)
            CHECK(nos(k, x) == pnc::testing::brute_nos(k, x));
    CHECK(nos(3, -1) == 0);
    CHECK_THROWS_AS(nos(0, 1), Error);
}

TEST_CASE("linear expressions")
{
    const LinExpr e = v("a") * Rational(2) - v("b") + c(3);
    CHECK(e.to_string() == "2 a - b + 3");
    CHECK(e.substitute("a", v("b") + c(1)).to_string() == "b + 5");
    CHECK(e.evaluate({{"a", 4}, {"b", 1}}) == 10);
    CHECK((e - e).coeffs.empty());
    CHECK((v("x") * Rational(1, 2)).to_string() == "1/2 x");
}

TEST_CASE("constant folding")
{
    CHECK(to_string(count_nos(3, c(2))) == "6");
    CHECK(to_string(count_nos(1, v("x"))) == "1");
    CHECK(to_string(count_divides(2, c(3))) == "0");
    CHECK(to_string(count_product({count_const(2), count_nos(2, v("x")), count_const(3)})) == "6*nos(2,x)");
    CHECK(to_string(count_product({count_const(0), count_nos(2, v("x"))})) == "0");
    CHECK(to_string(count_sum("y", c(-1), count_const(5))) == "0");
}

TEST_CASE("summation folds stars-and-bars convolutions")
{
    const LinExpr u = v("u"), y = v("y");
    const CountTerm split = count_sum("y", u, count_product({count_nos(2, y), count_nos(3, u - y)}));
    CHECK(to_string(split) == "nos(5,u)");
    const CountTerm hockey = count_sum("y", u, count_nos(3, y));
    CHECK(to_string(hockey) == "nos(4,u)");
    const CountTerm constant = count_sum("y", u, count_nos(2, v("z")));
    CHECK(to_string(constant) == "nos(2,z)*nos(2,u)");
    const CountTerm kept = count_sum("y", u, count_product({count_nos(2, y), count_nos(3, y)}));
    CHECK(to_string(kept) == "sum(y=0..u) nos(2,y)*nos(3,y)");

    for (long n = 0; n <= 8; ++n) {
        BigInt a = 0, b = 0, d = 0;
        for (long k = 0; k <= n; ++k) {
            a += nos(2, k) * nos(3, n - k);
            b += nos(3, k);
            d += nos(2, k) * nos(3, k);
        }
        CHECK(eval(split, {{"u", n}}) == a);
        CHECK(eval(hockey, {{"u", n}}) == b);
        CHECK(eval(kept, {{"u", n}}) == d);
    }
}

TEST_CASE("evaluation conventions")
{
    const CountTerm t = count_product({count_divides(2, v("x")), count_nos(2, v("x") * Rational(1, 2))});
    CHECK(eval(t, {{"x", 4}}) == 3);
    CHECK(eval(t, {{"x", 5}}) == 0);
    CHECK(eval(count_nos(2, v("x") - c(3)), {{"x", 1}}) == 0);
    CHECK_THROWS_AS(eval(count_nos(2, v("x")), {}), Error);
    CHECK(free_variables(count_sum("y", v("u"), count_nos(2, v("y") + v("z")))) == std::set<std::string>{"u", "z"});
}

TEST_CASE("substitution respects bound variables")
{
    const CountTerm t = count_sum("y", v("u"), count_product({count_nos(2, v("y")), count_nos(2, v("y") + v("z"))}));
    const CountTerm s = substitute(t, "z", v("u") + c(1));
    CHECK(eval(s, {{"u", 3}}) == eval(t, {{"u", 3}, {"z", 4}}));
    CHECK_THROWS_AS(substitute(t, "z", v("y")), Error);
    CHECK(substitute(t, "y", c(9)) == t);
}

TEST_CASE("polynomial form")
{
    const CountTerm a13 = count_sum("a11", v("n"), count_product({count_nos(2, v("a11")), count_nos(3, v("a11"))}));
    const auto p = to_polynomial(a13);
    REQUIRE(p);
    CHECK(p->to_string() == "1/8 n^4 + 11/12 n^3 + 19/8 n^2 + 31/12 n + 1");
    CHECK_FALSE(to_polynomial(count_product({count_divides(2, v("x")), count_nos(2, v("x"))})));
    PolynomialLimits tight;
    tight.max_terms = 2;
    CHECK_FALSE(to_polynomial(a13, tight));
}

TEST_CASE("house construction count and polynomial")
{
    const CountResult r = count_markings(pnc::testing::load_fixture("house10.net"));
    CHECK(r.total == 1663565805);
    CHECK(to_scientific(r.total) == "1.66e9");
    CHECK(r.report.places_after == 0);
    CHECK_FALSE(r.report.used_fallback);
    REQUIRE(r.report.parametric_polynomial);
    CHECK(r.report.parametric_polynomial->degree() == 18);
    CHECK(r.report.parametric_polynomial->evaluate(std::map<std::string, BigInt>{{"p1", 1}}) == 66);
    CHECK(r.report.parametric_polynomial->evaluate(std::map<std::string, BigInt>{{"p1", 3}}) == 19406);
}

TEST_CASE("parametric polynomial of the chain net")
{
    const CountResult r = count_markings(pnc::testing::load_fixture("chain.net"));
    CHECK(r.total == 8);
    REQUIRE(r.report.parametric_polynomial);
    CHECK(r.report.parametric_polynomial->to_string() == "p + 1");
}

TEST_CASE("counts agree with exploration across the corpus")
{
    for (const auto& entry : pnc::testing::corpus(20)) {
        const BigInt truth = count_reachable(entry.net);
        CountOptions options;
        const CountResult r = count_markings(entry.net, options);
        CHECK_MESSAGE(r.total == truth, entry.name);

        CountOptions threads;
        threads.jobs = 4;
        CHECK(count_markings(entry.net, threads).total == truth);

        // enumeration fallback for every step gives the same totals
        const CountModel fallback = build_count_model(r.trace, CountTermOptions{false, false});
        const ReachabilitySet residual = reachability_set(r.trace.residual);
        BigInt total = 0;
        for (const auto& m : residual.markings) {
            std::map<std::string, BigInt> env;
            for (PlaceId p : r.trace.residual.places())
                env[r.trace.residual.place_name(p)] = m.get(p);
            total += eval(fallback.term, env);
        }
        for (const auto& inc : fallback.increments)
            total += eval(inc, {});
        CHECK_MESSAGE(total == truth, entry.name);

        if (r.report.parametric_polynomial) {
            std::map<std::string, BigInt> m0;
            for (PlaceId p : entry.net.places())
                m0[entry.net.place_name(p)] = entry.net.initial(p);
            std::map<std::string, BigInt> used;
            for (const auto& name : r.report.parametric_polynomial->variables())
                used[name] = m0.at(name);
            CHECK(r.report.parametric_polynomial->evaluate(used) == Rational(truth));
        }
    }
}

TEST_CASE("fire-once steps are reported")
{
    const CountResult r = count_markings(pnc::testing::load_fixture("fire_once.net"));
    CHECK(r.total == 4);
    CHECK(r.report.fire_once_steps == 1);
    CHECK(r.report.fire_once_increment == 1);
}

TEST_CASE("exploration limits produce a partial report")
{
    CountOptions options;
    options.explore.max_markings = 100;
    try {
        count_markings(pnc::testing::load_fixture("big.net"), options);
        FAIL("expected CountLimitError");
    } catch (const CountLimitError& e) {
        CHECK(e.report().residual_markings == 100);
        CHECK(e.report().places_before == 4);
    }
}
