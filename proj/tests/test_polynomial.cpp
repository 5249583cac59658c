#include <doctest.h>

#include "pnc/errors.hpp"
#include "pnc/polynomial.hpp"

using namespace pnc;

namespace {

Polynomial var(const char* name) { return Polynomial::variable(name); }
Polynomial num(long n, long d = 1) { return Polynomial::constant(Rational(n, d)); }

}  // namespace

TEST_CASE("arithmetic and normal form")
{
    const Polynomial x = var("x"), y = var("y");
    const Polynomial p = (x + num(1)) * (x - num(1));
    CHECK(p == x * x - num(1));
    CHECK(p.degree() == 2);
    CHECK((x - x).is_zero());
    CHECK((x - x).variables().empty());
    CHECK((x * y).degree() == 2);
    CHECK((x * y + x).degree_in("y") == 1);
    CHECK((x + y).pow(3).num_terms() == 4);
    CHECK((x + y).pow(0) == num(1));
}

TEST_CASE("printing")
{
    const Polynomial n = var("n");
    const Polynomial a13 = n.pow(4) * Rational(1, 8) + n.pow(3) * Rational(11, 12) + n.pow(2) * Rational(19, 8) +
                           n * Rational(31, 12) + num(1);
    CHECK(a13.to_string() == "1/8 n^4 + 11/12 n^3 + 19/8 n^2 + 31/12 n + 1");
    CHECK((n + num(1)).to_string() == "n + 1");
    CHECK((num(0) - n).to_string() == "-n");
    CHECK(num(0).to_string() == "0");
    CHECK((var("x") * var("y") * num(2) - num(3)).to_string() == "2 x*y - 3");
}

TEST_CASE("evaluation and substitution")
{
    const Polynomial x = var("x"), y = var("y");
    const Polynomial p = x * x * y - x + num(3, 2);
    CHECK(p.evaluate(std::map<std::string, Rational>{{"x", 2}, {"y", 5}}) == Rational(20 - 2) + Rational(3, 2));
    CHECK(p.evaluate(std::map<std::string, BigInt>{{"x", 2}, {"y", 5}}) == Rational(39, 2));
    CHECK_THROWS_AS(p.evaluate(std::map<std::string, BigInt>{{"x", 2}}), Error);
    CHECK(p.substitute("y", x + num(1)) == x * x * x + x * x - x + num(3, 2));
    CHECK(p.rename("y", "z").variables() == std::vector<std::string>{"x", "z"});
    CHECK(p.rename("y", "x") == x * x * x - x + num(3, 2));
}

TEST_CASE("coefficients")
{
    const Polynomial x = var("x"), y = var("y");
    const Polynomial p = x * x * num(3) + x * y - num(2);
    CHECK(p.coefficient({{"x", 2}}) == 3);
    CHECK(p.coefficient({{"x", 1}, {"y", 1}}) == 1);
    CHECK(p.coefficient({}) == -2);
    CHECK(p.coefficient({{"y", 2}}) == 0);
    const auto by_x = p.by_powers_of("x");
    REQUIRE(by_x.size() == 3);
    CHECK(by_x[0] == num(-2));
    CHECK(by_x[1] == y);
    CHECK(by_x[2] == num(3));
    CHECK((x * x - num(1)).univariate_coefficients() == std::vector<Rational>{-1, 0, 1});
}

TEST_CASE("discrete summation matches term-by-term sums")
{
    const Polynomial y = var("y"), u = var("u"), z = var("z");
    const std::vector<Polynomial> bodies{num(1), y, y * y * y, y * z + num(2), (y + num(1)) * (y + num(2)) * num(1, 2),
                                         y.pow(7) - y * num(3)};
    for (const auto& body : bodies) {
        const Polynomial closed = sum_over(body, "y", u);
        CHECK(closed.degree_in("y") == 0);
        for (int n = 0; n <= 12; ++n) {
            Rational direct = 0;
            for (int v = 0; v <= n; ++v)
                direct += body.evaluate(std::map<std::string, Rational>{{"y", v}, {"z", 3}});
            CHECK(closed.evaluate(std::map<std::string, Rational>{{"u", n}, {"z", 3}}) == direct);
        }
    }
}

TEST_CASE("summation with a polynomial upper bound")
{
    const Polynomial y = var("y"), a = var("a"), b = var("b");
    const Polynomial closed = sum_over(y * b, "y", a - b);
    for (int av = 0; av <= 6; ++av)
        for (int bv = 0; bv <= av; ++bv) {
            Rational direct = 0;
            for (int v = 0; v <= av - bv; ++v)
                direct += Rational(v * bv);
            CHECK(closed.evaluate(std::map<std::string, Rational>{{"a", av}, {"b", bv}}) == direct);
        }
}

TEST_CASE("sum of nos(2) times nos(3) is the paper's quartic")
{
    const Polynomial x = var("x");
    const Polynomial nos2 = x + num(1);
    const Polynomial nos3 = (x + num(2)) * (x + num(1)) * num(1, 2);
    const Polynomial a13 = sum_over(nos2 * nos3, "x", var("n"));
    CHECK(a13.to_string() == "1/8 n^4 + 11/12 n^3 + 19/8 n^2 + 31/12 n + 1");
}
