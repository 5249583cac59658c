#include "pnc/polynomial.hpp"

#include "pnc/errors.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace pnc {

Polynomial Polynomial::constant(const Rational& c)
{
    Polynomial p;
    if (c != 0)
        p.terms_.emplace(Exponents{}, c);
    return p;
}

Polynomial Polynomial::variable(const std::string& name)
{
    Polynomial p;
    p.vars_ = {name};
    p.terms_.emplace(Exponents{1}, Rational(1));
    return p;
}

unsigned Polynomial::degree() const
{
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned sum = 0;
        for (unsigned x : e)
            sum += x;
        d = std::max(d, sum);
    }
    return d;
}

unsigned Polynomial::degree_in(const std::string& var) const
{
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var)
        return 0;
    const std::size_t i = static_cast<std::size_t>(it - vars_.begin());
    unsigned d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, e[i]);
    return d;
}

Rational Polynomial::coefficient(const std::map<std::string, unsigned>& monomial) const
{
    Exponents e(vars_.size(), 0);
    for (const auto& [var, k] : monomial) {
        if (k == 0)
            continue;
        auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
        if (it == vars_.end() || *it != var)
            return 0;
        e[static_cast<std::size_t>(it - vars_.begin())] = k;
    }
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Rational> Polynomial::univariate_coefficients() const
{
    if (vars_.size() > 1)
        throw Error("polynomial has more than one variable");
    std::vector<Rational> out(degree() + 1, Rational(0));
    for (const auto& [e, c] : terms_)
        out[e.empty() ? 0 : e[0]] = c;
    return out;
}

Polynomial Polynomial::aligned(const std::vector<std::string>& vars) const
{
    if (vars == vars_)
        return *this;
    std::vector<std::size_t> where(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i)
        where[i] = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), vars_[i]) - vars.begin());
    Polynomial out;
    out.vars_ = vars;
    for (const auto& [e, c] : terms_) {
        Exponents f(vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i)
            f[where[i]] = e[i];
        out.terms_.emplace(std::move(f), c);
    }
    return out;
}

void Polynomial::normalize()
{
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second == 0 ? terms_.erase(it) : std::next(it);
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0)
                used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; }))
        return;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i])
            vars.push_back(vars_[i]);
    std::map<Exponents, Rational> terms;
    for (const auto& [e, c] : terms_) {
        Exponents f;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (used[i])
                f.push_back(e[i]);
        terms.emplace(std::move(f), c);
    }
    vars_ = std::move(vars);
    terms_ = std::move(terms);
}

namespace {

std::vector<std::string> merged(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    if (other.is_zero())
        return *this;
    const auto vars = merged(vars_, other.vars_);
    if (vars != vars_)
        *this = aligned(vars);
    const Polynomial o = other.aligned(vars);
    for (const auto& [e, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted)
            it->second += c;
    }
    normalize();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
    return *this += other * Rational(-1);
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (c == 0) {
        *this = Polynomial();
        return *this;
    }
    for (auto& [e, k] : terms_)
        k *= c;
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other)
{
    if (is_zero() || other.is_zero()) {
        *this = Polynomial();
        return *this;
    }
    const auto vars = merged(vars_, other.vars_);
    const Polynomial a = aligned(vars);
    const Polynomial b = other.aligned(vars);
    Polynomial out;
    out.vars_ = vars;
    Exponents e(vars.size());
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            auto [it, inserted] = out.terms_.emplace(e, ca * cb);
            if (!inserted)
                it->second += ca * cb;
        }
    out.normalize();
    *this = std::move(out);
    return *this;
}

Polynomial Polynomial::pow(unsigned n) const
{
    Polynomial result = constant(1);
    Polynomial base = *this;
    while (n > 0) {
        if (n & 1)
            result *= base;
        n >>= 1;
        if (n > 0)
            base *= base;
    }
    return result;
}

std::vector<Polynomial> Polynomial::by_powers_of(const std::string& var) const
{
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var)
        return {*this};
    const std::size_t i = static_cast<std::size_t>(it - vars_.begin());
    std::vector<Polynomial> out(degree_in(var) + 1);
    for (auto& p : out)
        p.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        f[i] = 0;
        out[e[i]].terms_.emplace(std::move(f), c);
    }
    for (auto& p : out)
        p.normalize();
    return out;
}

Polynomial Polynomial::substitute(const std::string& var, const Polynomial& value) const
{
    const auto parts = by_powers_of(var);
    if (parts.size() == 1 && degree_in(var) == 0)
        return *this;
    // Horner in var
    Polynomial out;
    for (std::size_t j = parts.size(); j-- > 0;) {
        out *= value;
        out += parts[j];
    }
    return out;
}

Polynomial Polynomial::rename(const std::string& from, const std::string& to) const
{
    if (from == to || degree_in(from) == 0)
        return *this;
    return substitute(from, variable(to));
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& at) const
{
    std::vector<Rational> values;
    for (const auto& v : vars_) {
        auto it = at.find(v);
        if (it == at.end())
            throw Error("no value for polynomial variable '" + v + "'");
        values.push_back(it->second);
    }
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k)
                term *= values[i];
        sum += term;
    }
    return sum;
}

Rational Polynomial::evaluate(const std::map<std::string, BigInt>& at) const
{
    std::map<std::string, Rational> r;
    for (const auto& v : vars_) {
        auto it = at.find(v);
        if (it == at.end())
            throw Error("no value for polynomial variable '" + v + "'");
        r.emplace(v, Rational(it->second));
    }
    return evaluate(r);
}

std::string Polynomial::to_string() const
{
    if (terms_.empty())
        return "0";
    std::vector<std::pair<const Exponents*, const Rational*>> order;
    for (const auto& [e, c] : terms_)
        order.emplace_back(&e, &c);
    auto total = [](const Exponents& e) {
        unsigned s = 0;
        for (unsigned x : e)
            s += x;
        return s;
    };
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        const unsigned da = total(*a.first), db = total(*b.first);
        if (da != db)
            return da > db;
        return *a.first > *b.first;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : order) {
        Rational k = *c;
        if (!first)
            out << (k < 0 ? " - " : " + ");
        else if (k < 0)
            out << "-";
        first = false;
        if (k < 0)
            k = -k;
        std::string mono;
        for (std::size_t i = 0; i < e->size(); ++i) {
            if ((*e)[i] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += vars_[i];
            if ((*e)[i] > 1)
                mono += "^" + std::to_string((*e)[i]);
        }
        if (mono.empty())
            out << pnc::to_string(k);
        else if (k == 1)
            out << mono;
        else
            out << pnc::to_string(k) << " " << mono;
    }
    return out.str();
}

namespace {

/// Coefficients (ascending) of S_j(U) = sum_{v=0}^{U} v^j as a polynomial in U.
std::vector<Rational> power_sum(unsigned j)
{
    static std::mutex lock;
    static std::vector<std::vector<Rational>> cache;
    std::lock_guard<std::mutex> guard(lock);
    while (cache.size() <= j) {
        const unsigned n = static_cast<unsigned>(cache.size());
        // Stirling numbers of the second kind S2(n, i)
        std::vector<std::vector<BigInt>> s2(n + 1, std::vector<BigInt>(n + 1, 0));
        s2[0][0] = 1;
        for (unsigned a = 1; a <= n; ++a)
            for (unsigned i = 1; i <= a; ++i)
                s2[a][i] = BigInt(i) * s2[a - 1][i] + s2[a - 1][i - 1];
        // v^n = sum_i S2(n,i) i! C(v,i); sum_{v=0}^{U} C(v,i) = C(U+1, i+1)
        std::vector<Rational> total(n + 2, Rational(0));
        for (unsigned i = 0; i <= n; ++i) {
            if (s2[n][i] == 0)
                continue;
            // prod_{r=0}^{i} (U + 1 - r), ascending coefficients
            std::vector<Rational> prod{Rational(1)};
            for (unsigned r = 0; r <= i; ++r) {
                const Rational shift = Rational(1) - Rational(r);
                std::vector<Rational> next(prod.size() + 1, Rational(0));
                for (std::size_t d = 0; d < prod.size(); ++d) {
                    next[d + 1] += prod[d];
                    next[d] += prod[d] * shift;
                }
                prod = std::move(next);
            }
            const Rational scale = Rational(s2[n][i]) / Rational(i + 1);
            for (std::size_t d = 0; d < prod.size(); ++d)
                total[d] += prod[d] * scale;
        }
        cache.push_back(std::move(total));
    }
    return cache[j];
}

}  // namespace

Polynomial sum_over(const Polynomial& body, const std::string& var, const Polynomial& upper)
{
    const auto parts = body.by_powers_of(var);
    std::vector<Polynomial> upper_powers{Polynomial::constant(1)};
    Polynomial out;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        if (parts[j].is_zero())
            continue;
        const auto sums = power_sum(static_cast<unsigned>(j));
        while (upper_powers.size() < sums.size())
            upper_powers.push_back(upper_powers.back() * upper);
        Polynomial s;
        for (std::size_t d = 0; d < sums.size(); ++d)
            if (sums[d] != 0)
                s += upper_powers[d] * sums[d];
        out += parts[j] * s;
    }
    return out;
}

}  // namespace pnc
