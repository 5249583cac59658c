#pragma once

#include "pnc/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace pnc {

/// Multivariate polynomial with exact rational coefficients. Zero coefficients
/// and unused variables are never stored.
class Polynomial {
public:
    using Exponents = std::vector<unsigned>;

    Polynomial() = default;
    static Polynomial constant(const Rational& c);
    static Polynomial variable(const std::string& name);

    const std::vector<std::string>& variables() const { return vars_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return vars_.empty(); }
    unsigned degree() const;
    unsigned degree_in(const std::string& var) const;

    /// Coefficient of the monomial given as var -> exponent (missing vars have exponent 0).
    Rational coefficient(const std::map<std::string, unsigned>& monomial) const;
    /// For a polynomial in at most one variable: coefficients by ascending degree.
    std::vector<Rational> univariate_coefficients() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    bool operator==(const Polynomial& other) const = default;

    Polynomial pow(unsigned n) const;
    Polynomial substitute(const std::string& var, const Polynomial& value) const;
    Polynomial rename(const std::string& from, const std::string& to) const;
    /// c_0, c_1, ... with this = sum c_j * var^j and var absent from every c_j.
    std::vector<Polynomial> by_powers_of(const std::string& var) const;

    /// Throws Error when a variable has no value.
    Rational evaluate(const std::map<std::string, Rational>& at) const;
    Rational evaluate(const std::map<std::string, BigInt>& at) const;

    /// Descending degree, e.g. "1/8 n^4 + 11/12 n^3 + 19/8 n^2 + 31/12 n + 1".
    std::string to_string() const;

private:
    Polynomial aligned(const std::vector<std::string>& vars) const;
    void normalize();

    std::vector<std::string> vars_;
    std::map<Exponents, Rational> terms_;
};

/// sum_{var = 0}^{upper} body, as a polynomial (upper may itself be a polynomial).
Polynomial sum_over(const Polynomial& body, const std::string& var, const Polynomial& upper);

}  // namespace pnc
