#pragma once

#include "pnc/errors.hpp"
#include "pnc/explorer.hpp"
#include "pnc/linear.hpp"
#include "pnc/numeric.hpp"
#include "pnc/polynomial.hpp"
#include "pnc/reduction.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pnc {

/// Ways to put x tokens into k slots: C(x+k-1, k-1). Zero for negative x; k = 0 throws.
BigInt nos(std::uint64_t k, const BigInt& x);

/// Affine expression sum c_i * x_i + c with rational coefficients.
struct LinExpr {
    std::map<std::string, Rational> coeffs;
    Rational constant = 0;

    static LinExpr var(const std::string& name);
    static LinExpr value(const Rational& c);

    LinExpr& operator+=(const LinExpr& other);
    LinExpr& operator-=(const LinExpr& other);
    LinExpr& operator*=(const Rational& c);
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Rational& c) { return a *= c; }
    bool operator==(const LinExpr&) const = default;

    bool uses(const std::string& var) const { return coeffs.count(var) != 0; }
    LinExpr substitute(const std::string& var, const LinExpr& value) const;
    Rational evaluate(const std::map<std::string, BigInt>& env) const;
    Polynomial to_polynomial() const;
    std::string to_string() const;
};

enum class CountKind { Const, Nos, Divides, Product, Sum, Enumerate };

struct CountNode;
/// Immutable algebraic counting term, shared structurally.
using CountTerm = std::shared_ptr<const CountNode>;

struct EnumerateData {
    LinSystem system;
    /// System variable -> expression in the term's variables.
    std::vector<std::pair<Var, LinExpr>> bindings;
};

struct CountNode {
    CountKind kind = CountKind::Const;
    BigInt value;                        // Const
    std::uint64_t k = 0;                 // Nos: slots; Divides: divisor
    LinExpr arg;                         // Nos/Divides argument; Sum upper bound
    std::string bound;                   // Sum variable
    std::vector<CountTerm> children;     // Product factors; Sum body
    std::shared_ptr<const EnumerateData> enumerate;
};

CountTerm count_const(const BigInt& value);
CountTerm count_nos(std::uint64_t k, const LinExpr& arg);
/// 1 when arg is an integer divisible by d, else 0.
CountTerm count_divides(std::uint64_t d, const LinExpr& arg);
CountTerm count_product(std::vector<CountTerm> factors);
/// sum_{bound = 0}^{upper} body. Factors of the body that do not mention `bound`
/// are moved out, and stars-and-bars convolutions are folded into one nos factor.
CountTerm count_sum(const std::string& bound, const LinExpr& upper, const CountTerm& body);
CountTerm count_enumerate(LinSystem system, std::vector<std::pair<Var, LinExpr>> bindings);

bool depends_on(const CountTerm& term, const std::string& var);
std::set<std::string> free_variables(const CountTerm& term);
CountTerm substitute(const CountTerm& term, const std::string& var, const LinExpr& value);

/// Throws Error when a free variable has no value.
BigInt eval(const CountTerm& term, const std::map<std::string, BigInt>& env);

struct PolynomialLimits {
    std::size_t max_terms = 200000;
    std::size_t max_variables = 16;
};
/// Absent for Divides/Enumerate nodes or when a limit is exceeded.
std::optional<Polynomial> to_polynomial(const CountTerm& term, const PolynomialLimits& limits = {});

/// e.g. "sum(a11=0..a13) nos(2,a11)*nos(3,a11)".
std::string to_string(const CountTerm& term);

struct CountTermOptions {
    /// Keep initial markings symbolic: variables named "^p" for each place p of the
    /// initial net with a nonzero initial marking.
    bool parametric = false;
    /// When false every rule step falls back to an enumeration node.
    bool patterns = true;
};

/// The count of original markings is the sum of `term` over the reachable
/// markings of the residual net plus each closed increment term (fire-once steps).
struct CountModel {
    CountTerm term;
    std::vector<CountTerm> increments;
    bool has_fallback = false;
};

CountModel build_count_model(const ReductionTrace& trace, const CountTermOptions& options = {});
inline CountTerm build_count_term(const ReductionTrace& trace, const CountTermOptions& options = {})
{
    return build_count_model(trace, options).term;
}

struct CountOptions {
    Strategy strategy = Strategy::Compact;
    ReductionLimits reduction;
    ExploreLimits explore;
    unsigned jobs = 1;
    /// Also derive the count as a polynomial in the initial marking when the net
    /// is totally reduced.
    bool parametric = true;
    PolynomialLimits polynomial;
};

struct CountReport {
    std::size_t places_before = 0;
    std::size_t places_after = 0;
    std::size_t transitions_before = 0;
    std::size_t transitions_after = 0;
    std::size_t trace_length = 0;
    std::size_t residual_markings = 0;
    std::string term;
    std::optional<Polynomial> polynomial;
    /// Count as a function of the initial marking, variables named after places.
    std::optional<Polynomial> parametric_polynomial;
    BigInt fire_once_increment = 0;
    std::size_t fire_once_steps = 0;
    bool used_fallback = false;
    double wall_seconds = 0;
};

struct CountResult {
    BigInt total;
    CountReport report;
    ReductionTrace trace;
};

class CountLimitError : public ExplorationLimitError {
public:
    CountLimitError(const std::string& what, CountReport report)
        : ExplorationLimitError(what), report_(std::move(report))
    {
    }
    const CountReport& report() const { return report_; }

private:
    CountReport report_;
};

/// Reduces, explores the residual net and sums the per-marking counts.
/// Throws CountLimitError when the residual exploration does not complete.
CountResult count_markings(const Net& net, const CountOptions& options = {});
CountResult count_from_trace(const ReductionTrace& trace, const CountOptions& options = {});

}  // namespace pnc
