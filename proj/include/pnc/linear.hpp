#pragma once

#include "pnc/net.hpp"
#include "pnc/numeric.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pnc {

using Var = std::string;
using Valuation = std::map<Var, Tokens>;

enum class Relation { Eq, Le };

struct LinearTerm {
    std::int64_t coeff = 1;
    Var var;
    bool operator==(const LinearTerm&) const = default;
};

/// A linear (in)equality over non-negative integer variables. The written form
/// (lhs, rhs terms, rhs constant) is kept for printing; `coefficients()` and
/// `bound()` give the canonical form  sum(c_i * x_i) <rel> b.
class LinearConstraint {
public:
    LinearConstraint(std::vector<LinearTerm> lhs, Relation relation, std::vector<LinearTerm> rhs_terms,
                     std::int64_t rhs_const);

    static LinearConstraint equality(std::vector<LinearTerm> lhs, std::vector<LinearTerm> rhs,
                                     std::int64_t rhs_const = 0)
    {
        return LinearConstraint(std::move(lhs), Relation::Eq, std::move(rhs), rhs_const);
    }
    static LinearConstraint at_most(Var var, std::int64_t bound)
    {
        return LinearConstraint({{1, std::move(var)}}, Relation::Le, {}, bound);
    }

    const std::vector<LinearTerm>& lhs() const { return lhs_; }
    Relation relation() const { return relation_; }
    const std::vector<LinearTerm>& rhs_terms() const { return rhs_terms_; }
    std::int64_t rhs_const() const { return rhs_const_; }

    /// Sorted by variable, zero coefficients dropped.
    const std::vector<LinearTerm>& coefficients() const { return canonical_; }
    std::int64_t bound() const { return rhs_const_; }

    std::vector<Var> vars() const;
    /// Throws Error when a variable is missing from e.
    bool holds(const Valuation& e) const;
    /// "a1 = p11 + p7", "2.p2 = a1", "a17 <= 10".
    std::string to_string() const;

    /// Same canonical form.
    bool equivalent(const LinearConstraint& other) const;

private:
    std::vector<LinearTerm> lhs_;
    Relation relation_;
    std::vector<LinearTerm> rhs_terms_;
    std::int64_t rhs_const_;
    std::vector<LinearTerm> canonical_;
};

/// Accepts the trace equation syntax. Throws ParseError.
LinearConstraint parse_constraint(std::string_view text);

class LinSystem {
public:
    LinSystem() = default;
    explicit LinSystem(std::vector<LinearConstraint> constraints);

    void add(LinearConstraint c);
    void append(const LinSystem& other);

    const std::vector<LinearConstraint>& constraints() const { return constraints_; }
    /// Variables in order of first occurrence.
    std::vector<Var> vars() const;
    bool empty() const { return constraints_.empty(); }
    std::size_t size() const { return constraints_.size(); }

    std::string to_string() const;

private:
    std::vector<LinearConstraint> constraints_;
};

/// Throws Error listing variables of q missing from e.
bool is_solution(const LinSystem& q, const Valuation& e);

enum class SolutionOrder {
    Lexicographic,
    /// Unspecified order; assigns variables of later constraints first, which
    /// prunes well on systems collected from reduction traces.
    Fast,
};

/// Calls `visit` with every valuation over V(q) that extends `fixed` and solves q,
/// in lexicographic order of V(q) (fixed variables excluded from the order) unless
/// `order` is Fast.
/// `bound` caps variables that have no derived upper bound; with bound == 0 such
/// a variable raises UnboundedError. Returning false from `visit` stops early.
void for_each_solution(const LinSystem& q, const Valuation& fixed, Tokens bound,
                       const std::function<bool(const Valuation&)>& visit,
                       SolutionOrder order = SolutionOrder::Lexicographic);

std::vector<Valuation> enumerate_solutions(const LinSystem& q, const Valuation& fixed, Tokens bound = 0);

/// Number of solutions extending `fixed`; memoised search, exact.
BigInt count_solutions(const LinSystem& q, const Valuation& fixed, Tokens bound = 0);

std::set<Valuation> project(const std::set<Valuation>& sols, const std::set<Var>& onto);

/// Every valuation over `onto` whose projection lies in `sols`. Variables new to
/// a valuation range over 0..bounds[var]; a missing bound raises UnboundedError.
std::set<Valuation> lift(const std::set<Valuation>& sols, const std::set<Var>& onto,
                         const std::map<Var, Tokens>& bounds);

}  // namespace pnc
