#include "pnc/linear.hpp"

#include "pnc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace pnc {

LinearConstraint::LinearConstraint(std::vector<LinearTerm> lhs, Relation relation,
                                   std::vector<LinearTerm> rhs_terms, std::int64_t rhs_const)
    : lhs_(std::move(lhs)), relation_(relation), rhs_terms_(std::move(rhs_terms)),
      rhs_const_(rhs_const)
{
    if (std::none_of(lhs_.begin(), lhs_.end(), [](const LinearTerm& t) { return t.coeff != 0; }))
        throw Error("linear constraint needs a nonzero coefficient on its left-hand side");
    std::map<Var, std::int64_t> merged;
    for (const auto& t : lhs_)
        merged[t.var] += t.coeff;
    for (const auto& t : rhs_terms_)
        merged[t.var] -= t.coeff;
    for (const auto& [var, c] : merged)
        if (c != 0)
            canonical_.push_back({c, var});
}

std::vector<Var> LinearConstraint::vars() const
{
    std::vector<Var> out;
    for (const auto& t : canonical_)
        out.push_back(t.var);
    return out;
}

bool LinearConstraint::holds(const Valuation& e) const
{
    // 128-bit accumulation: token values may be as large as 10^12 and coefficients grow
    __int128 sum = 0;
    for (const auto& t : canonical_) {
        auto it = e.find(t.var);
        if (it == e.end())
            throw Error("valuation has no value for '" + t.var + "'");
        sum += static_cast<__int128>(t.coeff) * static_cast<__int128>(it->second);
    }
    return relation_ == Relation::Eq ? sum == rhs_const_ : sum <= rhs_const_;
}

namespace {

void print_side(std::ostream& out, const std::vector<LinearTerm>& terms, std::int64_t constant,
                bool print_zero)
{
    bool first = true;
    for (const auto& t : terms) {
        std::int64_t c = t.coeff;
        if (!first)
            out << (c < 0 ? " - " : " + ");
        else if (c < 0)
            out << "-";
        first = false;
        c = c < 0 ? -c : c;
        if (c != 1)
            out << c << ".";
        out << t.var;
    }
    if (constant != 0 || (first && print_zero)) {
        if (!first)
            out << (constant < 0 ? " - " : " + ") << (constant < 0 ? -constant : constant);
        else
            out << constant;
    }
}

}  // namespace

std::string LinearConstraint::to_string() const
{
    std::ostringstream out;
    print_side(out, lhs_, 0, false);
    out << (relation_ == Relation::Eq ? " = " : " <= ");
    print_side(out, rhs_terms_, rhs_const_, true);
    return out.str();
}

bool LinearConstraint::equivalent(const LinearConstraint& other) const
{
    return relation_ == other.relation_ && rhs_const_ == other.rhs_const_ &&
           canonical_ == other.canonical_;
}

namespace {

class ConstraintLexer {
public:
    explicit ConstraintLexer(std::string_view text) : text_(text) {}

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool at_end()
    {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(std::string_view token)
    {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }
    std::size_t column() const { return pos_ + 1; }

    std::int64_t integer()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected an integer");
        try {
            return std::stoll(std::string(text_.substr(start, pos_ - start)));
        } catch (const std::out_of_range&) {
            pos_ = start;
            fail("integer out of range");
        }
    }

    std::string identifier()
    {
        skip_space();
        const std::size_t start = pos_;
        if (pos_ < text_.size() &&
            (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_)
            fail("expected a variable name");
        return std::string(text_.substr(start, pos_ - start));
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(1, column(), what); }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

struct Side {
    std::vector<LinearTerm> terms;
    std::int64_t constant = 0;
};

Side parse_side(ConstraintLexer& lex)
{
    Side side;
    std::int64_t sign = 1;
    if (lex.accept("-"))
        sign = -1;
    for (;;) {
        const char c = lex.peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::int64_t k = lex.integer();
            if (lex.accept(".") || lex.accept("*"))
                side.terms.push_back({sign * k, lex.identifier()});
            else
                side.constant += sign * k;
        } else {
            side.terms.push_back({sign, lex.identifier()});
        }
        if (lex.accept("+"))
            sign = 1;
        else if (lex.accept("-"))
            sign = -1;
        else
            return side;
    }
}

}  // namespace

LinearConstraint parse_constraint(std::string_view text)
{
    ConstraintLexer lex(text);
    Side left = parse_side(lex);
    Relation rel;
    if (lex.accept("<="))
        rel = Relation::Le;
    else if (lex.accept("="))
        rel = Relation::Eq;
    else
        lex.fail("expected '=' or '<='");
    Side right = parse_side(lex);
    if (!lex.at_end())
        lex.fail("unexpected trailing input");
    if (left.terms.empty())
        lex.fail("left-hand side has no variable");
    try {
        return LinearConstraint(std::move(left.terms), rel, std::move(right.terms),
                                right.constant - left.constant);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(1, 1, e.what());
    }
}

LinSystem::LinSystem(std::vector<LinearConstraint> constraints) : constraints_(std::move(constraints)) {}

void LinSystem::add(LinearConstraint c) { constraints_.push_back(std::move(c)); }

void LinSystem::append(const LinSystem& other)
{
    constraints_.insert(constraints_.end(), other.constraints_.begin(), other.constraints_.end());
}

std::vector<Var> LinSystem::vars() const
{
    std::vector<Var> out;
    std::set<Var> seen;
    auto note = [&](const std::vector<LinearTerm>& terms) {
        for (const auto& t : terms)
            if (seen.insert(t.var).second)
                out.push_back(t.var);
    };
    for (const auto& c : constraints_) {
        // variables whose coefficients cancel do not occur in the relation
        std::set<Var> occurring;
        for (const auto& t : c.coefficients())
            occurring.insert(t.var);
        std::vector<LinearTerm> written = c.lhs();
        written.insert(written.end(), c.rhs_terms().begin(), c.rhs_terms().end());
        std::vector<LinearTerm> filtered;
        for (const auto& t : written)
            if (occurring.count(t.var))
                filtered.push_back(t);
        note(filtered);
    }
    return out;
}

std::string LinSystem::to_string() const
{
    std::string out;
    for (const auto& c : constraints_)
        out += c.to_string() + "\n";
    return out;
}

bool is_solution(const LinSystem& q, const Valuation& e)
{
    std::vector<Var> missing;
    for (const auto& v : q.vars())
        if (!e.count(v))
            missing.push_back(v);
    if (!missing.empty()) {
        std::string list;
        for (const auto& v : missing)
            list += (list.empty() ? "" : ", ") + v;
        throw Error("valuation is not total; missing: " + list);
    }
    return std::all_of(q.constraints().begin(), q.constraints().end(),
                       [&](const LinearConstraint& c) { return c.holds(e); });
}

namespace {

constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t clamp_inf(__int128 v)
{
    if (v >= kInfinity)
        return kInfinity;
    if (v <= -kInfinity)
        return -kInfinity;
    return static_cast<std::int64_t>(v);
}

/// A system with fixed variables substituted, compiled to dense rows in search order.
class SearchProblem {
public:
    enum class Order { Declaration, Greedy, LastRowFirst };

    SearchProblem(const LinSystem& q, const Valuation& fixed, Tokens bound, Order order)
        : fixed_(fixed)
    {
        const std::vector<Var> all = q.vars();
        const std::set<Var> all_set(all.begin(), all.end());
        for (const auto& [var, value] : fixed)
            if (!all_set.count(var))
                throw Error("fixed variable '" + var + "' does not occur in the system");

        std::unordered_map<Var, int> index;
        for (const auto& v : all)
            if (!fixed.count(v)) {
                index.emplace(v, static_cast<int>(vars_.size()));
                vars_.push_back(v);
            }

        for (const auto& c : q.constraints()) {
            Row row;
            row.eq = c.relation() == Relation::Eq;
            __int128 rhs = c.bound();
            for (const auto& t : c.coefficients()) {
                if (auto it = fixed.find(t.var); it != fixed.end())
                    rhs -= static_cast<__int128>(t.coeff) * it->second;
                else
                    row.terms.emplace_back(index.at(t.var), t.coeff);
            }
            row.rhs = clamp_inf(rhs);
            if (row.terms.empty()) {
                if (row.eq ? row.rhs != 0 : row.rhs < 0)
                    infeasible_ = true;
                continue;
            }
            rows_.push_back(std::move(row));
        }

        lo_.assign(vars_.size(), 0);
        hi_.assign(vars_.size(), kInfinity);
        propagate();
        if (infeasible_)
            return;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (hi_[i] >= kInfinity) {
                if (bound == 0)
                    throw UnboundedError("unbounded enumeration: no finite bound for '" + vars_[i] + "'");
                hi_[i] = static_cast<std::int64_t>(bound);
                if (lo_[i] > hi_[i])
                    infeasible_ = true;
            }
        }
        reorder(order == Order::Greedy         ? greedy_order()
                : order == Order::LastRowFirst ? last_row_first_order()
                                               : identity_order());
        prepare();
    }

    bool infeasible() const { return infeasible_; }

    BigInt count()
    {
        if (infeasible_)
            return 0;
        memo_.assign(vars_.size() + 1, {});
        residual_.resize(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r)
            residual_[r] = rows_[r].rhs;
        return count_from(0);
    }

    void enumerate(const std::function<bool(const Valuation&)>& visit)
    {
        if (infeasible_)
            return;
        residual_.resize(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r)
            residual_[r] = rows_[r].rhs;
        value_.assign(vars_.size(), 0);
        stop_ = false;
        enumerate_from(0, visit);
    }

private:
    struct Row {
        std::vector<std::pair<int, std::int64_t>> terms;  // (variable position, coefficient)
        std::int64_t rhs = 0;
        bool eq = true;
        // suffix bounds over terms[k..]: minimum and maximum of sum(c * x)
        std::vector<std::int64_t> suffix_min, suffix_max;
    };

    struct Occurrence {
        int row;
        int term;
        std::int64_t coeff;
    };

    struct KeyHash {
        std::size_t operator()(const std::vector<std::int64_t>& key) const
        {
            std::size_t h = key.size();
            for (auto v : key)
                h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };

    void propagate()
    {
        const std::size_t rounds = 8 * (vars_.size() + 2);
        for (std::size_t round = 0; round < rounds && !infeasible_; ++round) {
            bool changed = false;
            for (const auto& row : rows_) {
                changed |= tighten(row.terms, row.rhs, 1);
                if (row.eq)
                    changed |= tighten(row.terms, row.rhs, -1);
            }
            if (!changed)
                break;
        }
    }

    /// sign * sum(c x) <= sign * rhs
    bool tighten(const std::vector<std::pair<int, std::int64_t>>& terms, std::int64_t rhs, int sign)
    {
        __int128 min_sum = 0;
        int infinite = 0;
        std::vector<__int128> mins(terms.size());
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto [v, c0] = terms[k];
            const std::int64_t c = sign * c0;
            if (c > 0) {
                mins[k] = static_cast<__int128>(c) * lo_[v];
            } else if (hi_[v] >= kInfinity) {
                mins[k] = 0;
                ++infinite;
                continue;
            } else {
                mins[k] = static_cast<__int128>(c) * hi_[v];
            }
            min_sum += mins[k];
        }
        bool changed = false;
        const __int128 b = static_cast<__int128>(sign) * rhs;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto [v, c0] = terms[k];
            const std::int64_t c = sign * c0;
            const bool this_infinite = c < 0 && hi_[v] >= kInfinity;
            if (infinite - (this_infinite ? 1 : 0) > 0)
                continue;
            const std::int64_t slack = clamp_inf(b - (min_sum - (this_infinite ? 0 : mins[k])));
            if (c > 0) {
                const std::int64_t cap = floor_div(slack, c);
                if (cap < hi_[v]) {
                    hi_[v] = cap;
                    changed = true;
                }
            } else {
                const std::int64_t floor_value = ceil_div(slack, c);
                if (floor_value > lo_[v]) {
                    lo_[v] = floor_value;
                    changed = true;
                }
            }
            if (lo_[v] > hi_[v]) {
                infeasible_ = true;
                return false;
            }
        }
        return changed;
    }

    std::vector<int> identity_order() const
    {
        std::vector<int> order(vars_.size());
        std::iota(order.begin(), order.end(), 0);
        return order;
    }

    /// First occurrence when reading the rows backwards. Reduction traces define
    /// aggregates late and their parts early, so this assigns aggregates first.
    std::vector<int> last_row_first_order() const
    {
        std::vector<int> order;
        std::vector<bool> seen(vars_.size(), false);
        for (auto row = rows_.rbegin(); row != rows_.rend(); ++row)
            for (const auto& [v, c] : row->terms)
                if (!seen[v]) {
                    seen[v] = true;
                    order.push_back(v);
                }
        for (std::size_t v = 0; v < vars_.size(); ++v)
            if (!seen[v])
                order.push_back(static_cast<int>(v));
        return order;
    }

    /// Picks next the variable sharing most rows with already chosen ones, so that
    /// few rows are partially assigned at any depth and memo keys stay short.
    std::vector<int> greedy_order() const
    {
        const std::size_t n = vars_.size();
        std::vector<std::vector<int>> rows_of(n);
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (const auto& [v, c] : rows_[r].terms)
                rows_of[v].push_back(static_cast<int>(r));
        std::vector<int> remaining(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r)
            remaining[r] = static_cast<int>(rows_[r].terms.size());
        std::vector<bool> touched(rows_.size(), false), chosen(n, false);
        std::vector<int> order;
        for (std::size_t step = 0; step < n; ++step) {
            int best = -1;
            std::tuple<int, int, int> best_score{};
            for (std::size_t v = 0; v < n; ++v) {
                if (chosen[v])
                    continue;
                int closes = 0, open = 0, fresh = 0;
                for (int r : rows_of[v]) {
                    if (remaining[r] == 1)
                        ++closes;
                    if (touched[r])
                        ++open;
                    else
                        ++fresh;
                }
                std::tuple<int, int, int> score{closes, open, -fresh};
                if (best < 0 || score > best_score) {
                    best = static_cast<int>(v);
                    best_score = score;
                }
            }
            chosen[best] = true;
            order.push_back(best);
            for (int r : rows_of[best]) {
                touched[r] = true;
                --remaining[r];
            }
        }
        return order;
    }

    void reorder(const std::vector<int>& order)
    {
        std::vector<int> position(vars_.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            position[order[i]] = static_cast<int>(i);
        std::vector<Var> vars(vars_.size());
        std::vector<std::int64_t> lo(vars_.size()), hi(vars_.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            vars[i] = vars_[order[i]];
            lo[i] = lo_[order[i]];
            hi[i] = hi_[order[i]];
        }
        vars_ = std::move(vars);
        lo_ = std::move(lo);
        hi_ = std::move(hi);
        for (auto& row : rows_) {
            for (auto& term : row.terms)
                term.first = position[term.first];
            std::sort(row.terms.begin(), row.terms.end());
        }
    }

    void prepare()
    {
        occurrences_.assign(vars_.size(), {});
        frontier_.assign(vars_.size() + 1, {});
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            auto& row = rows_[r];
            const std::size_t k = row.terms.size();
            row.suffix_min.assign(k + 1, 0);
            row.suffix_max.assign(k + 1, 0);
            for (std::size_t i = k; i-- > 0;) {
                const auto [v, c] = row.terms[i];
                const __int128 a = static_cast<__int128>(c) * lo_[v];
                const __int128 b = static_cast<__int128>(c) * hi_[v];
                row.suffix_min[i] = clamp_inf(row.suffix_min[i + 1] + std::min(a, b));
                row.suffix_max[i] = clamp_inf(row.suffix_max[i + 1] + std::max(a, b));
                occurrences_[v].push_back({static_cast<int>(r), static_cast<int>(i), c});
            }
            const int first = row.terms.front().first;
            const int last = row.terms.back().first;
            for (int d = first + 1; d <= last; ++d)
                frontier_[d].push_back(static_cast<int>(r));
        }
    }

    /// Feasible value range of the variable at `depth` given the current residuals.
    std::pair<std::int64_t, std::int64_t> range(int depth) const
    {
        std::int64_t lo = lo_[depth], hi = hi_[depth];
        for (const auto& occ : occurrences_[depth]) {
            const Row& row = rows_[occ.row];
            const std::int64_t res = residual_[occ.row];
            const std::int64_t rest_min = row.suffix_min[occ.term + 1];
            const std::int64_t rest_max = row.suffix_max[occ.term + 1];
            // c*x <= res - rest_min, and for equalities c*x >= res - rest_max
            const std::int64_t upper = clamp_inf(static_cast<__int128>(res) - rest_min);
            if (occ.coeff > 0)
                hi = std::min(hi, floor_div(upper, occ.coeff));
            else
                lo = std::max(lo, ceil_div(upper, occ.coeff));
            if (row.eq) {
                const std::int64_t lower = clamp_inf(static_cast<__int128>(res) - rest_max);
                if (occ.coeff > 0)
                    lo = std::max(lo, ceil_div(lower, occ.coeff));
                else
                    hi = std::min(hi, floor_div(lower, occ.coeff));
            }
            if (lo > hi)
                break;
        }
        return {lo, hi};
    }

    void assign(int depth, std::int64_t delta)
    {
        for (const auto& occ : occurrences_[depth])
            residual_[occ.row] -= occ.coeff * delta;
    }

    BigInt count_from(int depth)
    {
        if (depth == static_cast<int>(vars_.size()))
            return 1;
        std::vector<std::int64_t> key;
        key.reserve(frontier_[depth].size());
        for (int r : frontier_[depth])
            key.push_back(residual_[r]);
        auto& memo = memo_[depth];
        if (auto it = memo.find(key); it != memo.end())
            return it->second;

        BigInt total = 0;
        const auto [lo, hi] = range(depth);
        if (lo <= hi) {
            assign(depth, lo);
            for (std::int64_t x = lo;; ++x) {
                total += count_from(depth + 1);
                if (x == hi)
                    break;
                assign(depth, 1);
            }
            assign(depth, -hi);
        }
        memo.emplace(std::move(key), total);
        return total;
    }

    void enumerate_from(int depth, const std::function<bool(const Valuation&)>& visit)
    {
        if (stop_)
            return;
        if (depth == static_cast<int>(vars_.size())) {
            Valuation e = fixed_;
            for (std::size_t i = 0; i < vars_.size(); ++i)
                e[vars_[i]] = static_cast<Tokens>(value_[i]);
            if (!visit(e))
                stop_ = true;
            return;
        }
        const auto [lo, hi] = range(depth);
        if (lo > hi)
            return;
        assign(depth, lo);
        for (std::int64_t x = lo;; ++x) {
            value_[depth] = x;
            enumerate_from(depth + 1, visit);
            if (x == hi || stop_) {
                assign(depth, -x);
                return;
            }
            assign(depth, 1);
        }
    }

    Valuation fixed_;
    std::vector<Var> vars_;
    std::vector<Row> rows_;
    std::vector<std::int64_t> lo_, hi_;
    bool infeasible_ = false;

    std::vector<std::vector<Occurrence>> occurrences_;
    std::vector<std::vector<int>> frontier_;
    std::vector<std::int64_t> residual_;
    std::vector<std::int64_t> value_;
    std::vector<std::unordered_map<std::vector<std::int64_t>, BigInt, KeyHash>> memo_;
    bool stop_ = false;
};

}  // namespace

void for_each_solution(const LinSystem& q, const Valuation& fixed, Tokens bound,
                       const std::function<bool(const Valuation&)>& visit, SolutionOrder order)
{
    SearchProblem problem(q, fixed, bound,
                          order == SolutionOrder::Lexicographic ? SearchProblem::Order::Declaration
                                                                : SearchProblem::Order::LastRowFirst);
    problem.enumerate(visit);
}

std::vector<Valuation> enumerate_solutions(const LinSystem& q, const Valuation& fixed, Tokens bound)
{
    std::vector<Valuation> out;
    for_each_solution(q, fixed, bound, [&](const Valuation& e) {
        out.push_back(e);
        return true;
    });
    return out;
}

BigInt count_solutions(const LinSystem& q, const Valuation& fixed, Tokens bound)
{
    SearchProblem problem(q, fixed, bound, SearchProblem::Order::Greedy);
    return problem.count();
}

std::set<Valuation> project(const std::set<Valuation>& sols, const std::set<Var>& onto)
{
    std::set<Valuation> out;
    for (const auto& e : sols) {
        Valuation r;
        for (const auto& [var, value] : e)
            if (onto.count(var))
                r.emplace(var, value);
        out.insert(std::move(r));
    }
    return out;
}

std::set<Valuation> lift(const std::set<Valuation>& sols, const std::set<Var>& onto,
                         const std::map<Var, Tokens>& bounds)
{
    std::set<Valuation> out;
    for (const auto& e : sols) {
        std::vector<Var> fresh;
        for (const auto& var : onto)
            if (!e.count(var)) {
                if (!bounds.count(var))
                    throw UnboundedError("lift: no bound for new variable '" + var + "'");
                fresh.push_back(var);
            }
        Valuation cur;
        for (const auto& [var, value] : e)
            if (onto.count(var))
                cur.emplace(var, value);
        std::function<void(std::size_t)> extend = [&](std::size_t i) {
            if (i == fresh.size()) {
                out.insert(cur);
                return;
            }
            for (Tokens v = 0; v <= bounds.at(fresh[i]); ++v) {
                cur[fresh[i]] = v;
                extend(i + 1);
            }
            cur.erase(fresh[i]);
        };
        extend(0);
    }
    return out;
}

}  // namespace pnc
