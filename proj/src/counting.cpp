#include "pnc/counting.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <thread>

namespace pnc {

BigInt nos(std::uint64_t k, const BigInt& x)
{
    if (k == 0)
        throw Error("nos: the number of slots must be positive");
    if (x < 0)
        return 0;
    return binomial(x + BigInt(k - 1), k - 1);
}

// ---- LinExpr -----------------------------------------------------------------

LinExpr LinExpr::var(const std::string& name)
{
    LinExpr e;
    e.coeffs[name] = 1;
    return e;
}

LinExpr LinExpr::value(const Rational& c)
{
    LinExpr e;
    e.constant = c;
    return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& other)
{
    for (const auto& [v, c] : other.coeffs) {
        Rational& mine = coeffs[v];
        mine += c;
        if (mine == 0)
            coeffs.erase(v);
    }
    constant += other.constant;
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other)
{
    return *this += other * Rational(-1);
}

LinExpr& LinExpr::operator*=(const Rational& c)
{
    if (c == 0) {
        coeffs.clear();
        constant = 0;
        return *this;
    }
    for (auto& [v, k] : coeffs)
        k *= c;
    constant *= c;
    return *this;
}

LinExpr LinExpr::substitute(const std::string& var, const LinExpr& value) const
{
    auto it = coeffs.find(var);
    if (it == coeffs.end())
        return *this;
    LinExpr out = *this;
    const Rational c = it->second;
    out.coeffs.erase(var);
    out += value * c;
    return out;
}

Rational LinExpr::evaluate(const std::map<std::string, BigInt>& env) const
{
    Rational sum = constant;
    for (const auto& [v, c] : coeffs) {
        auto it = env.find(v);
        if (it == env.end())
            throw Error("no value for variable '" + v + "'");
        sum += c * Rational(it->second);
    }
    return sum;
}

Polynomial LinExpr::to_polynomial() const
{
    Polynomial p = Polynomial::constant(constant);
    for (const auto& [v, c] : coeffs)
        p += Polynomial::variable(v) * c;
    return p;
}

std::string LinExpr::to_string() const
{
    std::ostringstream out;
    bool first = true;
    for (const auto& [v, c0] : coeffs) {
        Rational c = c0;
        if (!first)
            out << (c < 0 ? " - " : " + ");
        else if (c < 0)
            out << "-";
        first = false;
        if (c < 0)
            c = -c;
        if (c != 1)
            out << pnc::to_string(c) << " ";
        out << v;
    }
    if (first)
        out << pnc::to_string(constant);
    else if (constant != 0)
        out << (constant < 0 ? " - " : " + ") << pnc::to_string(constant < 0 ? Rational(-constant) : constant);
    return out.str();
}

// ---- term construction -------------------------------------------------------

namespace {

std::shared_ptr<CountNode> node(CountKind kind)
{
    auto n = std::make_shared<CountNode>();
    n->kind = kind;
    return n;
}

std::optional<BigInt> integer_value(const Rational& r)
{
    if (!is_integer(r))
        return std::nullopt;
    return boost::multiprecision::numerator(r);
}

}  // namespace

CountTerm count_const(const BigInt& value)
{
    auto n = node(CountKind::Const);
    n->value = value;
    return n;
}

CountTerm count_nos(std::uint64_t k, const LinExpr& arg)
{
    if (k == 0)
        throw Error("nos: the number of slots must be positive");
    if (arg.coeffs.empty()) {
        auto x = integer_value(arg.constant);
        return count_const(x ? nos(k, *x) : BigInt(0));
    }
    if (k == 1)
        return count_const(1);
    auto n = node(CountKind::Nos);
    n->k = k;
    n->arg = arg;
    return n;
}

CountTerm count_divides(std::uint64_t d, const LinExpr& arg)
{
    if (d == 0)
        throw Error("divisibility test by zero");
    if (d == 1 && arg.coeffs.empty())
        return count_const(integer_value(arg.constant) ? 1 : 0);
    if (arg.coeffs.empty()) {
        auto x = integer_value(arg.constant);
        return count_const(x && *x % d == 0 ? 1 : 0);
    }
    auto n = node(CountKind::Divides);
    n->k = d;
    n->arg = arg;
    return n;
}

CountTerm count_product(std::vector<CountTerm> factors)
{
    BigInt scale = 1;
    std::vector<CountTerm> flat;
    std::vector<CountTerm> stack(factors.rbegin(), factors.rend());
    while (!stack.empty()) {
        CountTerm f = stack.back();
        stack.pop_back();
        if (f->kind == CountKind::Product) {
            for (auto it = f->children.rbegin(); it != f->children.rend(); ++it)
                stack.push_back(*it);
        } else if (f->kind == CountKind::Const) {
            scale *= f->value;
        } else {
            flat.push_back(f);
        }
    }
    if (scale == 0)
        return count_const(0);
    if (scale != 1)
        flat.insert(flat.begin(), count_const(scale));
    if (flat.empty())
        return count_const(1);
    if (flat.size() == 1)
        return flat[0];
    auto n = node(CountKind::Product);
    n->children = std::move(flat);
    return n;
}

bool depends_on(const CountTerm& term, const std::string& var)
{
    switch (term->kind) {
    case CountKind::Const:
        return false;
    case CountKind::Nos:
    case CountKind::Divides:
        return term->arg.uses(var);
    case CountKind::Product:
        return std::any_of(term->children.begin(), term->children.end(),
                           [&](const CountTerm& c) { return depends_on(c, var); });
    case CountKind::Sum:
        return term->arg.uses(var) || (term->bound != var && depends_on(term->children[0], var));
    case CountKind::Enumerate:
        return std::any_of(term->enumerate->bindings.begin(), term->enumerate->bindings.end(),
                           [&](const auto& b) { return b.second.uses(var); });
    }
    return false;
}

namespace {

void collect_free(const CountTerm& term, std::set<std::string>& bound, std::set<std::string>& out)
{
    auto note = [&](const LinExpr& e) {
        for (const auto& [v, c] : e.coeffs)
            if (!bound.count(v))
                out.insert(v);
    };
    switch (term->kind) {
    case CountKind::Const:
        return;
    case CountKind::Nos:
    case CountKind::Divides:
        note(term->arg);
        return;
    case CountKind::Product:
        for (const auto& c : term->children)
            collect_free(c, bound, out);
        return;
    case CountKind::Sum: {
        note(term->arg);
        const bool fresh = bound.insert(term->bound).second;
        collect_free(term->children[0], bound, out);
        if (fresh)
            bound.erase(term->bound);
        return;
    }
    case CountKind::Enumerate:
        for (const auto& [v, e] : term->enumerate->bindings)
            note(e);
        return;
    }
}

}  // namespace

std::set<std::string> free_variables(const CountTerm& term)
{
    std::set<std::string> bound, out;
    collect_free(term, bound, out);
    return out;
}

CountTerm count_sum(const std::string& bound, const LinExpr& upper, const CountTerm& body)
{
    if (upper.uses(bound))
        throw Error("summation bound refers to its own variable '" + bound + "'");
    if (upper.coeffs.empty()) {
        auto u = integer_value(upper.constant);
        if (!u || *u < 0)
            return count_const(0);
    }
    std::vector<CountTerm> factors =
        body->kind == CountKind::Product ? body->children : std::vector<CountTerm>{body};
    std::vector<CountTerm> outside, inside;
    for (const auto& f : factors)
        (depends_on(f, bound) ? inside : outside).push_back(f);

    const LinExpr y = LinExpr::var(bound);
    const LinExpr rest = upper - y;
    auto is_nos_of = [&](const CountTerm& f, const LinExpr& e) { return f->kind == CountKind::Nos && f->arg == e; };

    CountTerm summed;
    if (inside.empty()) {
        // sum of 1 over 0..U
        summed = count_nos(2, upper);
    } else if (inside.size() == 1 && (is_nos_of(inside[0], y) || is_nos_of(inside[0], rest))) {
        // hockey stick: sum_{y<=U} nos(k, y) = nos(k+1, U)
        summed = count_nos(inside[0]->k + 1, upper);
    } else if (inside.size() == 2 &&
               ((is_nos_of(inside[0], y) && is_nos_of(inside[1], rest)) ||
                (is_nos_of(inside[0], rest) && is_nos_of(inside[1], y)))) {
        // splitting U tokens between k1 and k2 slots
        summed = count_nos(inside[0]->k + inside[1]->k, upper);
    } else {
        auto n = node(CountKind::Sum);
        n->bound = bound;
        n->arg = upper;
        n->children = {count_product(inside)};
        summed = n;
    }
    outside.push_back(summed);
    return count_product(std::move(outside));
}

CountTerm count_enumerate(LinSystem system, std::vector<std::pair<Var, LinExpr>> bindings)
{
    auto data = std::make_shared<EnumerateData>();
    const auto vars = system.vars();
    const std::set<Var> in_system(vars.begin(), vars.end());
    for (auto& b : bindings)
        if (in_system.count(b.first))
            data->bindings.push_back(std::move(b));
    data->system = std::move(system);
    auto n = node(CountKind::Enumerate);
    n->enumerate = std::move(data);
    return n;
}

CountTerm substitute(const CountTerm& term, const std::string& var, const LinExpr& value)
{
    switch (term->kind) {
    case CountKind::Const:
        return term;
    case CountKind::Nos:
        return term->arg.uses(var) ? count_nos(term->k, term->arg.substitute(var, value)) : term;
    case CountKind::Divides:
        return term->arg.uses(var) ? count_divides(term->k, term->arg.substitute(var, value)) : term;
    case CountKind::Product: {
        if (!depends_on(term, var))
            return term;
        std::vector<CountTerm> factors;
        for (const auto& c : term->children)
            factors.push_back(substitute(c, var, value));
        return count_product(std::move(factors));
    }
    case CountKind::Sum: {
        if (!depends_on(term, var))
            return term;
        if (value.uses(term->bound))
            throw Error("substitution would capture summation variable '" + term->bound + "'");
        const LinExpr upper = term->arg.substitute(var, value);
        const CountTerm body = term->bound == var ? term->children[0] : substitute(term->children[0], var, value);
        return count_sum(term->bound, upper, body);
    }
    case CountKind::Enumerate: {
        if (!depends_on(term, var))
            return term;
        auto bindings = term->enumerate->bindings;
        for (auto& b : bindings)
            b.second = b.second.substitute(var, value);
        auto n = node(CountKind::Enumerate);
        auto data = std::make_shared<EnumerateData>(*term->enumerate);
        data->bindings = std::move(bindings);
        n->enumerate = std::move(data);
        return n;
    }
    }
    return term;
}

// ---- evaluation --------------------------------------------------------------

namespace {

BigInt eval_in(const CountTerm& term, std::map<std::string, BigInt>& env)
{
    switch (term->kind) {
    case CountKind::Const:
        return term->value;
    case CountKind::Nos: {
        auto x = integer_value(term->arg.evaluate(env));
        return x ? nos(term->k, *x) : BigInt(0);
    }
    case CountKind::Divides: {
        auto x = integer_value(term->arg.evaluate(env));
        return x && *x % term->k == 0 ? 1 : 0;
    }
    case CountKind::Product: {
        // indicators first so that nothing is evaluated off its domain
        for (const auto& c : term->children)
            if (c->kind == CountKind::Divides && eval_in(c, env) == 0)
                return 0;
        BigInt product = 1;
        for (const auto& c : term->children) {
            if (c->kind == CountKind::Divides)
                continue;
            product *= eval_in(c, env);
            if (product == 0)
                return 0;
        }
        return product;
    }
    case CountKind::Sum: {
        auto u = integer_value(term->arg.evaluate(env));
        if (!u || *u < 0)
            return 0;
        auto saved = env.find(term->bound) != env.end() ? std::optional<BigInt>(env[term->bound]) : std::nullopt;
        BigInt total = 0;
        for (BigInt v = 0; v <= *u; ++v) {
            env[term->bound] = v;
            total += eval_in(term->children[0], env);
        }
        if (saved)
            env[term->bound] = *saved;
        else
            env.erase(term->bound);
        return total;
    }
    case CountKind::Enumerate: {
        Valuation fixed;
        for (const auto& [var, e] : term->enumerate->bindings) {
            auto x = integer_value(e.evaluate(env));
            if (!x || *x < 0)
                return 0;
            fixed[var] = static_cast<Tokens>(*x);
        }
        return count_solutions(term->enumerate->system, fixed);
    }
    }
    return 0;
}

class TooLarge {};

Polynomial poly_in(const CountTerm& term, const PolynomialLimits& limits)
{
    auto check = [&](Polynomial p) {
        if (p.num_terms() > limits.max_terms || p.variables().size() > limits.max_variables)
            throw TooLarge{};
        return p;
    };
    switch (term->kind) {
    case CountKind::Const:
        return Polynomial::constant(Rational(term->value));
    case CountKind::Nos: {
        const Polynomial x = term->arg.to_polynomial();
        Polynomial p = Polynomial::constant(1);
        BigInt factorial = 1;
        for (std::uint64_t i = 1; i < term->k; ++i) {
            p = check(p * (x + Polynomial::constant(Rational(BigInt(i)))));
            factorial *= i;
        }
        return p * Rational(BigInt(1), factorial);
    }
    case CountKind::Product: {
        Polynomial p = Polynomial::constant(1);
        for (const auto& c : term->children)
            p = check(p * poly_in(c, limits));
        return p;
    }
    case CountKind::Sum:
        return check(sum_over(poly_in(term->children[0], limits), term->bound, term->arg.to_polynomial()));
    case CountKind::Divides:
    case CountKind::Enumerate:
        throw TooLarge{};
    }
    throw TooLarge{};
}

}  // namespace

BigInt eval(const CountTerm& term, const std::map<std::string, BigInt>& env)
{
    std::map<std::string, BigInt> scratch = env;
    return eval_in(term, scratch);
}

std::optional<Polynomial> to_polynomial(const CountTerm& term, const PolynomialLimits& limits)
{
    try {
        return poly_in(term, limits);
    } catch (const TooLarge&) {
        return std::nullopt;
    }
}

std::string to_string(const CountTerm& term)
{
    switch (term->kind) {
    case CountKind::Const:
        return pnc::to_string(term->value);
    case CountKind::Nos:
        return "nos(" + std::to_string(term->k) + "," + term->arg.to_string() + ")";
    case CountKind::Divides:
        return "[" + std::to_string(term->k) + " | " + term->arg.to_string() + "]";
    case CountKind::Product: {
        std::string out;
        for (const auto& c : term->children) {
            if (!out.empty())
                out += "*";
            out += c->kind == CountKind::Sum ? "(" + to_string(c) + ")" : to_string(c);
        }
        return out;
    }
    case CountKind::Sum:
        return "sum(" + term->bound + "=0.." + term->arg.to_string() + ") " + to_string(term->children[0]);
    case CountKind::Enumerate: {
        std::string out = "enumerate(" + std::to_string(term->enumerate->system.size()) + " constraints";
        for (const auto& [v, e] : term->enumerate->bindings)
            out += "; " + v + "=" + e.to_string();
        return out + ")";
    }
    }
    return "?";
}

// ---- from traces -------------------------------------------------------------

namespace {

std::string param_name(const std::string& place) { return "^" + place; }

class ModelBuilder {
public:
    ModelBuilder(const ReductionTrace& trace, const CountTermOptions& options)
        : trace_(trace), options_(options), nets_(trace.nets())
    {
        for (PlaceId p : trace.initial.places()) {
            const std::string& name = trace.initial.place_name(p);
            if (options.parametric && trace.initial.initial(p) != 0)
                m0_[name] = LinExpr::var(param_name(name));
            else
                m0_[name] = LinExpr::value(Rational(BigInt(trace.initial.initial(p))));
        }
    }

    CountModel run()
    {
        term_ = count_const(1);
        for (std::size_t j = 0; j < trace_.steps.size(); ++j) {
            const ReductionStep& step = trace_.steps[j];
            const Net& before = nets_[j];
            // fire-once only adds an increment, whatever the shape of the term
            if (step.kind == RuleKind::F)
                fire_once(step, before);
            else if (!options_.patterns || !apply(step, before))
                fallback(j);
        }
        return CountModel{term_, increments_, fallback_};
    }

private:
    bool apply(const ReductionStep& step, const Net& before)
    {
        switch (step.kind) {
        case RuleKind::T:
        case RuleKind::D:
            return true;
        case RuleKind::F:
            return false;
        case RuleKind::R:
            return redundant_place(step, before);
        case RuleKind::A:
            return agglomeration(step, before);
        case RuleKind::L:
            return source_sink(step, before);
        }
        return false;
    }

    void fire_once(const ReductionStep& step, const Net& before)
    {
        CountTerm closed = term_;
        for (PlaceId p : before.places())
            closed = substitute(closed, before.place_name(p), m0_.at(before.place_name(p)));
        increments_.push_back(closed);
        const TransId t = before.transition(step.removed_transitions.at(0));
        for (PlaceId p : before.places()) {
            const std::int64_t d = static_cast<std::int64_t>(before.post(t, p)) -
                                   static_cast<std::int64_t>(before.pre(t, p));
            if (d != 0)
                m0_[before.place_name(p)] += LinExpr::value(Rational(d));
        }
        return;
    }

    bool redundant_place(const ReductionStep& step, const Net& before)
    {
        const auto& c = step.constraint;
        if (!c || c->relation() != Relation::Eq || c->lhs().size() != 1 || c->bound() < 0)
            return false;
        const std::string p = c->lhs()[0].var;
        std::int64_t vp = 0;
        LinExpr sum;
        for (const auto& term : c->coefficients()) {
            if (!before.find_place(term.var))
                return false;
            if (term.var == p)
                vp = term.coeff;
            else if (term.coeff < 0)
                sum += LinExpr::var(term.var) * Rational(-term.coeff);
            else
                return false;
        }
        if (vp <= 0)
            return false;
        LinExpr offset = LinExpr::value(Rational(c->bound()));
        if (options_.parametric) {
            offset = m0_.at(p) * Rational(vp);
            for (const auto& [q, k] : sum.coeffs)
                offset -= m0_.at(q) * k;
        }
        const LinExpr numerator = sum + offset;
        term_ = substitute(term_, p, numerator * Rational(BigInt(1), BigInt(vp)));
        if (vp > 1)
            term_ = count_product({count_divides(static_cast<std::uint64_t>(vp), numerator), term_});
        m0_.erase(p);
        return true;
    }

    bool agglomeration(const ReductionStep& step, const Net& before)
    {
        if (!step.introduced_place || step.removed_places.empty())
            return false;
        const std::string a = *step.introduced_place;
        const auto& c = step.constraint;
        if (!c || c->relation() != Relation::Eq || c->bound() != 0)
            return false;
        for (const auto& term : c->coefficients()) {
            const bool part = std::find(step.removed_places.begin(), step.removed_places.end(), term.var) !=
                              step.removed_places.end();
            if (term.var == a ? term.coeff != 1 : !part || term.coeff != -1)
                return false;
        }
        if (c->coefficients().size() != step.removed_places.size() + 1)
            return false;

        std::vector<std::string> occurring;
        std::size_t free_slots = 0;
        LinExpr m0a;
        for (const auto& q : step.removed_places) {
            if (!before.find_place(q))
                return false;
            if (depends_on(term_, q))
                occurring.push_back(q);
            else
                ++free_slots;
            m0a += m0_.at(q);
            m0_.erase(q);
        }
        m0_[a] = m0a;

        const LinExpr av = LinExpr::var(a);
        if (occurring.empty()) {
            term_ = count_product({term_, count_nos(step.removed_places.size(), av)});
            return true;
        }
        // parts that the term mentions become summation variables; the others
        // share what is left over
        std::vector<std::string> summed = occurring;
        CountTerm body = term_;
        LinExpr used;
        for (const auto& q : occurring)
            used += LinExpr::var(q);
        if (free_slots > 0) {
            body = count_product({body, count_nos(free_slots, av - used)});
        } else {
            const std::string last = summed.back();
            summed.pop_back();
            LinExpr others;
            for (const auto& q : summed)
                others += LinExpr::var(q);
            body = substitute(body, last, av - others);
        }
        // upper bound of the i-th sum: a minus the earlier summation variables
        for (std::size_t i = summed.size(); i-- > 0;) {
            LinExpr upper = av;
            for (std::size_t k = 0; k < i; ++k)
                upper -= LinExpr::var(summed[k]);
            body = count_sum(summed[i], upper, body);
        }
        term_ = body;
        return true;
    }

    bool source_sink(const ReductionStep& step, const Net& before)
    {
        const auto& c = step.constraint;
        if (!c || c->relation() != Relation::Le || c->coefficients().size() != 1 ||
            c->coefficients()[0].coeff != 1 || c->bound() < 0)
            return false;
        const std::string p = c->coefficients()[0].var;
        if (!before.find_place(p))
            return false;
        const LinExpr k = options_.parametric ? m0_.at(p) : LinExpr::value(Rational(c->bound()));
        term_ = count_sum(p, k, term_);
        m0_.erase(p);
        return true;
    }

    void fallback(std::size_t j)
    {
        fallback_ = true;
        const Net& after = nets_[j + 1];
        std::vector<std::pair<Var, LinExpr>> bindings;
        for (PlaceId p : after.places())
            bindings.emplace_back(after.place_name(p), LinExpr::var(after.place_name(p)));
        term_ = count_enumerate(trace_.system_prefix(j + 1), std::move(bindings));
        // the enumeration node stands for all steps so far; keep m0 bookkeeping in sync
        const ReductionStep& step = trace_.steps[j];
        for (const auto& q : step.removed_places)
            m0_.erase(q);
        if (step.introduced_place)
            m0_[*step.introduced_place] =
                LinExpr::value(Rational(BigInt(after.initial(after.place(*step.introduced_place)))));
        if (step.kind == RuleKind::F)
            for (PlaceId p : after.places())
                m0_[after.place_name(p)] = LinExpr::value(Rational(BigInt(after.initial(p))));
    }

    const ReductionTrace& trace_;
    CountTermOptions options_;
    std::vector<Net> nets_;
    std::map<std::string, LinExpr> m0_;
    CountTerm term_;
    std::vector<CountTerm> increments_;
    bool fallback_ = false;
};

}  // namespace

CountModel build_count_model(const ReductionTrace& trace, const CountTermOptions& options)
{
    return ModelBuilder(trace, options).run();
}

// ---- totals ------------------------------------------------------------------

namespace {

BigInt as_count(const Rational& r)
{
    if (!is_integer(r) || r < 0)
        throw Error("internal: count polynomial gave " + to_string(r));
    return boost::multiprecision::numerator(r);
}

}  // namespace

CountResult count_from_trace(const ReductionTrace& trace, const CountOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    CountReport report;
    report.places_before = trace.initial.num_places();
    report.transitions_before = trace.initial.num_transitions();
    report.places_after = trace.residual.num_places();
    report.transitions_after = trace.residual.num_transitions();
    report.trace_length = trace.steps.size();

    const CountModel model = build_count_model(trace);
    report.term = to_string(model.term);
    report.used_fallback = model.has_fallback;
    report.fire_once_steps = model.increments.size();
    for (const auto& inc : model.increments)
        report.fire_once_increment += eval(inc, {});

    const std::set<std::string> vars = free_variables(model.term);
    if (vars.size() <= options.polynomial.max_variables)
        report.polynomial = to_polynomial(model.term, options.polynomial);

    if (options.parametric && trace.residual.num_places() == 0) {
        const CountModel pm = build_count_model(trace, CountTermOptions{true, true});
        if (!pm.has_fallback) {
            std::optional<Polynomial> total = to_polynomial(pm.term, options.polynomial);
            for (const auto& inc : pm.increments) {
                if (!total)
                    break;
                auto p = to_polynomial(inc, options.polynomial);
                if (p)
                    *total += *p;
                else
                    total.reset();
            }
            if (total) {
                for (const auto& v : std::vector<std::string>(total->variables()))
                    *total = total->rename(v, v.substr(1));
                report.parametric_polynomial = std::move(total);
            }
        }
    }

    const ReachabilitySet rs = reachability_set(trace.residual, options.explore);
    report.residual_markings = rs.size();
    if (!rs.complete) {
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        throw CountLimitError("exploration of the residual net stopped after " + std::to_string(rs.size()) +
                                  " markings",
                              report);
    }

    const auto places = trace.residual.places();
    auto count_at = [&](const Marking& m) {
        std::map<std::string, BigInt> env;
        for (PlaceId p : places)
            env.emplace(trace.residual.place_name(p), BigInt(m.get(p)));
        if (report.polynomial)
            return as_count(report.polynomial->evaluate(env));
        return eval(model.term, env);
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(rs.size())));
    std::vector<BigInt> partial(jobs, 0);
    if (jobs == 1) {
        for (const auto& m : rs.markings)
            partial[0] += count_at(m);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(jobs);
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < rs.size(); i += jobs)
                        partial[w] += count_at(rs.markings[i]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : workers)
            t.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }
    CountResult result{0, std::move(report), trace};
    for (const auto& p : partial)
        result.total += p;
    result.total += result.report.fire_once_increment;
    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

CountResult count_markings(const Net& net, const CountOptions& options)
{
    return count_from_trace(reduce(net, options.strategy, options.reduction), options);
}

}  // namespace pnc
