#include "pnc/reduction.hpp"

#include "pnc/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

namespace pnc {

char rule_letter(RuleKind kind)
{
    switch (kind) {
    case RuleKind::T: return 'T';
    case RuleKind::R: return 'R';
    case RuleKind::A: return 'A';
    case RuleKind::L: return 'L';
    case RuleKind::F: return 'F';
    case RuleKind::D: return 'D';
    }
    return '?';
}

std::optional<RuleKind> parse_rule_kind(std::string_view text)
{
    if (text.size() != 1)
        return std::nullopt;
    for (RuleKind k : {RuleKind::T, RuleKind::R, RuleKind::A, RuleKind::L, RuleKind::F, RuleKind::D})
        if (rule_letter(k) == text[0])
            return k;
    return std::nullopt;
}

std::string format_step(const ReductionStep& step)
{
    std::string out(1, rule_letter(step.kind));
    out += " |- ";
    switch (step.kind) {
    case RuleKind::T:
    case RuleKind::D:
    case RuleKind::F:
        for (const auto& t : step.removed_transitions)
            out += t + " ";
        out += step.kind == RuleKind::F ? "fired" : "removed";
        break;
    default:
        out += step.constraint ? step.constraint->to_string() : std::string("?");
    }
    return out;
}

bool check_certificate(const Net& net, const RedundantPlaceCertificate& cert)
{
    const PlaceId p = cert.place;
    net.check(p);
    auto v = [&](PlaceId q) -> std::int64_t {
        auto it = cert.valuation.find(q);
        return it == cert.valuation.end() ? 0 : static_cast<std::int64_t>(it->second);
    };
    if (v(p) == 0)
        return false;
    for (PlaceId q : cert.support) {
        net.check(q);
        if (q == p || v(q) == 0)
            return false;
    }
    std::int64_t b = v(p) * static_cast<std::int64_t>(net.initial(p));
    for (PlaceId q : cert.support)
        b -= v(q) * static_cast<std::int64_t>(net.initial(q));
    if (b < 0 || static_cast<Tokens>(b) != cert.offset)
        return false;
    for (TransId t : net.transitions()) {
        std::int64_t pre = v(p) * static_cast<std::int64_t>(net.pre(t, p));
        std::int64_t growth = v(p) * (static_cast<std::int64_t>(net.post(t, p)) -
                                      static_cast<std::int64_t>(net.pre(t, p)));
        for (PlaceId q : cert.support) {
            pre -= v(q) * static_cast<std::int64_t>(net.pre(t, q));
            growth -= v(q) * (static_cast<std::int64_t>(net.post(t, q)) -
                              static_cast<std::int64_t>(net.pre(t, q)));
        }
        if (pre > b || growth != 0)
            return false;
    }
    return true;
}

LinearConstraint certificate_constraint(const Net& net, const RedundantPlaceCertificate& cert)
{
    std::vector<LinearTerm> rhs;
    for (PlaceId q : cert.support)
        rhs.push_back({static_cast<std::int64_t>(cert.valuation.at(q)), net.place_name(q)});
    return LinearConstraint({{static_cast<std::int64_t>(cert.valuation.at(cert.place)), net.place_name(cert.place)}},
                            Relation::Eq, std::move(rhs), static_cast<std::int64_t>(cert.offset));
}

LinSystem ReductionTrace::system_prefix(std::size_t n) const
{
    LinSystem q;
    for (std::size_t i = 0; i < n && i < steps.size(); ++i)
        if (steps[i].constraint)
            q.add(*steps[i].constraint);
    return q;
}

std::vector<Net> ReductionTrace::nets() const
{
    std::vector<Net> out{initial};
    for (const auto& step : steps)
        out.push_back(apply_step(out.back(), step));
    return out;
}

namespace {

/// Candidate scan order; rank[i] is the position of element i in the scan.
struct ScanOrder {
    std::vector<PlaceId> places;
    std::vector<TransId> transitions;
    std::vector<std::size_t> place_rank;
    std::vector<std::size_t> trans_rank;

    static ScanOrder of(const Net& net, std::mt19937_64* rng)
    {
        ScanOrder s;
        s.places = net.places();
        s.transitions = net.transitions();
        if (rng) {
            std::shuffle(s.places.begin(), s.places.end(), *rng);
            std::shuffle(s.transitions.begin(), s.transitions.end(), *rng);
        }
        s.place_rank.resize(s.places.size());
        s.trans_rank.resize(s.transitions.size());
        for (std::size_t i = 0; i < s.places.size(); ++i)
            s.place_rank[s.places[i].index] = i;
        for (std::size_t i = 0; i < s.transitions.size(); ++i)
            s.trans_rank[s.transitions[i].index] = i;
        return s;
    }
};

// ---- redundant transitions -------------------------------------------------

/// Some k >= 1 with a = k.b, if any. b must be nonzero.
std::optional<std::int64_t> multiple_of(const Displacement& a, const Displacement& b)
{
    if (a.size() != b.size() || b.empty())
        return std::nullopt;
    const auto ea = a.entries();
    const auto eb = b.entries();
    if (ea[0].first != eb[0].first || ea[0].second % eb[0].second != 0)
        return std::nullopt;
    const std::int64_t k = ea[0].second / eb[0].second;
    if (k < 1)
        return std::nullopt;
    for (std::size_t i = 0; i < ea.size(); ++i)
        if (ea[i].first != eb[i].first || ea[i].second != k * eb[i].second)
            return std::nullopt;
    return k;
}

std::optional<FiringSequence> special_transition_witness(const Net& net, TransId t, const ScanOrder& order)
{
    const Displacement dt = net.delta(t);
    if (dt.empty())
        return FiringSequence{};
    const Marking ht = hurdle(net, std::vector<TransId>{t});
    for (TransId u : order.transitions) {
        if (u == t)
            continue;
        const Displacement du = net.delta(u);
        auto k = multiple_of(dt, du);
        if (!k)
            continue;
        FiringSequence sigma(static_cast<std::size_t>(*k), u);
        const Marking hs = hurdle(net, sigma);
        if (!covers(ht, hs))
            continue;
        // exact twins: the one scanned later goes
        if (*k == 1 && hs == ht && order.trans_rank[u.index] > order.trans_rank[t.index])
            continue;
        return sigma;
    }
    return std::nullopt;
}

std::optional<FiringSequence> general_transition_witness(const Net& net, TransId t, std::size_t max_len,
                                                         const ScanOrder& order)
{
    const Marking start = hurdle(net, std::vector<TransId>{t});
    Marking target = start;
    const Displacement dt = net.delta(t);
    for (const auto& [p, d] : dt.entries())
        target.set(p, static_cast<Tokens>(static_cast<std::int64_t>(target.get(p)) + d));

    FiringSequence path;
    std::vector<Marking> visited{start};
    std::function<bool(const Marking&)> dfs = [&](const Marking& m) {
        if (!path.empty() && m == target)
            return true;
        if (path.size() >= max_len)
            return false;
        for (TransId u : order.transitions) {
            if (u == t || !enabled(net, m, u))
                continue;
            Marking next = fire(net, m, u);
            if (std::find(visited.begin(), visited.end(), next) != visited.end())
                continue;
            path.push_back(u);
            visited.push_back(next);
            if (dfs(next))
                return true;
            visited.pop_back();
            path.pop_back();
        }
        return false;
    };
    if (start == target)
        return FiringSequence{};
    if (dfs(start))
        return path;
    return std::nullopt;
}

// ---- redundant places ------------------------------------------------------

std::int64_t delta_at(const Net& net, TransId t, PlaceId p)
{
    return static_cast<std::int64_t>(net.post(t, p)) - static_cast<std::int64_t>(net.pre(t, p));
}

std::vector<TransId> touching(const Net& net, PlaceId p)
{
    std::vector<TransId> ts(net.producers(p).begin(), net.producers(p).end());
    ts.insert(ts.end(), net.consumers(p).begin(), net.consumers(p).end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::optional<RedundantPlaceCertificate> constant_certificate(const Net& net, PlaceId p)
{
    for (TransId t : touching(net, p))
        if (delta_at(net, t, p) != 0 || net.pre(t, p) > net.initial(p))
            return std::nullopt;
    RedundantPlaceCertificate cert;
    cert.place = p;
    cert.valuation[p] = 1;
    cert.offset = net.initial(p);
    return cert;
}

std::optional<RedundantPlaceCertificate> duplicate_certificate(const Net& net, PlaceId p, PlaceId q,
                                                               std::uint64_t coeff_bound)
{
    std::vector<TransId> ts = touching(net, p);
    for (TransId t : touching(net, q))
        ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::int64_t vp = 0, vq = 0;
    for (TransId t : ts) {
        const std::int64_t dp = delta_at(net, t, p), dq = delta_at(net, t, q);
        if ((dp == 0) != (dq == 0))
            return std::nullopt;
        if (dp == 0)
            continue;
        if (vp == 0) {
            // vp.dp = vq.dq with both positive
            if ((dp > 0) != (dq > 0))
                return std::nullopt;
            const std::int64_t g = std::gcd(dp, dq);
            vp = std::abs(dq) / g;
            vq = std::abs(dp) / g;
            if (static_cast<std::uint64_t>(vp) > coeff_bound || static_cast<std::uint64_t>(vq) > coeff_bound)
                return std::nullopt;
        } else if (vp * dp != vq * dq) {
            return std::nullopt;
        }
    }
    if (vp == 0)
        return std::nullopt;
    const std::int64_t b = vp * static_cast<std::int64_t>(net.initial(p)) -
                           vq * static_cast<std::int64_t>(net.initial(q));
    if (b < 0)
        return std::nullopt;
    for (TransId t : ts)
        if (vp * static_cast<std::int64_t>(net.pre(t, p)) - vq * static_cast<std::int64_t>(net.pre(t, q)) > b)
            return std::nullopt;
    RedundantPlaceCertificate cert;
    cert.place = p;
    cert.support = {q};
    cert.valuation[p] = static_cast<std::uint64_t>(vp);
    cert.valuation[q] = static_cast<std::uint64_t>(vq);
    cert.offset = static_cast<Tokens>(b);
    return cert;
}

std::optional<RedundantPlaceCertificate> special_place_certificate(const Net& net, PlaceId p,
                                                                   std::uint64_t coeff_bound,
                                                                   const ScanOrder& order)
{
    if (auto cert = constant_certificate(net, p))
        return cert;
    std::set<PlaceId> neighbours;
    for (TransId t : touching(net, p)) {
        for (const Arc& a : net.pre(t))
            neighbours.insert(a.place);
        for (const Arc& a : net.post(t))
            neighbours.insert(a.place);
    }
    neighbours.erase(p);
    std::vector<PlaceId> candidates(neighbours.begin(), neighbours.end());
    std::sort(candidates.begin(), candidates.end(), [&](PlaceId a, PlaceId b) {
        return order.place_rank[a.index] < order.place_rank[b.index];
    });
    for (PlaceId q : candidates) {
        auto cert = duplicate_certificate(net, p, q, coeff_bound);
        if (!cert)
            continue;
        if (order.place_rank[q.index] > order.place_rank[p.index] &&
            duplicate_certificate(net, q, p, coeff_bound))
            continue;
        return cert;
    }
    return std::nullopt;
}

/// Bounded branch and bound over valuations in 0..coeff_bound for the places of
/// the displacement-connected component of p.
class PlaceSearch {
public:
    PlaceSearch(const Net& net, PlaceId p, std::uint64_t coeff_bound, std::size_t budget)
        : net_(net), p_(p), bound_(static_cast<std::int64_t>(coeff_bound)), budget_(budget)
    {
        std::vector<bool> seen(net.num_places(), false);
        std::vector<PlaceId> queue{p};
        seen[p.index] = true;
        for (std::size_t i = 0; i < queue.size(); ++i) {
            for (TransId t : touching(net, queue[i])) {
                if (delta_at(net, t, queue[i]) == 0)
                    continue;
                auto visit = [&](std::span<const Arc> arcs) {
                    for (const Arc& a : arcs)
                        if (!seen[a.place.index] && delta_at(net, t, a.place) != 0) {
                            seen[a.place.index] = true;
                            queue.push_back(a.place);
                        }
                };
                visit(net.pre(t));
                visit(net.post(t));
            }
        }
        vars_.assign(queue.begin() + 1, queue.end());
        std::vector<int> position(net.num_places(), -1);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            position[vars_[i].index] = static_cast<int>(i);

        auto add_row = [&](bool eq, std::vector<std::pair<int, std::int64_t>> terms, std::int64_t rhs) {
            if (terms.empty()) {
                // 0 ⋈ vp.rhs for every vp >= 1
                if (eq ? rhs != 0 : rhs < 0)
                    infeasible_ = true;
                return;
            }
            std::sort(terms.begin(), terms.end());
            rows_.push_back(Row{eq, std::move(terms), rhs, {}, {}});
        };

        std::set<TransId> relevant;
        for (PlaceId q : queue)
            for (TransId t : touching(net, q))
                relevant.insert(t);
        for (TransId t : relevant) {
            std::vector<std::pair<int, std::int64_t>> growth, pre;
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (std::int64_t d = delta_at(net, t, vars_[i]); d != 0)
                    growth.emplace_back(static_cast<int>(i), d);
                const std::int64_t slack = static_cast<std::int64_t>(net.initial(vars_[i])) -
                                           static_cast<std::int64_t>(net.pre(t, vars_[i]));
                if (slack != 0)
                    pre.emplace_back(static_cast<int>(i), slack);
            }
            add_row(true, std::move(growth), delta_at(net, t, p));
            add_row(false, std::move(pre),
                    static_cast<std::int64_t>(net.initial(p)) - static_cast<std::int64_t>(net.pre(t, p)));
        }
        std::vector<std::pair<int, std::int64_t>> initial;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (net.initial(vars_[i]) != 0)
                initial.emplace_back(static_cast<int>(i), static_cast<std::int64_t>(net.initial(vars_[i])));
        add_row(false, std::move(initial), static_cast<std::int64_t>(net.initial(p)));

        occurrences_.assign(vars_.size(), {});
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            Row& row = rows_[r];
            const std::size_t k = row.terms.size();
            row.suffix_min.assign(k + 1, 0);
            row.suffix_max.assign(k + 1, 0);
            for (std::size_t i = k; i-- > 0;) {
                const std::int64_t c = row.terms[i].second;
                row.suffix_min[i] = row.suffix_min[i + 1] + std::min<std::int64_t>(0, c * bound_);
                row.suffix_max[i] = row.suffix_max[i + 1] + std::max<std::int64_t>(0, c * bound_);
                occurrences_[row.terms[i].first].push_back({static_cast<int>(r), static_cast<int>(i)});
            }
        }
    }

    std::optional<RedundantPlaceCertificate> run()
    {
        if (infeasible_ || vars_.empty())
            return std::nullopt;
        value_.assign(vars_.size(), 0);
        for (std::int64_t vp = 1; vp <= bound_; ++vp) {
            residual_.resize(rows_.size());
            for (std::size_t r = 0; r < rows_.size(); ++r)
                residual_[r] = vp * rows_[r].rhs;
            vp_ = vp;
            if (dfs(0))
                return certificate();
            if (nodes_ > budget_)
                break;
        }
        return std::nullopt;
    }

private:
    struct Row {
        bool eq;
        std::vector<std::pair<int, std::int64_t>> terms;
        std::int64_t rhs;  // multiplied by v(p)
        std::vector<std::int64_t> suffix_min, suffix_max;
    };
    struct Occurrence {
        int row;
        int term;
    };

    bool dfs(std::size_t depth)
    {
        if (++nodes_ > budget_)
            return false;
        if (depth == vars_.size())
            return std::any_of(value_.begin(), value_.end(), [](std::int64_t v) { return v != 0; });
        std::int64_t lo = 0, hi = bound_;
        for (const auto& occ : occurrences_[depth]) {
            const Row& row = rows_[occ.row];
            const std::int64_t c = row.terms[occ.term].second;
            const std::int64_t res = residual_[occ.row];
            const std::int64_t upper = res - row.suffix_min[occ.term + 1];
            if (c > 0)
                hi = std::min(hi, floor_div(upper, c));
            else
                lo = std::max(lo, ceil_div(upper, c));
            if (row.eq) {
                const std::int64_t lower = res - row.suffix_max[occ.term + 1];
                if (c > 0)
                    lo = std::max(lo, ceil_div(lower, c));
                else
                    hi = std::min(hi, floor_div(lower, c));
            }
            if (lo > hi)
                return false;
        }
        for (std::int64_t v = lo; v <= hi; ++v) {
            for (const auto& occ : occurrences_[depth])
                residual_[occ.row] -= rows_[occ.row].terms[occ.term].second * v;
            value_[depth] = v;
            const bool found = dfs(depth + 1);
            for (const auto& occ : occurrences_[depth])
                residual_[occ.row] += rows_[occ.row].terms[occ.term].second * v;
            if (found)
                return true;
            if (nodes_ > budget_)
                return false;
        }
        value_[depth] = 0;
        return false;
    }

    RedundantPlaceCertificate certificate() const
    {
        RedundantPlaceCertificate cert;
        cert.place = p_;
        cert.valuation[p_] = static_cast<std::uint64_t>(vp_);
        std::int64_t b = vp_ * static_cast<std::int64_t>(net_.initial(p_));
        std::vector<PlaceId> support;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (value_[i] != 0) {
                support.push_back(vars_[i]);
                cert.valuation[vars_[i]] = static_cast<std::uint64_t>(value_[i]);
                b -= value_[i] * static_cast<std::int64_t>(net_.initial(vars_[i]));
            }
        std::sort(support.begin(), support.end());
        cert.support = std::move(support);
        cert.offset = static_cast<Tokens>(b);
        return cert;
    }

    static std::int64_t floor_div(std::int64_t a, std::int64_t b)
    {
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0)))
            --q;
        return q;
    }
    static std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

    const Net& net_;
    PlaceId p_;
    std::int64_t bound_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    bool infeasible_ = false;
    std::vector<PlaceId> vars_;
    std::vector<Row> rows_;
    std::vector<std::vector<Occurrence>> occurrences_;
    std::vector<std::int64_t> residual_;
    std::vector<std::int64_t> value_;
    std::int64_t vp_ = 1;
};

std::optional<RedundantPlaceCertificate> general_place_certificate(const Net& net, PlaceId p,
                                                                   std::uint64_t coeff_bound,
                                                                   std::size_t budget)
{
    auto cert = PlaceSearch(net, p, coeff_bound, budget).run();
    if (cert && !check_certificate(net, *cert))
        throw Error("internal: redundant-place search produced an invalid certificate");
    return cert;
}

// ---- agglomerations, source-sink, fire-once, dead ----------------------------

bool unit_move(const Net& net, TransId t, PlaceId& from, PlaceId& to)
{
    const auto pre = net.pre(t);
    const auto post = net.post(t);
    if (pre.size() != 1 || post.size() != 1 || pre[0].weight != 1 || post[0].weight != 1)
        return false;
    from = pre[0].place;
    to = post[0].place;
    return from != to;
}

std::optional<ChainCandidate> chain_candidate(const Net& net, const ScanOrder& order)
{
    for (TransId t : order.transitions) {
        PlaceId p, q;
        if (!unit_move(net, t, p, q))
            continue;
        if (net.initial(q) != 0)
            continue;
        const auto producers = net.producers(q);
        if (producers.size() != 1 || producers[0] != t)
            continue;
        return ChainCandidate{p, q, t};
    }
    return std::nullopt;
}

std::optional<std::vector<PlaceId>> loop_candidate(const Net& net, std::size_t max_n, const ScanOrder& order)
{
    if (max_n < 2)
        return std::nullopt;
    std::vector<std::vector<PlaceId>> next(net.num_places());
    for (TransId t : order.transitions) {
        PlaceId from, to;
        if (unit_move(net, t, from, to) &&
            std::find(next[from.index].begin(), next[from.index].end(), to) == next[from.index].end())
            next[from.index].push_back(to);
    }
    std::size_t budget = 100000;
    for (PlaceId start : order.places) {
        // cycles through start whose other places come later in the scan
        std::vector<PlaceId> path{start};
        std::vector<bool> on_path(net.num_places(), false);
        on_path[start.index] = true;
        std::function<bool(PlaceId)> dfs = [&](PlaceId at) {
            if (budget == 0)
                return false;
            --budget;
            for (PlaceId to : next[at.index]) {
                if (to == start && path.size() >= 2)
                    return true;
                if (on_path[to.index] || path.size() >= max_n ||
                    order.place_rank[to.index] < order.place_rank[start.index])
                    continue;
                on_path[to.index] = true;
                path.push_back(to);
                if (dfs(to))
                    return true;
                path.pop_back();
                on_path[to.index] = false;
            }
            return false;
        };
        if (dfs(start))
            return path;
    }
    return std::nullopt;
}

std::optional<SourceSink> source_sink_candidate(const Net& net, const ScanOrder& order)
{
    for (PlaceId p : order.places) {
        if (!net.producers(p).empty() || net.consumers(p).size() != 1)
            continue;
        const TransId t = net.consumers(p)[0];
        const auto pre = net.pre(t);
        if (pre.size() == 1 && pre[0].weight == 1 && net.post(t).empty())
            return SourceSink{p, t};
    }
    return std::nullopt;
}

std::optional<TransId> fire_once_candidate(const Net& net, const ScanOrder& order)
{
    std::optional<TransId> only;
    for (TransId t : order.transitions) {
        if (!enabled(net, net.initial_marking(), t))
            continue;
        if (only)
            return std::nullopt;
        only = t;
    }
    if (!only)
        return std::nullopt;
    for (const Arc& a : net.pre(*only)) {
        if (net.producers(a.place).empty() && net.initial(a.place) < 2 * a.weight &&
            net.consumers(a.place).size() == 1)
            return only;
    }
    return std::nullopt;
}

std::vector<TransId> dead_transitions(const Net& net, const ScanOrder& order)
{
    std::vector<TransId> out;
    for (TransId t : order.transitions)
        for (const Arc& a : net.pre(t))
            if (net.producers(a.place).empty() && net.initial(a.place) < a.weight) {
                out.push_back(t);
                break;
            }
    return out;
}

}  // namespace

std::optional<FiringSequence> find_redundant_transition(const Net& net, TransId t, std::size_t max_len)
{
    net.check(t);
    const ScanOrder order = ScanOrder::of(net, nullptr);
    if (auto w = special_transition_witness(net, t, order))
        return w;
    return general_transition_witness(net, t, max_len, order);
}

std::optional<RedundantPlaceCertificate> find_redundant_place(const Net& net, PlaceId p,
                                                              std::uint64_t coeff_bound,
                                                              std::size_t size_limit)
{
    net.check(p);
    const ScanOrder order = ScanOrder::of(net, nullptr);
    if (auto cert = special_place_certificate(net, p, coeff_bound, order))
        return cert;
    if (net.num_places() > size_limit)
        return std::nullopt;
    return general_place_certificate(net, p, coeff_bound, ReductionLimits{}.place_search_budget);
}

std::optional<ChainCandidate> find_chain_agglomeration(const Net& net)
{
    return chain_candidate(net, ScanOrder::of(net, nullptr));
}

std::optional<std::vector<PlaceId>> find_loop_agglomeration(const Net& net, std::size_t max_n)
{
    return loop_candidate(net, max_n, ScanOrder::of(net, nullptr));
}

std::optional<SourceSink> find_source_sink(const Net& net)
{
    return source_sink_candidate(net, ScanOrder::of(net, nullptr));
}

std::optional<TransId> find_fire_once(const Net& net)
{
    return fire_once_candidate(net, ScanOrder::of(net, nullptr));
}

std::vector<TransId> find_dead_transitions(const Net& net)
{
    return dead_transitions(net, ScanOrder::of(net, nullptr));
}

Net apply_agglomeration(const Net& net, std::span<const PlaceId> parts, const std::string& fresh)
{
    if (parts.empty())
        throw Error("agglomeration needs at least one place");
    std::vector<bool> is_part(net.num_places(), false);
    PlaceId first = parts[0];
    for (PlaceId p : parts) {
        net.check(p);
        if (is_part[p.index])
            throw Error("place '" + net.place_name(p) + "' listed twice in an agglomeration");
        is_part[p.index] = true;
        first = std::min(first, p);
    }
    if (net.find_place(fresh) || net.find_transition(fresh))
        throw Error("fresh place name '" + fresh + "' is already used");

    NetBuilder b(net.name());
    std::vector<PlaceId> map(net.num_places());
    PlaceId a{};
    Tokens a_tokens = 0;
    for (PlaceId p : net.places()) {
        if (p == first)
            a = b.place(fresh);
        if (is_part[p.index]) {
            map[p.index] = a;
            a_tokens += net.initial(p);
        } else {
            map[p.index] = b.place(net.place_name(p));
            b.set_initial(map[p.index], net.initial(p));
        }
    }
    b.set_initial(a, a_tokens);
    for (TransId t : net.transitions()) {
        TransId u = b.add_transition(net.transition_name(t));
        for (const Arc& arc : net.pre(t))
            b.add_input(u, map[arc.place.index], arc.weight);
        for (const Arc& arc : net.post(t))
            b.add_output(u, map[arc.place.index], arc.weight);
    }
    return b.build();
}

namespace {

const std::string& single_lhs(const LinearConstraint& c, std::int64_t& coeff)
{
    if (c.lhs().size() != 1 || c.lhs()[0].coeff <= 0)
        throw Error("expected a single positive term on the left of '" + c.to_string() + "'");
    coeff = c.lhs()[0].coeff;
    return c.lhs()[0].var;
}

std::vector<TransId> transitions_named(const Net& net, const std::vector<std::string>& names)
{
    std::vector<TransId> out;
    for (const auto& n : names)
        out.push_back(net.transition(n));
    return out;
}

}  // namespace

Net apply_step(const Net& net, ReductionStep& step)
{
    switch (step.kind) {
    case RuleKind::T:
    case RuleKind::D: {
        if (step.removed_transitions.empty())
            throw Error("step removes no transition");
        const auto ts = transitions_named(net, step.removed_transitions);
        return remove_transitions(net, ts);
    }
    case RuleKind::R: {
        if (!step.constraint || step.constraint->relation() != Relation::Eq)
            throw Error("R step needs an equation");
        std::int64_t coeff = 0;
        const PlaceId p = net.place(single_lhs(*step.constraint, coeff));
        for (const auto& term : step.constraint->rhs_terms()) {
            net.place(term.var);
            if (term.var == net.place_name(p))
                throw Error("R step refers to the removed place on both sides");
        }
        step.removed_places = {net.place_name(p)};
        step.removed_transitions.clear();
        step.introduced_place.reset();
        const std::vector<PlaceId> removed{p};
        return remove_places(net, removed);
    }
    case RuleKind::A: {
        if (!step.constraint || step.constraint->relation() != Relation::Eq ||
            step.constraint->rhs_const() != 0)
            throw Error("A step needs an equation a = p1 + ... + pn");
        std::int64_t coeff = 0;
        const std::string fresh = single_lhs(*step.constraint, coeff);
        if (coeff != 1)
            throw Error("A step needs a unit coefficient on the new place");
        std::vector<PlaceId> parts;
        std::vector<std::string> names;
        for (const auto& term : step.constraint->rhs_terms()) {
            if (term.coeff != 1)
                throw Error("A step needs unit coefficients on the merged places");
            parts.push_back(net.place(term.var));
            names.push_back(term.var);
        }
        Net next = apply_agglomeration(net, parts, fresh);
        step.removed_places = std::move(names);
        step.removed_transitions.clear();
        step.introduced_place = fresh;
        return next;
    }
    case RuleKind::L: {
        if (!step.constraint || step.constraint->relation() != Relation::Le ||
            !step.constraint->rhs_terms().empty())
            throw Error("L step needs an inequality p <= k");
        std::int64_t coeff = 0;
        const PlaceId p = net.place(single_lhs(*step.constraint, coeff));
        if (coeff != 1)
            throw Error("L step needs a unit coefficient");
        if (net.consumers(p).size() != 1)
            throw Error("L step: place '" + net.place_name(p) + "' does not have a single consumer");
        const TransId t = net.consumers(p)[0];
        step.removed_places = {net.place_name(p)};
        step.removed_transitions = {net.transition_name(t)};
        step.introduced_place.reset();
        const std::vector<PlaceId> places{p};
        const std::vector<TransId> ts{t};
        return remove_places(remove_transitions(net, ts), places);
    }
    case RuleKind::F: {
        if (step.removed_transitions.size() != 1)
            throw Error("F step fires exactly one transition");
        const TransId t = net.transition(step.removed_transitions[0]);
        const Marking next = fire(net, net.initial_marking(), t);
        const std::vector<TransId> ts{t};
        step.count_increment = 1;
        return with_initial_marking(remove_transitions(net, ts), next);
    }
    }
    throw Error("unknown rule kind");
}

Net apply_step(const Net& net, const ReductionStep& step)
{
    ReductionStep copy = step;
    return apply_step(net, copy);
}

ReductionTrace replay(const Net& initial, std::vector<ReductionStep> steps)
{
    ReductionTrace trace{initial, std::move(steps), initial};
    std::set<std::string> introduced;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        try {
            trace.residual = apply_step(trace.residual, trace.steps[i]);
        } catch (const Error& e) {
            throw Error("step " + std::to_string(i + 1) + " (" + format_step(trace.steps[i]) + "): " + e.what());
        }
        if (const auto& a = trace.steps[i].introduced_place) {
            if (initial.find_place(*a) || initial.find_transition(*a) || !introduced.insert(*a).second)
                throw Error("step " + std::to_string(i + 1) + ": place '" + *a + "' is not fresh");
        }
    }
    return trace;
}

namespace {

enum class LocalRule { Dead, TSpecial, RSpecial, Chain, Loop, SourceSink, FireOnce };

class Reducer {
public:
    Reducer(const Net& net, Strategy strategy, const ReductionLimits& limits)
        : initial_(net), net_(net), strategy_(strategy), limits_(limits)
    {
        for (PlaceId p : net.places())
            used_names_.insert(net.place_name(p));
        for (TransId t : net.transitions())
            used_names_.insert(net.transition_name(t));
        if (limits.seed)
            rng_.emplace(*limits.seed);
    }

    ReductionTrace run()
    {
        using enum LocalRule;
        std::vector<LocalRule> local;
        if (strategy_ == Strategy::Clean)
            local = {TSpecial, RSpecial};
        else
            local = {Dead, TSpecial, RSpecial, Chain, Loop, SourceSink, FireOnce};

        for (;;) {
            ScanOrder order = ScanOrder::of(net_, rng_ ? &*rng_ : nullptr);
            std::vector<LocalRule> rules = local;
            if (rng_)
                std::shuffle(rules.begin(), rules.end(), *rng_);
            bool applied = false;
            for (LocalRule rule : rules) {
                if (try_local(rule, order)) {
                    applied = true;
                    break;
                }
            }
            if (applied)
                continue;
            if (strategy_ == Strategy::Clean)
                break;
            if (try_general_place(order) || try_general_transition(order))
                continue;
            break;
        }
        return ReductionTrace{initial_, std::move(steps_), net_};
    }

private:
    bool try_local(LocalRule rule, const ScanOrder& order)
    {
        switch (rule) {
        case LocalRule::Dead: {
            auto dead = dead_transitions(net_, order);
            if (dead.empty())
                return false;
            std::sort(dead.begin(), dead.end());
            ReductionStep step;
            step.kind = RuleKind::D;
            for (TransId t : dead)
                step.removed_transitions.push_back(net_.transition_name(t));
            record(std::move(step));
            return true;
        }
        case LocalRule::TSpecial:
            for (TransId t : order.transitions)
                if (auto w = special_transition_witness(net_, t, order)) {
                    record_transition(t, *w);
                    return true;
                }
            return false;
        case LocalRule::RSpecial:
            for (PlaceId p : order.places)
                if (auto cert = special_place_certificate(net_, p, limits_.coeff_bound, order)) {
                    record_place(*cert);
                    return true;
                }
            return false;
        case LocalRule::Chain:
            if (auto c = chain_candidate(net_, order)) {
                const std::vector<PlaceId> parts{c->q, c->p};
                record_agglomeration(parts);
                return true;
            }
            return false;
        case LocalRule::Loop:
            if (auto loop = loop_candidate(net_, limits_.max_loop, order)) {
                record_agglomeration(*loop);
                return true;
            }
            return false;
        case LocalRule::SourceSink:
            if (auto ss = source_sink_candidate(net_, order)) {
                ReductionStep step;
                step.kind = RuleKind::L;
                step.constraint = LinearConstraint::at_most(net_.place_name(ss->p),
                                                            static_cast<std::int64_t>(net_.initial(ss->p)));
                record(std::move(step));
                return true;
            }
            return false;
        case LocalRule::FireOnce:
            if (auto t = fire_once_candidate(net_, order)) {
                ReductionStep step;
                step.kind = RuleKind::F;
                step.removed_transitions = {net_.transition_name(*t)};
                step.count_increment = 1;
                record(std::move(step));
                return true;
            }
            return false;
        }
        return false;
    }

    bool try_general_place(const ScanOrder& order)
    {
        if (net_.num_places() > limits_.size_limit)
            return false;
        for (PlaceId p : order.places)
            if (auto cert = general_place_certificate(net_, p, limits_.coeff_bound, limits_.place_search_budget)) {
                record_place(*cert);
                return true;
            }
        return false;
    }

    bool try_general_transition(const ScanOrder& order)
    {
        for (TransId t : order.transitions)
            if (auto w = general_transition_witness(net_, t, limits_.max_seq_len, order)) {
                record_transition(t, *w);
                return true;
            }
        return false;
    }

    void record_transition(TransId t, const FiringSequence& witness)
    {
        ReductionStep step;
        step.kind = RuleKind::T;
        step.removed_transitions = {net_.transition_name(t)};
        for (TransId u : witness)
            step.witness.push_back(net_.transition_name(u));
        record(std::move(step));
    }

    void record_place(const RedundantPlaceCertificate& cert)
    {
        ReductionStep step;
        step.kind = RuleKind::R;
        step.constraint = certificate_constraint(net_, cert);
        record(std::move(step));
    }

    void record_agglomeration(const std::vector<PlaceId>& parts)
    {
        ReductionStep step;
        step.kind = RuleKind::A;
        std::vector<LinearTerm> rhs;
        for (PlaceId p : parts)
            rhs.push_back({1, net_.place_name(p)});
        step.constraint = LinearConstraint::equality({{1, fresh_name()}}, std::move(rhs));
        record(std::move(step));
    }

    std::string fresh_name()
    {
        for (;;) {
            std::string name = "a" + std::to_string(++fresh_counter_);
            if (used_names_.insert(name).second)
                return name;
        }
    }

    void record(ReductionStep step)
    {
        net_ = apply_step(net_, step);
        steps_.push_back(std::move(step));
    }

    Net initial_;
    Net net_;
    Strategy strategy_;
    ReductionLimits limits_;
    std::optional<std::mt19937_64> rng_;
    std::vector<ReductionStep> steps_;
    std::unordered_set<std::string> used_names_;
    std::size_t fresh_counter_ = 0;
};

}  // namespace

ReductionTrace reduce(const Net& net, Strategy strategy, const ReductionLimits& limits)
{
    return Reducer(net, strategy, limits).run();
}

}  // namespace pnc
