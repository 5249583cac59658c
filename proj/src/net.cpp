#include "pnc/net.hpp"

#include "pnc/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pnc {

std::vector<PlaceId> Net::places() const
{
    std::vector<PlaceId> out(num_places());
    for (std::uint32_t i = 0; i < out.size(); ++i)
        out[i] = PlaceId{i};
    return out;
}

std::vector<TransId> Net::transitions() const
{
    std::vector<TransId> out(num_transitions());
    for (std::uint32_t i = 0; i < out.size(); ++i)
        out[i] = TransId{i};
    return out;
}

std::optional<PlaceId> Net::find_place(std::string_view name) const
{
    auto it = place_index_.find(std::string(name));
    if (it == place_index_.end())
        return std::nullopt;
    return PlaceId{it->second};
}

std::optional<TransId> Net::find_transition(std::string_view name) const
{
    auto it = transition_index_.find(std::string(name));
    if (it == transition_index_.end())
        return std::nullopt;
    return TransId{it->second};
}

PlaceId Net::place(std::string_view name) const
{
    if (auto p = find_place(name))
        return *p;
    throw UnknownIdError("unknown place '" + std::string(name) + "'");
}

TransId Net::transition(std::string_view name) const
{
    if (auto t = find_transition(name))
        return *t;
    throw UnknownIdError("unknown transition '" + std::string(name) + "'");
}

namespace {

Weight arc_weight(std::span<const Arc> arcs, PlaceId p)
{
    auto it = std::lower_bound(arcs.begin(), arcs.end(), p,
                               [](const Arc& a, PlaceId key) { return a.place < key; });
    return it != arcs.end() && it->place == p ? it->weight : 0;
}

}  // namespace

Weight Net::pre(TransId t, PlaceId p) const { return arc_weight(pre(t), p); }
Weight Net::post(TransId t, PlaceId p) const { return arc_weight(post(t), p); }

Displacement Net::delta(TransId t) const
{
    Displacement d;
    for (const Arc& a : post(t))
        d.add(a.place, static_cast<std::int64_t>(a.weight));
    for (const Arc& a : pre(t))
        d.add(a.place, -static_cast<std::int64_t>(a.weight));
    return d;
}

void Net::check(PlaceId p) const
{
    if (p.index >= num_places())
        throw UnknownIdError("unknown place index " + std::to_string(p.index));
}

void Net::check(TransId t) const
{
    if (t.index >= num_transitions())
        throw UnknownIdError("unknown transition index " + std::to_string(t.index));
}

bool Net::isomorphic(const Net& other) const
{
    if (num_places() != other.num_places() || num_transitions() != other.num_transitions())
        return false;
    for (PlaceId p : places()) {
        auto q = other.find_place(place_name(p));
        if (!q || initial(p) != other.initial(*q))
            return false;
    }
    auto same_arcs = [&](std::span<const Arc> mine, std::span<const Arc> theirs) {
        if (mine.size() != theirs.size())
            return false;
        std::set<std::pair<std::string, Weight>> a, b;
        for (const Arc& arc : mine)
            a.emplace(place_name(arc.place), arc.weight);
        for (const Arc& arc : theirs)
            b.emplace(other.place_name(arc.place), arc.weight);
        return a == b;
    };
    for (TransId t : transitions()) {
        auto u = other.find_transition(transition_name(t));
        if (!u || !same_arcs(pre(t), other.pre(*u)) || !same_arcs(post(t), other.post(*u)))
            return false;
    }
    return true;
}

NetBuilder::NetBuilder(std::string name) : name_(std::move(name)) {}

PlaceId NetBuilder::place(std::string_view name)
{
    std::string key(name);
    if (auto it = place_index_.find(key); it != place_index_.end())
        return PlaceId{it->second};
    if (transition_index_.count(key))
        throw Error("'" + key + "' is already a transition");
    const auto index = static_cast<std::uint32_t>(places_.size());
    places_.push_back(key);
    place_index_.emplace(std::move(key), index);
    m0_.push_back(0);
    return PlaceId{index};
}

bool NetBuilder::has_place(std::string_view name) const
{
    return place_index_.count(std::string(name)) != 0;
}

void NetBuilder::set_initial(PlaceId p, Tokens tokens) { m0_.at(p.index) = tokens; }

TransId NetBuilder::add_transition(std::string_view name)
{
    std::string key(name);
    if (transition_index_.count(key))
        throw Error("duplicate transition '" + key + "'");
    if (place_index_.count(key))
        throw Error("'" + key + "' is already a place");
    const auto index = static_cast<std::uint32_t>(transitions_.size());
    transitions_.push_back(key);
    transition_index_.emplace(std::move(key), index);
    pre_.emplace_back();
    post_.emplace_back();
    return TransId{index};
}

bool NetBuilder::has_transition(std::string_view name) const
{
    return transition_index_.count(std::string(name)) != 0;
}

void NetBuilder::add_input(TransId t, PlaceId p, Weight w) { pre_.at(t.index).emplace_back(p.index, w); }
void NetBuilder::add_output(TransId t, PlaceId p, Weight w) { post_.at(t.index).emplace_back(p.index, w); }

namespace {

std::vector<Arc> canonical_arcs(std::vector<std::pair<std::uint32_t, Weight>> raw)
{
    std::sort(raw.begin(), raw.end());
    std::vector<Arc> arcs;
    for (const auto& [p, w] : raw) {
        if (w == 0)
            continue;
        if (!arcs.empty() && arcs.back().place.index == p)
            arcs.back().weight += w;
        else
            arcs.push_back(Arc{PlaceId{p}, w});
    }
    return arcs;
}

}  // namespace

Net NetBuilder::build() const
{
    Net net;
    net.name_ = name_;
    net.place_names_ = places_;
    net.transition_names_ = transitions_;
    net.place_index_ = place_index_;
    net.transition_index_ = transition_index_;
    net.producers_.resize(places_.size());
    net.consumers_.resize(places_.size());
    for (std::uint32_t t = 0; t < transitions_.size(); ++t) {
        net.pre_.push_back(canonical_arcs(pre_[t]));
        net.post_.push_back(canonical_arcs(post_[t]));
        for (const Arc& a : net.pre_.back())
            net.consumers_[a.place.index].push_back(TransId{t});
        for (const Arc& a : net.post_.back())
            net.producers_[a.place.index].push_back(TransId{t});
    }
    for (std::uint32_t p = 0; p < places_.size(); ++p)
        net.m0_.set(PlaceId{p}, m0_[p]);
    return net;
}

bool enabled(const Net& net, const Marking& m, TransId t)
{
    net.check(t);
    for (const Arc& a : net.pre(t))
        if (m.get(a.place) < a.weight)
            return false;
    return true;
}

Marking fire(const Net& net, const Marking& m, TransId t)
{
    net.check(t);
    Marking next = m;
    for (const Arc& a : net.pre(t)) {
        const Tokens have = m.get(a.place);
        if (have < a.weight)
            throw NotEnabledError(net.transition_name(t), net.place_name(a.place));
        next.set(a.place, have - a.weight);
    }
    for (const Arc& a : net.post(t))
        next.add(a.place, a.weight);
    return next;
}

Displacement displacement(const Net& net, std::span<const TransId> sigma)
{
    Displacement total;
    for (TransId t : sigma) {
        net.check(t);
        const Displacement dt = net.delta(t);
        for (const auto& [p, d] : dt.entries())
            total.add(p, d);
    }
    return total;
}

Marking hurdle(const Net& net, std::span<const TransId> sigma)
{
    Marking h;
    Displacement moved;
    for (TransId t : sigma) {
        net.check(t);
        for (const Arc& a : net.pre(t)) {
            const std::int64_t need = static_cast<std::int64_t>(a.weight) - moved.get(a.place);
            if (need > 0 && static_cast<Tokens>(need) > h.get(a.place))
                h.set(a.place, static_cast<Tokens>(need));
        }
        const Displacement dt = net.delta(t);
        for (const auto& [p, d] : dt.entries())
            moved.add(p, d);
    }
    return h;
}

bool firable(const Net& net, const Marking& m, std::span<const TransId> sigma)
{
    Marking cur = m;
    for (TransId t : sigma) {
        if (!enabled(net, cur, t))
            return false;
        cur = fire(net, cur, t);
    }
    return true;
}

bool is_sum_place(const Net& net, PlaceId a, std::span<const PlaceId> parts)
{
    net.check(a);
    for (PlaceId p : parts) {
        net.check(p);
        if (p == a)
            throw Error("is_sum_place: '" + net.place_name(a) + "' cannot be one of its own parts");
    }
    auto sum = [&](auto&& value_of) {
        Tokens s = 0;
        for (PlaceId p : parts)
            s += value_of(p);
        return s;
    };
    if (net.initial(a) != sum([&](PlaceId p) { return net.initial(p); }))
        return false;
    for (TransId t : net.transitions()) {
        if (net.pre(t, a) != sum([&](PlaceId p) { return net.pre(t, p); }))
            return false;
        if (net.post(t, a) != sum([&](PlaceId p) { return net.post(t, p); }))
            return false;
    }
    return true;
}

bool covers(const Marking& m, const Marking& lower)
{
    for (const auto& [p, v] : lower.entries())
        if (m.get(p) < v)
            return false;
    return true;
}

namespace {

/// Rebuilds a net keeping only the selected elements, optionally replacing m0.
Net rebuild(const Net& net, const std::vector<bool>& keep_place, const std::vector<bool>& keep_trans,
            const Marking* m0)
{
    NetBuilder b(net.name());
    std::vector<std::optional<PlaceId>> map(net.num_places());
    for (PlaceId p : net.places()) {
        if (!keep_place[p.index])
            continue;
        map[p.index] = b.place(net.place_name(p));
        b.set_initial(*map[p.index], m0 ? m0->get(p) : net.initial(p));
    }
    for (TransId t : net.transitions()) {
        if (!keep_trans[t.index])
            continue;
        TransId u = b.add_transition(net.transition_name(t));
        for (const Arc& a : net.pre(t))
            if (map[a.place.index])
                b.add_input(u, *map[a.place.index], a.weight);
        for (const Arc& a : net.post(t))
            if (map[a.place.index])
                b.add_output(u, *map[a.place.index], a.weight);
    }
    return b.build();
}

}  // namespace

Net remove_transitions(const Net& net, std::span<const TransId> removed)
{
    std::vector<bool> keep_place(net.num_places(), true);
    std::vector<bool> keep_trans(net.num_transitions(), true);
    for (TransId t : removed) {
        net.check(t);
        keep_trans[t.index] = false;
    }
    return rebuild(net, keep_place, keep_trans, nullptr);
}

Net remove_places(const Net& net, std::span<const PlaceId> removed)
{
    std::vector<bool> keep_place(net.num_places(), true);
    std::vector<bool> keep_trans(net.num_transitions(), true);
    for (PlaceId p : removed) {
        net.check(p);
        keep_place[p.index] = false;
    }
    return rebuild(net, keep_place, keep_trans, nullptr);
}

Net with_initial_marking(const Net& net, const Marking& m0)
{
    std::vector<bool> keep_place(net.num_places(), true);
    std::vector<bool> keep_trans(net.num_transitions(), true);
    return rebuild(net, keep_place, keep_trans, &m0);
}

std::string format_marking(const Net& net, const Marking& m)
{
    std::ostringstream out;
    bool first = true;
    for (const auto& [p, v] : m.entries()) {
        if (!first)
            out << ' ';
        first = false;
        out << net.place_name(p) << ':' << v;
    }
    return out.str();
}

}  // namespace pnc
