#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pnc {

using Tokens = std::uint64_t;
using Weight = std::uint64_t;

struct PlaceId {
    std::uint32_t index = 0;
    auto operator<=>(const PlaceId&) const = default;
};

struct TransId {
    std::uint32_t index = 0;
    auto operator<=>(const TransId&) const = default;
};

/// Sparse place-indexed vector. Zero entries are never stored, so equality and
/// hashing work on the canonical form directly.
template <typename Value>
class PlaceMap {
public:
    using Entry = std::pair<PlaceId, Value>;

    PlaceMap() = default;
    PlaceMap(std::initializer_list<Entry> entries)
    {
        for (const auto& [p, v] : entries)
            set(p, get(p) + v);
    }

    Value get(PlaceId p) const
    {
        auto it = find(p);
        return it != entries_.end() && it->first == p ? it->second : Value{};
    }
    Value operator[](PlaceId p) const { return get(p); }

    void set(PlaceId p, Value v)
    {
        auto it = find(p);
        const bool present = it != entries_.end() && it->first == p;
        if (v == Value{}) {
            if (present)
                entries_.erase(it);
        } else if (present) {
            it->second = v;
        } else {
            entries_.insert(it, Entry{p, v});
        }
    }

    void add(PlaceId p, Value delta) { set(p, get(p) + delta); }

    std::span<const Entry> entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    bool operator==(const PlaceMap&) const = default;
    auto operator<=>(const PlaceMap&) const = default;

    std::size_t hash() const
    {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& [p, v] : entries_) {
            h ^= std::hash<std::uint64_t>{}((std::uint64_t(p.index) << 40) ^ std::uint64_t(v)) +
                 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }

private:
    typename std::vector<Entry>::iterator find(PlaceId p)
    {
        return std::lower_bound(entries_.begin(), entries_.end(), p,
                                [](const Entry& e, PlaceId key) { return e.first < key; });
    }
    typename std::vector<Entry>::const_iterator find(PlaceId p) const
    {
        return std::lower_bound(entries_.begin(), entries_.end(), p,
                                [](const Entry& e, PlaceId key) { return e.first < key; });
    }

    std::vector<Entry> entries_;
};

using Marking = PlaceMap<Tokens>;
using Displacement = PlaceMap<std::int64_t>;
using FiringSequence = std::vector<TransId>;

struct MarkingHash {
    std::size_t operator()(const Marking& m) const { return m.hash(); }
};

struct Arc {
    PlaceId place;
    Weight weight = 0;
    bool operator==(const Arc&) const = default;
};

class NetBuilder;

/// A marked place/transition net. Identifiers are interned to dense indices in
/// declaration order; a Net is immutable once built.
class Net {
public:
    Net() = default;

    const std::string& name() const { return name_; }

    std::size_t num_places() const { return place_names_.size(); }
    std::size_t num_transitions() const { return transition_names_.size(); }

    std::vector<PlaceId> places() const;
    std::vector<TransId> transitions() const;

    const std::string& place_name(PlaceId p) const { return place_names_.at(p.index); }
    const std::string& transition_name(TransId t) const { return transition_names_.at(t.index); }

    std::optional<PlaceId> find_place(std::string_view name) const;
    std::optional<TransId> find_transition(std::string_view name) const;
    /// Throws UnknownIdError.
    PlaceId place(std::string_view name) const;
    TransId transition(std::string_view name) const;

    /// Arcs sorted by place, weights strictly positive.
    std::span<const Arc> pre(TransId t) const { return pre_.at(t.index); }
    std::span<const Arc> post(TransId t) const { return post_.at(t.index); }
    Weight pre(TransId t, PlaceId p) const;
    Weight post(TransId t, PlaceId p) const;

    /// Transitions with an arc into p (the preset of p).
    std::span<const TransId> producers(PlaceId p) const { return producers_.at(p.index); }
    /// Transitions with an arc out of p (the postset of p).
    std::span<const TransId> consumers(PlaceId p) const { return consumers_.at(p.index); }

    const Marking& initial_marking() const { return m0_; }
    Tokens initial(PlaceId p) const { return m0_.get(p); }

    /// Post(t) - Pre(t).
    Displacement delta(TransId t) const;

    void check(PlaceId p) const;
    void check(TransId t) const;

    /// Same identifiers, weights and initial marking (declaration order ignored).
    bool isomorphic(const Net& other) const;

private:
    friend class NetBuilder;

    std::string name_;
    std::vector<std::string> place_names_;
    std::vector<std::string> transition_names_;
    std::unordered_map<std::string, std::uint32_t> place_index_;
    std::unordered_map<std::string, std::uint32_t> transition_index_;
    std::vector<std::vector<Arc>> pre_;
    std::vector<std::vector<Arc>> post_;
    std::vector<std::vector<TransId>> producers_;
    std::vector<std::vector<TransId>> consumers_;
    Marking m0_;
};

class NetBuilder {
public:
    explicit NetBuilder(std::string name = "net");

    /// Returns the existing place when the name is already declared.
    PlaceId place(std::string_view name);
    bool has_place(std::string_view name) const;
    void set_initial(PlaceId p, Tokens tokens);

    /// Throws Error on a duplicate transition name or a place/transition clash.
    TransId add_transition(std::string_view name);
    bool has_transition(std::string_view name) const;

    /// Repeated arcs between the same pair accumulate.
    void add_input(TransId t, PlaceId p, Weight w);
    void add_output(TransId t, PlaceId p, Weight w);

    Net build() const;

private:
    std::string name_;
    std::vector<std::string> places_;
    std::vector<std::string> transitions_;
    std::unordered_map<std::string, std::uint32_t> place_index_;
    std::unordered_map<std::string, std::uint32_t> transition_index_;
    std::vector<std::vector<std::pair<std::uint32_t, Weight>>> pre_;
    std::vector<std::vector<std::pair<std::uint32_t, Weight>>> post_;
    std::vector<Tokens> m0_;
};

bool enabled(const Net& net, const Marking& m, TransId t);
/// Throws NotEnabledError naming the first blocking place.
Marking fire(const Net& net, const Marking& m, TransId t);
Displacement displacement(const Net& net, std::span<const TransId> sigma);
/// Pointwise-minimal marking from which sigma is firable.
Marking hurdle(const Net& net, std::span<const TransId> sigma);
/// Whether sigma can be fired in order starting at m.
bool firable(const Net& net, const Marking& m, std::span<const TransId> sigma);

/// a = p1 (+) p2 (+) ...: initial marking, pre and post of a are the sums over parts.
bool is_sum_place(const Net& net, PlaceId a, std::span<const PlaceId> parts);

bool covers(const Marking& m, const Marking& lower);

/// Net-level edits used by the reduction rules. They keep declaration order.
Net remove_transitions(const Net& net, std::span<const TransId> removed);
Net remove_places(const Net& net, std::span<const PlaceId> removed);
Net with_initial_marking(const Net& net, const Marking& m0);

/// "p0:1 q:2"; zero entries are omitted.
std::string format_marking(const Net& net, const Marking& m);

}  // namespace pnc
