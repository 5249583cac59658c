#pragma once

#include "pnc/linear.hpp"
#include "pnc/net.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pnc {

enum class RuleKind { T, R, A, L, F, D };

char rule_letter(RuleKind kind);
std::optional<RuleKind> parse_rule_kind(std::string_view text);

/// Witness that `place` is redundant: v(p).m(p) = sum v(q).m(q) + offset over the support.
struct RedundantPlaceCertificate {
    PlaceId place;
    std::vector<PlaceId> support;
    std::map<PlaceId, std::uint64_t> valuation;  // defined on support and place
    Tokens offset = 0;
};

/// Evaluates all three clauses of the redundant-place definition.
bool check_certificate(const Net& net, const RedundantPlaceCertificate& cert);
LinearConstraint certificate_constraint(const Net& net, const RedundantPlaceCertificate& cert);

/// Places and transitions are referred to by name: step records outlive the
/// intermediate nets whose dense indices they would otherwise depend on.
struct ReductionStep {
    RuleKind kind = RuleKind::T;
    std::optional<LinearConstraint> constraint;
    std::vector<std::string> removed_places;
    std::vector<std::string> removed_transitions;
    std::optional<std::string> introduced_place;
    std::uint64_t count_increment = 0;
    /// T: the replacing sequence (empty for identities). Informational.
    std::vector<std::string> witness;
};

/// "R |- p19 = p20", "T |- t12 removed", "F |- t0 fired".
std::string format_step(const ReductionStep& step);

struct ReductionTrace {
    Net initial;
    std::vector<ReductionStep> steps;
    Net residual;

    LinSystem system() const { return system_prefix(steps.size()); }
    /// Constraints of the first n steps.
    LinSystem system_prefix(std::size_t n) const;
    /// initial, the net after each step, ..., residual (steps.size() + 1 nets).
    std::vector<Net> nets() const;
};

enum class Strategy { Compact, Clean };

struct ReductionLimits {
    std::size_t max_seq_len = 2;
    std::uint64_t coeff_bound = 4;
    std::size_t size_limit = 50;
    std::size_t max_loop = 8;
    /// Search nodes per general redundant-place query.
    std::size_t place_search_budget = 20000;
    /// When set, candidate scans and the local rule order are shuffled.
    std::optional<std::uint64_t> seed;
};

std::optional<FiringSequence> find_redundant_transition(const Net& net, TransId t, std::size_t max_len);
std::optional<RedundantPlaceCertificate> find_redundant_place(const Net& net, PlaceId p,
                                                              std::uint64_t coeff_bound,
                                                              std::size_t size_limit);

struct ChainCandidate {
    PlaceId p;
    PlaceId q;
    TransId t;
};
std::optional<ChainCandidate> find_chain_agglomeration(const Net& net);
std::optional<std::vector<PlaceId>> find_loop_agglomeration(const Net& net, std::size_t max_n);

/// Replaces `parts` by a place `fresh` holding their sum. The new place takes the
/// declaration slot of the earliest part.
Net apply_agglomeration(const Net& net, std::span<const PlaceId> parts, const std::string& fresh);

struct SourceSink {
    PlaceId p;
    TransId t;
};
std::optional<SourceSink> find_source_sink(const Net& net);
std::optional<TransId> find_fire_once(const Net& net);
std::vector<TransId> find_dead_transitions(const Net& net);

/// Applies a recorded step. Steps read back from text lack the derived fields
/// (removed places, the sink transition of L); the mutable overload fills them in.
Net apply_step(const Net& net, ReductionStep& step);
Net apply_step(const Net& net, const ReductionStep& step);

/// Applies steps in order from `initial`; throws Error on a step that does not fit.
ReductionTrace replay(const Net& initial, std::vector<ReductionStep> steps);

ReductionTrace reduce(const Net& net, Strategy strategy, const ReductionLimits& limits = {});

}  // namespace pnc
