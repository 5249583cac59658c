#pragma once

#include "pnc/net.hpp"
#include "pnc/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pnc::testing {

struct CorpusNet {
    std::string name;
    Net net;
    /// Rule letters the compact strategy is expected to use on this net.
    std::string expected_rules;
};

/// Small nets built by hand, one or more per reduction rule.
std::vector<CorpusNet> hand_corpus();

/// Random net whose transitions never produce more tokens than they consume,
/// so the token total bounds every place.
Net random_bounded_net(std::uint64_t seed);

/// Hand-built nets followed by `random_count` random ones.
std::vector<CorpusNet> corpus(std::size_t random_count = 20);

Net parse(const std::string& text);
Net load_fixture(const std::string& file);

/// C(x+k-1, k-1) by counting k-slot distributions one by one.
BigInt brute_nos(unsigned k, unsigned x);

}  // namespace pnc::testing
