#pragma once

#include "gazeplan/events/events.hpp"

#include <cstdint>

namespace gazeplan::testing {

struct GeneratorOptions {
    std::int64_t min_duration_ms = 60000;
    int max_users = 2;
    int max_cards = 5;
    bool lifecycle_events = true;
};

/// Random but valid card-game conversation: alternating robot turns,
/// listening, user turns with recognized words, card drags and the odd card
/// added or removed. Same seed, same scenario.
Scenario random_conversation(std::uint64_t seed, const GeneratorOptions& options = {});

}  // namespace gazeplan::testing
