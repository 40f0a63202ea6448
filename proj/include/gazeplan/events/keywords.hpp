#pragma once

#include "gazeplan/core/types.hpp"
#include "gazeplan/events/events.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazeplan {

struct KeywordMatch {
    TargetId target;
    std::size_t word_index = 0;

    friend bool operator==(const KeywordMatch&, const KeywordMatch&) = default;
};

/// Lowercase and strip leading/trailing non-alphanumeric characters.
std::string normalize_token(std::string_view token);

/// Whole-token, case-insensitive match of each word against each target's
/// label and aliases. A word matches at most one target; the earliest
/// target in `targets` wins. Results are ordered by word index.
std::vector<KeywordMatch> match_keywords(std::span<const WordTiming> words,
                                         std::span<const Target> targets);

}  // namespace gazeplan
