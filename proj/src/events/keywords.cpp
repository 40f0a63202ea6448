#include "gazeplan/events/keywords.hpp"

#include <algorithm>
#include <cctype>

namespace gazeplan {

std::string normalize_token(std::string_view token) {
    const auto is_word_char = [](unsigned char c) { return std::isalnum(c) != 0; };
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && !is_word_char(static_cast<unsigned char>(token[begin]))) ++begin;
    while (end > begin && !is_word_char(static_cast<unsigned char>(token[end - 1]))) --end;
    std::string out(token.substr(begin, end - begin));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<KeywordMatch> match_keywords(std::span<const WordTiming> words,
                                         std::span<const Target> targets) {
    std::vector<std::vector<std::string>> keys;
    keys.reserve(targets.size());
    for (const auto& target : targets) {
        std::vector<std::string> k;
        if (std::string label = normalize_token(target.label); !label.empty()) k.push_back(std::move(label));
        for (const auto& alias : target.aliases) k.push_back(normalize_token(alias));
        keys.push_back(std::move(k));
    }

    std::vector<KeywordMatch> matches;
    for (std::size_t w = 0; w < words.size(); ++w) {
        const std::string token = normalize_token(words[w].text);
        if (token.empty()) continue;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (std::find(keys[t].begin(), keys[t].end(), token) != keys[t].end()) {
                matches.push_back(KeywordMatch{targets[t].id, w});
                break;
            }
        }
    }
    return matches;
}

}  // namespace gazeplan
