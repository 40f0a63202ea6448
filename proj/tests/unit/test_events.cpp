#include "gazeplan/error.hpp"
#include "gazeplan/events/keywords.hpp"
#include "gazeplan/events/scenario_io.hpp"

#include "scenario_gen.hpp"
#include "test_paths.hpp"

#include <gtest/gtest.h>

using namespace gazeplan;

namespace {

std::vector<WordTiming> words_of(std::initializer_list<const char*> texts) {
    std::vector<WordTiming> out;
    std::int64_t t = 0;
    for (const char* w : texts) {
        out.push_back(WordTiming{w, t, t + 200});
        t += 200;
    }
    return out;
}

Target card(const char* id, std::vector<std::string> aliases) {
    return Target{TargetId{id}, TargetKind::TaskObject, {0, -0.3, 0.6}, id, std::move(aliases)};
}

const char* kHeader = R"({"seed": 3, "targets": [
  {"id": "user", "kind": "user", "position": [0, 0, 1]},
  {"id": "zebra", "kind": "task_object", "position": [0.2, -0.3, 0.6], "label": "Zebra", "aliases": ["zebra"]}
], "timeline": )";

std::string with_timeline(const std::string& timeline) { return std::string(kHeader) + timeline + "}"; }

}  // namespace

TEST(Keywords, MatchesWholeTokensCaseInsensitively) {
    const std::vector<Target> targets{card("zebra", {"zebra"})};
    const auto matches = match_keywords(words_of({"the", "Zebra,", "is", "fast"}), targets);
    ASSERT_EQ(matches.size(), 1u);
    EXPECT_EQ(matches[0], (KeywordMatch{TargetId{"zebra"}, 1}));
}

TEST(Keywords, NoMatchAndNoStemming) {
    const std::vector<Target> targets{card("zebra", {"zebra"})};
    EXPECT_TRUE(match_keywords(words_of({"the", "lion", "runs"}), targets).empty());
    EXPECT_TRUE(match_keywords(words_of({"zebras"}), targets).empty());
}

TEST(Keywords, FirstRegisteredTargetWinsAWord) {
    const std::vector<Target> targets{card("a", {"stripes"}), card("b", {"stripes"})};
    const auto matches = match_keywords(words_of({"stripes", "stripes"}), targets);
    ASSERT_EQ(matches.size(), 2u);
    for (const auto& m : matches) EXPECT_EQ(m.target, TargetId{"a"});
    EXPECT_EQ(matches[1].word_index, 1u);
}

TEST(Keywords, LabelsMatchToo) {
    Target t = card("c1", {});
    t.label = "Giraffe";
    const std::vector<Target> targets{t};
    EXPECT_EQ(match_keywords(words_of({"giraffe"}), targets).size(), 1u);
}

TEST(Keywords, IndicesStayInBoundsAndOrderIndependent) {
    const auto words = words_of({"lion", "and", "zebra", "and", "hippo", "lion"});
    std::vector<Target> targets{card("zebra", {"zebra"}), card("lion", {"lion"}), card("hippo", {"hippo"})};
    const auto forward = match_keywords(words, targets);
    std::reverse(targets.begin(), targets.end());
    const auto backward = match_keywords(words, targets);
    EXPECT_EQ(forward, backward);
    for (const auto& m : forward) EXPECT_LT(m.word_index, words.size());
}

TEST(ScenarioIo, MinimalFile) {
    const Scenario s = parse_scenario(read_test_file("minimal.json"));
    EXPECT_EQ(s.targets.size(), 2u);
    EXPECT_EQ(s.targets.back().kind, TargetKind::Environment);
    ASSERT_EQ(s.timeline.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<RobotListeningEvent>(s.timeline[0].event));
}

TEST(ScenarioIo, ZebraScenarioContents) {
    const Scenario s = parse_scenario(read_test_file("zebra_reference.json"));
    ASSERT_EQ(s.timeline.size(), 2u);
    const auto& speaking = std::get<RobotSpeakingEvent>(s.timeline[0].event);
    EXPECT_TRUE(speaking.yielding);
    EXPECT_EQ(speaking.duration_ms(), 5000);
    const auto& user = std::get<UserSpeakingEvent>(s.timeline[1].event);
    const bool mentions = std::any_of(user.recognized_words.begin(), user.recognized_words.end(),
                                      [](const WordTiming& w) { return w.text == "zebra"; });
    EXPECT_TRUE(mentions);
    EXPECT_GT(s.timeline[1].t_ms, s.timeline[0].t_ms);
}

TEST(ScenarioIo, UnknownCardIsAValidationErrorAtThatEvent) {
    const auto text = with_timeline(R"([
      {"t_ms": 0, "type": "robot_listening", "duration_ms": 1000},
      {"t_ms": 200, "type": "target_moved", "target": "lion",
       "waypoints": [{"offset_ms": 0, "position": [0, 0, 1]}, {"offset_ms": 400, "position": [0.1, 0, 1]}]}
    ])");
    try {
        parse_scenario(text);
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.event_index(), 1u);
    }
}

TEST(ScenarioIo, SyntaxErrorsCarryLineAndColumn) {
    try {
        parse_scenario("{\n  \"seed\": 1,\n  \"targets\": [,]\n}");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_GT(e.column(), 0u);
    }
}

TEST(ScenarioIo, RejectsUnknownFieldsAndBadInvariants) {
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "robot_listening", "duration_ms": 100, "mood": 1}])")),
                 ValidationError);
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "robot_listening", "duration_ms": 0}])")),
                 ValidationError);
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 400, "type": "robot_listening", "duration_ms": 100},
                                                  {"t_ms": 200, "type": "robot_listening", "duration_ms": 100}])")),
                 ValidationError);
    // Overlapping words.
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "robot_speaking", "utterance": "a b",
        "yielding": false, "words": [{"text": "a", "start_ms": 0, "end_ms": 300}, {"text": "b", "start_ms": 200, "end_ms": 400}]}])")),
                 ValidationError);
    // Speaker must be a user.
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "user_speaking", "speaker": "zebra", "duration_ms": 500}])")),
                 ValidationError);
    // Waypoints must start at offset 0.
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "target_moved", "target": "zebra",
        "waypoints": [{"offset_ms": 100, "position": [0, 0, 1]}, {"offset_ms": 400, "position": [0.1, 0, 1]}]}])")),
                 ValidationError);
    // Add of a known id, remove of an unknown one.
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "target_add",
        "target": {"id": "zebra", "kind": "task_object", "position": [0, 0, 1]}}])")),
                 ValidationError);
    EXPECT_THROW(parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "target_remove", "target": {"id": "lion"}}])")),
                 ValidationError);
}

TEST(ScenarioIo, DefaultAddresseesAreAllUsers) {
    const Scenario s = parse_scenario(with_timeline(R"([{"t_ms": 0, "type": "robot_listening", "duration_ms": 600}])"));
    const auto& ev = std::get<RobotListeningEvent>(s.timeline[0].event);
    EXPECT_EQ(ev.addressees, std::vector<TargetId>{TargetId{"user"}});
}

TEST(ScenarioIo, LifecycleOrderWithinTheSameTick) {
    // A card added in the same tick as its first drag is valid.
    const Scenario s = parse_scenario(with_timeline(R"([
      {"t_ms": 0, "type": "target_moved", "target": "lion",
       "waypoints": [{"offset_ms": 0, "position": [0, -0.3, 0.6]}, {"offset_ms": 400, "position": [0.1, -0.3, 0.6]}]},
      {"t_ms": 100, "type": "target_add", "target": {"id": "lion", "kind": "task_object", "position": [0, -0.3, 0.6], "aliases": ["lion"]}}
    ])"));
    EXPECT_EQ(s.timeline.size(), 2u);
}

TEST(ScenarioIo, RoundTripProperty) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        gazeplan::testing::GeneratorOptions options;
        options.min_duration_ms = 20000;
        const Scenario original = gazeplan::testing::random_conversation(seed, options);
        const std::string text = serialize_scenario(original);
        const Scenario parsed = parse_scenario(text);
        ASSERT_EQ(parsed, original) << "seed " << seed;
        EXPECT_EQ(serialize_scenario(parsed), text);
    }
}

TEST(ScenarioIo, CommittedScenariosRoundTrip) {
    for (const char* name : {"minimal.json", "zebra_reference.json", "glance_heavy.json", "long_listening.json"}) {
        const Scenario s = parse_scenario(read_test_file(name));
        EXPECT_EQ(parse_scenario(serialize_scenario(s)), s) << name;
    }
}

TEST(Events, PositionAlongInterpolatesAndClamps) {
    const std::vector<Waypoint> path{{0, {0, 0, 1}}, {1000, {1, 0, 1}}, {1000, {2, 0, 1}}, {2000, {2, 1, 1}}};
    EXPECT_DOUBLE_EQ(position_along(path, -5).x, 0.0);
    EXPECT_DOUBLE_EQ(position_along(path, 500).x, 0.5);
    EXPECT_DOUBLE_EQ(position_along(path, 1500).y, 0.5);
    EXPECT_DOUBLE_EQ(position_along(path, 9000).y, 1.0);
}
