#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "talkprofiler/cohorts.hpp"
#include "talkprofiler/corpus.hpp"
#include "talkprofiler/errors.hpp"
#include "talkprofiler/rng.hpp"

using namespace talkprofiler;

namespace {

SpeakerProfile profile(std::string id, Gender gender,
                       std::optional<int> age = std::nullopt) {
  SpeakerProfile p;
  p.id = std::move(id);
  p.gender = gender;
  p.age = age;
  return p;
}

Turn make_turn(std::string speaker, int index, std::size_t words) {
  Turn turn;
  turn.speaker_id = std::move(speaker);
  turn.index = index;
  for (std::size_t i = 0; i < words; ++i) {
    turn.events.push_back(word_event("w" + std::to_string(i)));
  }
  return turn;
}

// f1 and f2 female, m1 male, u unspecified. Two conversations; f1 speaks in
// both.
Corpus small_corpus() {
  Corpus corpus;
  corpus.speakers = {{"f1", profile("f1", Gender::Female)},
                     {"f2", profile("f2", Gender::Female)},
                     {"m1", profile("m1", Gender::Male)},
                     {"u", profile("u", Gender::Unspecified)}};

  Conversation first;
  first.id = "c1";
  first.turns = {make_turn("f1", 0, 3), make_turn("m1", 1, 5),
                 make_turn("f1", 2, 2), make_turn("u", 3, 4)};
  first.speaker_ids = {"f1", "m1", "u"};

  Conversation second;
  second.id = "c2";
  second.turns = {make_turn("f2", 0, 7), make_turn("f1", 1, 1)};
  second.speaker_ids = {"f1", "f2"};

  corpus.conversations = {first, second};
  return corpus;
}

Unit bare_unit(std::string id, CategoryLabel category,
               std::string speaker = "") {
  Unit unit;
  unit.id = id;
  unit.speaker_id = speaker.empty() ? id : speaker;
  unit.category = category;
  return unit;
}

std::map<CategoryLabel, std::size_t> count_by_category(
    const std::vector<Unit>& units) {
  std::map<CategoryLabel, std::size_t> counts;
  for (const Unit& unit : units) counts[unit.category] += 1;
  return counts;
}

std::vector<Unit> random_units(SplitMix64& rng, std::size_t n_female,
                               std::size_t n_male,
                               std::size_t speakers = 0) {
  std::vector<Unit> units;
  for (std::size_t i = 0; i < n_female + n_male; ++i) {
    const CategoryLabel category =
        i < n_female ? CategoryLabel::Female : CategoryLabel::Male;
    std::string speaker =
        speakers == 0 ? "s" + std::to_string(i)
                      : "g" + std::to_string(rng.next_below(speakers)) +
                            (category == CategoryLabel::Female ? "f" : "m");
    Unit unit = bare_unit("u" + std::to_string(i), category, speaker);
    units.push_back(std::move(unit));
  }
  return units;
}

}  // namespace

TEST_CASE("speaker units aggregate all turns in corpus order") {
  const Corpus corpus = small_corpus();
  const auto units = make_units(corpus, Scheme::Gender, UnitKind::Speaker);
  REQUIRE(units.size() == 3);  // u has no category
  CHECK(units[0].id == "f1");
  CHECK(units[1].id == "f2");
  CHECK(units[2].id == "m1");
  CHECK(units[0].category == CategoryLabel::Female);
  CHECK(units[2].category == CategoryLabel::Male);

  REQUIRE(units[0].turns.size() == 3);
  CHECK(units[0].turns[0]->index == 0);  // c1 turns first
  CHECK(units[0].turns[1]->index == 2);
  CHECK(units[0].turns[2]->index == 1);  // then c2
  CHECK(unit_word_tokens(units[0]) == 6);
  CHECK(unit_word_tokens(units[2]) == 5);
}

TEST_CASE("turn units enumerate each turn separately") {
  const Corpus corpus = small_corpus();
  const auto units = make_units(corpus, Scheme::Gender, UnitKind::Turn);
  REQUIRE(units.size() == 5);  // u's turn is not categorizable
  CHECK(units[0].id == "f1#c1#0");
  CHECK(units[0].speaker_id == "f1");
  CHECK(units[1].id == "m1#c1#1");
  CHECK(units[2].id == "f1#c1#2");
  CHECK(units[3].id == "f2#c2#0");
  CHECK(units[4].id == "f1#c2#1");
  for (const Unit& unit : units) CHECK(unit.turns.size() == 1);
}

TEST_CASE("filter_min_talk keeps chatty units in order") {
  const Corpus corpus = small_corpus();
  auto units = make_units(corpus, Scheme::Gender, UnitKind::Speaker);
  units = filter_min_talk(std::move(units), 6);
  REQUIRE(units.size() == 2);
  CHECK(units[0].id == "f1");  // 6 tokens
  CHECK(units[1].id == "f2");  // 7 tokens; m1 has 5
}

TEST_CASE("drop_empty_turn_units removes annotation-only turns") {
  Corpus corpus = small_corpus();
  Turn empty;
  empty.speaker_id = "m1";
  empty.index = 4;
  empty.events = {laughter_event(), overlap_event(),
                  pause_event(PauseClass::Short)};
  corpus.conversations[0].turns.push_back(empty);

  auto units = make_units(corpus, Scheme::Gender, UnitKind::Turn);
  CHECK(units.size() == 6);
  units = drop_empty_turn_units(std::move(units));
  CHECK(units.size() == 5);
  for (const Unit& unit : units) CHECK(unit_word_tokens(unit) > 0);
}

TEST_CASE("balance equalizes category counts by downsampling") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_female = 1 + rng.next_below(40);
    const std::size_t n_male = 1 + rng.next_below(40);
    const auto units = random_units(rng, n_female, n_male);
    const auto balanced = balance(units, trial);

    const auto counts = count_by_category(balanced);
    const std::size_t expected = std::min(n_female, n_male);
    CHECK(counts.at(CategoryLabel::Female) == expected);
    CHECK(counts.at(CategoryLabel::Male) == expected);

    // The minority side survives untouched; order is preserved.
    std::vector<std::string> ids;
    for (const Unit& unit : balanced) ids.push_back(unit.id);
    CHECK(std::is_sorted(ids.begin(), ids.end(),
                         [&](const std::string& a, const std::string& b) {
                           const auto pos = [&](const std::string& id) {
                             for (std::size_t i = 0; i < units.size(); ++i) {
                               if (units[i].id == id) return i;
                             }
                             return units.size();
                           };
                           return pos(a) < pos(b);
                         }));

    // Same seed, same selection; the draw is seed-sensitive.
    const auto again = balance(units, trial);
    REQUIRE(again.size() == balanced.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].id == balanced[i].id);
    }
  }
}

TEST_CASE("balance rejects degenerate inputs") {
  std::vector<Unit> one_sided = {bare_unit("a", CategoryLabel::Female),
                                 bare_unit("b", CategoryLabel::Female)};
  CHECK_THROWS_AS(balance(one_sided, 1), Error);
  CHECK_THROWS_AS(balance({}, 1), Error);

  std::vector<Unit> mixed_schemes = {bare_unit("a", CategoryLabel::Female),
                                     bare_unit("b", CategoryLabel::Male),
                                     bare_unit("c", CategoryLabel::Old)};
  CHECK_THROWS_AS(balance(mixed_schemes, 1), Error);

  std::vector<Unit> equal = {bare_unit("a", CategoryLabel::Female),
                             bare_unit("b", CategoryLabel::Male)};
  const auto balanced = balance(equal, 9);
  REQUIRE(balanced.size() == 2);
  CHECK(balanced[0].id == "a");
  CHECK(balanced[1].id == "b");
}

TEST_CASE("holdout splits are disjoint, exhaustive and stratified") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_female = 3 + rng.next_below(30);
    const std::size_t n_male = 3 + rng.next_below(30);
    const double fraction = 0.15 + 0.5 * rng.next_double();
    const auto units = random_units(rng, n_female, n_male);
    const Split split = holdout_split(units, fraction, trial);

    std::set<std::size_t> seen;
    for (const std::size_t i : split.train) seen.insert(i);
    for (const std::size_t i : split.test) seen.insert(i);
    CHECK(seen.size() == units.size());
    CHECK(split.train.size() + split.test.size() == units.size());

    std::map<CategoryLabel, std::size_t> test_counts;
    for (const std::size_t i : split.test) {
      test_counts[units[i].category] += 1;
    }
    const auto share = [&](std::size_t n) {
      return static_cast<std::size_t>(
          std::floor(static_cast<double>(n) * fraction + 0.5));
    };
    CHECK(test_counts[CategoryLabel::Female] == share(n_female));
    CHECK(test_counts[CategoryLabel::Male] == share(n_male));

    const Split again = holdout_split(units, fraction, trial);
    CHECK(again.train == split.train);
    CHECK(again.test == split.test);
  }
}

TEST_CASE("holdout rejects empty sides and single categories") {
  SplitMix64 rng(0);
  const auto units = random_units(rng, 10, 10);
  CHECK_THROWS_AS(holdout_split(units, 0.01, 1), Error);  // test side empty
  CHECK_THROWS_AS(holdout_split(units, 0.99, 1), Error);  // train side empty
  CHECK_THROWS_AS(holdout_split(units, -0.1, 1), Error);
  CHECK_THROWS_AS(holdout_split(units, 1.5, 1), Error);

  const auto one_sided = random_units(rng, 10, 0);
  CHECK_THROWS_AS(holdout_split(one_sided, 0.3, 1), Error);
}

TEST_CASE("kfold partitions with balanced fold sizes") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_female = 5 + rng.next_below(40);
    const std::size_t n_male = 5 + rng.next_below(40);
    const std::size_t k = 2 + rng.next_below(8);
    const auto units = random_units(rng, n_female, n_male);
    const auto folds = kfold(units, k, trial);
    REQUIRE(folds.size() == k);

    std::set<std::size_t> seen;
    std::size_t smallest = units.size();
    std::size_t largest = 0;
    for (const auto& fold : folds) {
      smallest = std::min(smallest, fold.size());
      largest = std::max(largest, fold.size());
      for (const std::size_t i : fold) {
        CHECK(!seen.contains(i));
        seen.insert(i);
      }
    }
    CHECK(seen.size() == units.size());
    CHECK(largest - smallest <= 1);

    // Per-category fold counts stay within one of each other too.
    for (const CategoryLabel category :
         {CategoryLabel::Female, CategoryLabel::Male}) {
      std::size_t cat_min = units.size();
      std::size_t cat_max = 0;
      for (const auto& fold : folds) {
        std::size_t count = 0;
        for (const std::size_t i : fold) {
          count += units[i].category == category;
        }
        cat_min = std::min(cat_min, count);
        cat_max = std::max(cat_max, count);
      }
      CHECK(cat_max - cat_min <= 1);
    }

    CHECK(kfold(units, k, trial) == folds);
  }
}

TEST_CASE("kfold validates its arguments") {
  SplitMix64 rng(1);
  const auto units = random_units(rng, 3, 3);
  CHECK_THROWS_AS(kfold(units, 1, 0), Error);
  CHECK_THROWS_AS(kfold(units, 7, 0), Error);
  CHECK(kfold(units, 6, 0).size() == 6);
}

TEST_CASE("speaker grouping keeps a speaker's turns on one side") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    // ~8 speakers per category, several turn units each.
    const auto units = random_units(rng, 30 + rng.next_below(20),
                                    30 + rng.next_below(20), 8);

    const Split split = holdout_split(units, 0.3, trial, true);
    std::map<std::string, int> side_of;
    for (const std::size_t i : split.train) {
      side_of[units[i].speaker_id] = 0;
    }
    for (const std::size_t i : split.test) {
      const auto it = side_of.find(units[i].speaker_id);
      CHECK(it == side_of.end());
    }

    const auto folds = kfold(units, 4, trial, true);
    std::map<std::string, std::size_t> fold_of;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      for (const std::size_t i : folds[f]) {
        const auto [it, inserted] =
            fold_of.try_emplace(units[i].speaker_id, f);
        CHECK(it->second == f);
      }
    }
  }
}

TEST_CASE("ungrouped turn splits may cut through speakers") {
  // With grouping off the stratification guarantee applies to raw units.
  SplitMix64 rng(41);
  const auto units = random_units(rng, 40, 40, 4);
  const Split split = holdout_split(units, 0.25, 7, false);
  std::map<CategoryLabel, std::size_t> test_counts;
  for (const std::size_t i : split.test) {
    test_counts[units[i].category] += 1;
  }
  CHECK(test_counts[CategoryLabel::Female] == 10);
  CHECK(test_counts[CategoryLabel::Male] == 10);
}
