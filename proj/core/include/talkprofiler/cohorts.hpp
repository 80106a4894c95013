#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "talkprofiler/corpus.hpp"
#include "talkprofiler/tokenizer.hpp"

namespace talkprofiler {

enum class UnitKind : std::uint8_t { Speaker, Turn };

// One classification unit: either all turns of a speaker across the corpus
// (speaker-in-conversation aggregation is not separated: a speaker is one
// unit) or a single turn. Turn pointers reference the owning corpus.
struct Unit {
  UnitKind kind = UnitKind::Speaker;
  std::string id;          // speaker id, or "<speaker>#<conv>#<turn index>"
  std::string speaker_id;  // leakage grouping key
  CategoryLabel category = CategoryLabel::Female;
  std::vector<const Turn*> turns;
};

// All units of the requested kind whose speaker maps to a category of the
// scheme. Order: speakers by id; turns by conversation, then turn index.
// Speaker units with zero turns are not produced.
std::vector<Unit> make_units(const Corpus& corpus, Scheme scheme,
                             UnitKind kind);

// Word tokens (Word + Particle events) across the unit's turns.
std::uint64_t unit_word_tokens(const Unit& unit);

// Keeps units with at least `min_tokens` word tokens; order preserved.
// Intended for speaker units but defined uniformly.
std::vector<Unit> filter_min_talk(std::vector<Unit> units,
                                  std::uint64_t min_tokens);

// Drops turn units containing no Word or Particle event. Identity on
// speaker units.
std::vector<Unit> drop_empty_turn_units(std::vector<Unit> units);

// Downsamples the majority category uniformly (seeded) to the minority
// count. Requires exactly two categories with nonzero counts
// (EmptyCategory). Output keeps the input's relative order.
std::vector<Unit> balance(std::vector<Unit> units, std::uint64_t seed);

// Index-based split over a unit list. Indices refer to the input vector.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

// Stratified holdout. Per category, the test side receives
// floor(n * test_fraction + 0.5) units. When `group_by_speaker` is set (the
// default) all turn units of one speaker land on the same side, and the
// fraction applies to speakers rather than turns. TooFewUnits if either side
// of any category would be empty, or fewer than two categories are present.
Split holdout_split(const std::vector<Unit>& units, double test_fraction,
                    std::uint64_t seed, bool group_by_speaker = true);

// Stratified k-fold partition; every fold's size and per-category counts are
// within 1 of each other. Requires 2 <= k <= |units| (TooFewUnits).
// `group_by_speaker` assigns whole speaker groups to folds; the balance
// guarantee then holds over groups, not turns.
std::vector<std::vector<std::size_t>> kfold(const std::vector<Unit>& units,
                                            std::size_t k, std::uint64_t seed,
                                            bool group_by_speaker = true);

}  // namespace talkprofiler
