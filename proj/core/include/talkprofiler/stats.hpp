#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "talkprofiler/corpus.hpp"

namespace talkprofiler {

// Per-category corpus properties. Tokens follow the word_count rule (Word +
// Particle events, no stopword removal); types are distinct token surfaces
// over the whole subcorpus. Speaker count comes from the manifest, token and
// turn counts from the transcripts.
struct CategoryStatistics {
  CategoryLabel category = CategoryLabel::Female;
  std::uint64_t speakers = 0;
  std::uint64_t word_tokens = 0;
  std::uint64_t turns = 0;
  std::uint64_t distinct_types = 0;
  double avg_turn_length = 0.0;  // word_tokens / turns, 0 when no turns
  double ttr = 0.0;              // distinct_types / word_tokens, 0 when empty
};

// One entry per category in scheme order. EmptyCategory if a category has
// no speakers in the manifest.
std::vector<CategoryStatistics> compute_stats(const Corpus& corpus,
                                              Scheme scheme);

// Header (byte exact): category,speakers,word_tokens,turns,avg_turn_length,ttr
std::string stats_csv(std::span<const CategoryStatistics> rows);

}  // namespace talkprofiler
