#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "talkprofiler/corpus.hpp"
#include "talkprofiler/nonlex.hpp"

namespace talkprofiler {

// Generation profile for one category's speakers. Rates are per word slot
// (overlap: per turn); at each slot the annotations are sampled in a fixed
// order (particle categories, laughter, short pause, long pause, truncation)
// before the word itself, so equal rates give identical event statistics.
struct CategoryProfile {
  std::vector<std::pair<std::string, double>> word_distribution;  // sums to 1
  std::array<double, kParticleCategoryCount> particle_rates{};
  double laughter_rate = 0.0;
  double short_pause_rate = 0.0;
  double long_pause_rate = 0.0;
  double truncation_rate = 0.0;
  double overlap_rate = 0.0;
};

// A synthetic corpus pairs speaker i of category A with speaker i of
// category B in one conversation of alternating turns. Category A speakers
// are female, age 75; category B male, age 16, so the corpus is usable under
// both schemes.
struct SynthSpec {
  std::size_t speakers_per_category = 0;
  std::size_t turns_per_speaker = 0;
  std::size_t min_turn_tokens = 8;
  std::size_t max_turn_tokens = 12;
  std::array<CategoryProfile, 2> profiles;
  std::uint64_t seed = 0;
};

// InvalidSpec on zero counts, distributions off 1 by more than 1e-9, rates
// outside [0,1], empty surfaces, or an inverted token range.
void validate_spec(const SynthSpec& spec);

// Deterministic generation: the same spec yields a structurally identical
// corpus, and write_corpus emits byte-identical files.
Corpus generate_corpus(const SynthSpec& spec);

// Writes speakers.json plus one <conversation id>.json per conversation.
// Creates `dir` if needed; Io on failure.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Streams the corpus straight to disk, one conversation at a time; emits the
// same bytes as write_corpus(generate_corpus(spec), dir) without holding the
// corpus in memory.
void generate_to_dir(const SynthSpec& spec, const std::filesystem::path& dir);

// Presets. `planted` gives the categories disjoint marker words on a shared
// common vocabulary; `null` gives them identical distributions; `nonlex`
// gives identical lexical distributions but different laughter and particle
// rates; `mixed` varies everything (rates drawn from the seed) and is the
// stress/statistics workload.
SynthSpec planted_spec(std::size_t speakers_per_category,
                       std::size_t turns_per_speaker, std::uint64_t seed);
SynthSpec null_spec(std::size_t speakers_per_category,
                    std::size_t turns_per_speaker, std::uint64_t seed);
SynthSpec nonlex_spec(std::size_t speakers_per_category,
                      std::size_t turns_per_speaker, std::uint64_t seed);
SynthSpec mixed_spec(std::size_t speakers_per_category,
                     std::size_t turns_per_speaker, std::uint64_t seed);

SynthSpec spec_by_name(std::string_view preset,
                       std::size_t speakers_per_category,
                       std::size_t turns_per_speaker, std::uint64_t seed);

}  // namespace talkprofiler
