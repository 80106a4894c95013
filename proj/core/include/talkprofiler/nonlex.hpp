#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "talkprofiler/corpus.hpp"

namespace talkprofiler {

// Functional classes of the conversational particles we track. Every surface
// in the inventory maps to exactly one class.
enum class ParticleCategory : std::uint8_t {
  PositiveResponseContinuer,  // mm, mhm, mm_hm, aha, uhu, uhuh, uh_huh
  TurnStalling,               // hmm, hmmm
  TurnManagement,             // um, er, erm
  RepairInitiator,            // hm?
  ChangeOfState,              // oh
};

inline constexpr std::size_t kParticleCategoryCount = 5;

std::string_view to_string(ParticleCategory category);

// Classifies a particle surface; bare "hm" is ambiguous between stalling and
// repair initiation, so it is left out of the inventory and returns nullopt.
std::optional<ParticleCategory> classify_particle(std::string_view surface);

// All surfaces in the inventory, for parser normalisation and tests.
std::span<const std::string_view> particle_inventory();

// Turn-taking features beyond particle classes.
enum class NonLexicalFeature : std::uint8_t {
  PositiveResponseContinuer,
  TurnStalling,
  TurnManagement,
  RepairInitiator,
  ChangeOfState,
  Laughter,
  ShortPause,
  Truncation,
  Overlap,
};

inline constexpr std::size_t kNonLexicalFeatureCount = 9;

std::string_view to_string(NonLexicalFeature feature);
std::array<NonLexicalFeature, kNonLexicalFeatureCount> nonlexical_features();

// Raw tallies over a sequence of turns. `word_tokens` counts Word plus
// Particle events; `turns` counts turns seen; `counts` are event tallies
// except Overlap, which is capped at one per turn.
struct NonLexicalCounts {
  std::array<std::uint64_t, kNonLexicalFeatureCount> counts{};
  std::uint64_t word_tokens = 0;
  std::uint64_t turns = 0;

  NonLexicalCounts& operator+=(const NonLexicalCounts& other);
};

NonLexicalCounts count_nonlexical(const Turn& turn);
NonLexicalCounts count_nonlexical(std::span<const Turn* const> turns);

// Rates: Overlap is per turn, everything else per word token. Zero
// denominators yield zero rates.
std::array<double, kNonLexicalFeatureCount> nonlexical_rates(
    const NonLexicalCounts& counts);

double rate_of(const NonLexicalCounts& counts, NonLexicalFeature feature);

// One row of the rank profile: for each feature the scheme's categories are
// ranked by rate; rank 1 is the highest and pct_of_highest is
// 100 * rate / highest rate (100.0 for rank 1; all-zero rates tie at 100).
struct ProfileRow {
  NonLexicalFeature feature = NonLexicalFeature::PositiveResponseContinuer;
  CategoryLabel category = CategoryLabel::Female;
  std::uint64_t count = 0;
  double rel_freq = 0.0;
  int rank = 1;
  double pct_of_highest = 100.0;
};

// Feature-major rows (9 features x 2 categories, categories in scheme
// order). EmptyCategory if a category has no speakers.
std::vector<ProfileRow> nonlex_profile(const Corpus& corpus, Scheme scheme);

// Header (byte exact): feature,category,count,rel_freq,rank,pct_of_highest
std::string nonlex_csv(std::span<const ProfileRow> rows);

}  // namespace talkprofiler
