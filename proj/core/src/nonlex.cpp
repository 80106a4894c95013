#include "talkprofiler/nonlex.hpp"

#include <algorithm>

#include "talkprofiler/csv.hpp"
#include "talkprofiler/errors.hpp"

namespace talkprofiler {
namespace {

struct InventoryEntry {
  std::string_view surface;
  ParticleCategory category;
};

constexpr InventoryEntry kInventory[] = {
    {"mm", ParticleCategory::PositiveResponseContinuer},
    {"mhm", ParticleCategory::PositiveResponseContinuer},
    {"mm_hm", ParticleCategory::PositiveResponseContinuer},
    {"aha", ParticleCategory::PositiveResponseContinuer},
    {"uhu", ParticleCategory::PositiveResponseContinuer},
    {"uhuh", ParticleCategory::PositiveResponseContinuer},
    {"uh_huh", ParticleCategory::PositiveResponseContinuer},
    {"hmm", ParticleCategory::TurnStalling},
    {"hmmm", ParticleCategory::TurnStalling},
    {"um", ParticleCategory::TurnManagement},
    {"er", ParticleCategory::TurnManagement},
    {"erm", ParticleCategory::TurnManagement},
    {"hm?", ParticleCategory::RepairInitiator},
    {"oh", ParticleCategory::ChangeOfState},
};

constexpr std::string_view kSurfaces[] = {
    "mm", "mhm", "mm_hm", "aha", "uhu",  "uhuh", "uh_huh",
    "hmm", "hmmm", "um",    "er",  "erm", "hm?",  "oh",
};

}  // namespace

std::string_view to_string(ParticleCategory category) {
  switch (category) {
    case ParticleCategory::PositiveResponseContinuer:
      return "positive_response_continuer";
    case ParticleCategory::TurnStalling: return "turn_stalling";
    case ParticleCategory::TurnManagement: return "turn_management";
    case ParticleCategory::RepairInitiator: return "repair_initiator";
    case ParticleCategory::ChangeOfState: return "change_of_state";
  }
  return "?";
}

std::optional<ParticleCategory> classify_particle(std::string_view surface) {
  for (const InventoryEntry& entry : kInventory) {
    if (entry.surface == surface) return entry.category;
  }
  return std::nullopt;
}

std::span<const std::string_view> particle_inventory() { return kSurfaces; }

std::string_view to_string(NonLexicalFeature feature) {
  switch (feature) {
    case NonLexicalFeature::PositiveResponseContinuer:
      return "positive_response_continuer";
    case NonLexicalFeature::TurnStalling: return "turn_stalling";
    case NonLexicalFeature::TurnManagement: return "turn_management";
    case NonLexicalFeature::RepairInitiator: return "repair_initiator";
    case NonLexicalFeature::ChangeOfState: return "change_of_state";
    case NonLexicalFeature::Laughter: return "laughter";
    case NonLexicalFeature::ShortPause: return "short_pause";
    case NonLexicalFeature::Truncation: return "truncation";
    case NonLexicalFeature::Overlap: return "overlap";
  }
  return "?";
}

std::array<NonLexicalFeature, kNonLexicalFeatureCount> nonlexical_features() {
  return {NonLexicalFeature::PositiveResponseContinuer,
          NonLexicalFeature::TurnStalling,
          NonLexicalFeature::TurnManagement,
          NonLexicalFeature::RepairInitiator,
          NonLexicalFeature::ChangeOfState,
          NonLexicalFeature::Laughter,
          NonLexicalFeature::ShortPause,
          NonLexicalFeature::Truncation,
          NonLexicalFeature::Overlap};
}

NonLexicalCounts& NonLexicalCounts::operator+=(const NonLexicalCounts& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  word_tokens += other.word_tokens;
  turns += other.turns;
  return *this;
}

NonLexicalCounts count_nonlexical(const Turn& turn) {
  NonLexicalCounts out;
  out.turns = 1;
  bool overlapped = false;
  for (const Event& event : turn.events) {
    switch (event.kind) {
      case EventKind::Word:
        ++out.word_tokens;
        break;
      case EventKind::Particle: {
        ++out.word_tokens;
        if (const auto category = classify_particle(event.surface)) {
          ++out.counts[static_cast<std::size_t>(*category)];
        }
        break;
      }
      case EventKind::Laughter:
        ++out.counts[static_cast<std::size_t>(NonLexicalFeature::Laughter)];
        break;
      case EventKind::Pause:
        if (event.pause_class == PauseClass::Short) {
          ++out.counts[static_cast<std::size_t>(
              NonLexicalFeature::ShortPause)];
        }
        break;
      case EventKind::Truncation:
        ++out.counts[static_cast<std::size_t>(NonLexicalFeature::Truncation)];
        break;
      case EventKind::OverlapMark:
        overlapped = true;
        break;
    }
  }
  if (overlapped) {
    ++out.counts[static_cast<std::size_t>(NonLexicalFeature::Overlap)];
  }
  return out;
}

NonLexicalCounts count_nonlexical(std::span<const Turn* const> turns) {
  NonLexicalCounts out;
  for (const Turn* turn : turns) out += count_nonlexical(*turn);
  return out;
}

double rate_of(const NonLexicalCounts& counts, NonLexicalFeature feature) {
  const auto tally = counts.counts[static_cast<std::size_t>(feature)];
  const auto denominator =
      feature == NonLexicalFeature::Overlap ? counts.turns : counts.word_tokens;
  if (denominator == 0) return 0.0;
  return static_cast<double>(tally) / static_cast<double>(denominator);
}

std::array<double, kNonLexicalFeatureCount> nonlexical_rates(
    const NonLexicalCounts& counts) {
  std::array<double, kNonLexicalFeatureCount> out{};
  for (const NonLexicalFeature feature : nonlexical_features()) {
    out[static_cast<std::size_t>(feature)] = rate_of(counts, feature);
  }
  return out;
}

std::vector<ProfileRow> nonlex_profile(const Corpus& corpus, Scheme scheme) {
  const auto categories = scheme_categories(scheme);
  std::array<NonLexicalCounts, 2> tallies;
  std::array<bool, 2> seen{};
  for (const auto& [id, speaker] : corpus.speakers) {
    if (const auto category = category_of(speaker, scheme)) {
      seen[*category == categories[1] ? 1 : 0] = true;
    }
  }
  for (std::size_t side = 0; side < 2; ++side) {
    if (!seen[side]) {
      raise(ErrorKind::EmptyCategory,
            "no speakers in category " +
                std::string(to_string(categories[side])));
    }
  }
  for (const Conversation& conversation : corpus.conversations) {
    for (const Turn& turn : conversation.turns) {
      const auto speaker = corpus.speakers.find(turn.speaker_id);
      if (speaker == corpus.speakers.end()) continue;
      const auto category = category_of(speaker->second, scheme);
      if (!category) continue;
      tallies[*category == categories[1] ? 1 : 0] += count_nonlexical(turn);
    }
  }

  std::vector<ProfileRow> rows;
  rows.reserve(2 * kNonLexicalFeatureCount);
  for (const NonLexicalFeature feature : nonlexical_features()) {
    const std::array<double, 2> rates = {rate_of(tallies[0], feature),
                                         rate_of(tallies[1], feature)};
    // Equal rates put the scheme's first category at rank 1.
    const std::size_t top = rates[1] > rates[0] ? 1 : 0;
    for (std::size_t side = 0; side < 2; ++side) {
      ProfileRow row;
      row.feature = feature;
      row.category = categories[side];
      row.count = tallies[side].counts[static_cast<std::size_t>(feature)];
      row.rel_freq = rates[side];
      row.rank = side == top ? 1 : 2;
      row.pct_of_highest =
          rates[top] > 0.0 ? 100.0 * rates[side] / rates[top] : 100.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string nonlex_csv(std::span<const ProfileRow> rows) {
  std::string out = "feature,category,count,rel_freq,rank,pct_of_highest\n";
  for (const ProfileRow& row : rows) {
    out.append(to_string(row.feature));
    out.push_back(',');
    out.append(to_string(row.category));
    out.push_back(',');
    out.append(std::to_string(row.count));
    out.push_back(',');
    out.append(format_double(row.rel_freq));
    out.push_back(',');
    out.append(std::to_string(row.rank));
    out.push_back(',');
    out.append(format_double(row.pct_of_highest));
    out.push_back('\n');
  }
  return out;
}

}  // namespace talkprofiler
