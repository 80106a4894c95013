#include "talkprofiler/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "talkprofiler/errors.hpp"
#include "talkprofiler/nonlex.hpp"
#include "talkprofiler/parser.hpp"
#include "talkprofiler/rng.hpp"

namespace talkprofiler {

namespace {

std::string padded_id(char prefix, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%06zu", prefix, index);
  return buf;
}

// Cumulative-weight sampler over a word distribution.
class WordSampler {
 public:
  explicit WordSampler(
      const std::vector<std::pair<std::string, double>>& distribution) {
    cumulative_.reserve(distribution.size());
    double total = 0.0;
    for (const auto& [surface, weight] : distribution) {
      total += weight;
      cumulative_.push_back(total);
      surfaces_.push_back(surface);
    }
    total_ = total;
  }

  const std::string& sample(SplitMix64& rng) const {
    const double r = rng.next_double() * total_;
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    const std::size_t index =
        std::min<std::size_t>(it - cumulative_.begin(), surfaces_.size() - 1);
    return surfaces_[index];
  }

 private:
  std::vector<std::string> surfaces_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

// Surfaces of each particle category, for uniform surface choice once a
// category fires.
std::array<std::vector<std::string_view>, kParticleCategoryCount>
category_surfaces() {
  std::array<std::vector<std::string_view>, kParticleCategoryCount> result;
  for (const std::string_view surface : particle_inventory()) {
    const auto category = classify_particle(surface);
    result[static_cast<std::size_t>(*category)].push_back(surface);
  }
  return result;
}

struct Generator {
  const SynthSpec& spec;
  std::array<WordSampler, 2> samplers;
  std::array<std::vector<std::string_view>, kParticleCategoryCount> particles =
      category_surfaces();

  explicit Generator(const SynthSpec& s)
      : spec(s),
        samplers{WordSampler(s.profiles[0].word_distribution),
                 WordSampler(s.profiles[1].word_distribution)} {}

  // One conversation between speaker `pair` of each category, alternating
  // turns starting with category A. Each conversation draws from its own
  // seed stream so generation order never matters.
  Conversation make_conversation(std::size_t pair) const {
    Conversation conversation;
    conversation.id = padded_id('C', pair);
    const std::array<std::string, 2> speaker_ids = {padded_id('A', pair),
                                                    padded_id('B', pair)};
    conversation.speaker_ids = {speaker_ids[0], speaker_ids[1]};

    SplitMix64 rng(derive_seed(spec.seed, "conv:" + conversation.id));
    const std::uint64_t span =
        spec.max_turn_tokens - spec.min_turn_tokens + 1;
    conversation.turns.reserve(2 * spec.turns_per_speaker);
    for (std::size_t t = 0; t < 2 * spec.turns_per_speaker; ++t) {
      const std::size_t side = t % 2;
      const CategoryProfile& profile = spec.profiles[side];
      Turn turn;
      turn.speaker_id = speaker_ids[side];
      turn.index = static_cast<int>(t);
      const std::uint64_t slots =
          spec.min_turn_tokens + rng.next_below(span);
      turn.events.reserve(slots + 2);
      if (rng.next_double() < profile.overlap_rate) {
        turn.events.push_back(overlap_event());
      }
      for (std::uint64_t slot = 0; slot < slots; ++slot) {
        for (std::size_t c = 0; c < kParticleCategoryCount; ++c) {
          if (rng.next_double() < profile.particle_rates[c]) {
            const auto& surfaces = particles[c];
            const std::size_t pick = rng.next_below(surfaces.size());
            turn.events.push_back(
                particle_event(std::string(surfaces[pick])));
          }
        }
        if (rng.next_double() < profile.laughter_rate) {
          turn.events.push_back(laughter_event());
        }
        if (rng.next_double() < profile.short_pause_rate) {
          turn.events.push_back(pause_event(PauseClass::Short));
        }
        if (rng.next_double() < profile.long_pause_rate) {
          turn.events.push_back(pause_event(PauseClass::Long));
        }
        if (rng.next_double() < profile.truncation_rate) {
          const std::string& word = samplers[side].sample(rng);
          turn.events.push_back(truncation_event(
              word.substr(0, std::max<std::size_t>(1, word.size() / 2))));
        }
        turn.events.push_back(word_event(samplers[side].sample(rng)));
      }
      conversation.turns.push_back(std::move(turn));
    }
    return conversation;
  }

  SpeakerMap make_manifest() const {
    SpeakerMap speakers;
    for (std::size_t pair = 0; pair < spec.speakers_per_category; ++pair) {
      SpeakerProfile a;
      a.id = padded_id('A', pair);
      a.gender = Gender::Female;
      a.age = 75;
      SpeakerProfile b;
      b.id = padded_id('B', pair);
      b.gender = Gender::Male;
      b.age = 16;
      speakers.emplace(a.id, std::move(a));
      speakers.emplace(b.id, std::move(b));
    }
    return speakers;
  }
};

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    raise(ErrorKind::Io, "write failed for " + path.string());
  }
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    raise(ErrorKind::Io,
          "cannot create directory " + dir.string() + ": " + ec.message());
  }
}

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    raise(ErrorKind::InvalidSpec,
          std::string(name) + " rate must be within [0, 1]");
  }
}

// Shared 30-word conversational core, ordered by intended frequency.
const char* const kCommonWords[] = {
    "yeah", "know",  "like", "right", "well",  "think", "really", "good",
    "go",   "going", "got",  "get",   "one",   "time",  "people", "thing",
    "bit",  "see",   "say",  "said",  "mean",  "look",  "come",   "day",
    "home", "work",  "way",  "back",  "today", "nice"};

// Disjoint marker vocabularies, absent from the stopword list and the
// particle inventory.
const char* const kMarkersA[] = {"maple",   "otter", "willow", "juniper",
                                 "badger",  "bramble", "clover", "moss",
                                 "wren",    "alder"};
const char* const kMarkersB[] = {"granite", "heron", "basalt", "osprey",
                                 "shale",   "marten", "flint",  "cedar",
                                 "gorse",   "slate"};

// Zipf-like weights over the common words scaled to `mass`.
std::vector<std::pair<std::string, double>> common_distribution(double mass) {
  std::vector<std::pair<std::string, double>> words;
  double total = 0.0;
  for (std::size_t i = 0; i < std::size(kCommonWords); ++i) {
    const double weight = 1.0 / static_cast<double>(i + 1);
    words.emplace_back(kCommonWords[i], weight);
    total += weight;
  }
  for (auto& [surface, weight] : words) weight *= mass / total;
  return words;
}

void append_markers(std::vector<std::pair<std::string, double>>& words,
                    std::span<const char* const> markers, double mass) {
  const double each = mass / static_cast<double>(markers.size());
  for (const char* marker : markers) words.emplace_back(marker, each);
}

CategoryProfile base_profile() {
  CategoryProfile profile;
  profile.particle_rates = {0.010, 0.005, 0.015, 0.002, 0.008};
  profile.laughter_rate = 0.010;
  profile.short_pause_rate = 0.012;
  profile.long_pause_rate = 0.003;
  profile.truncation_rate = 0.004;
  profile.overlap_rate = 0.080;
  return profile;
}

SynthSpec base_spec(std::size_t speakers_per_category,
                    std::size_t turns_per_speaker, std::uint64_t seed) {
  SynthSpec spec;
  spec.speakers_per_category = speakers_per_category;
  spec.turns_per_speaker = turns_per_speaker;
  spec.seed = seed;
  return spec;
}

}  // namespace

void validate_spec(const SynthSpec& spec) {
  if (spec.speakers_per_category == 0) {
    raise(ErrorKind::InvalidSpec, "speakers_per_category must be positive");
  }
  if (spec.turns_per_speaker == 0) {
    raise(ErrorKind::InvalidSpec, "turns_per_speaker must be positive");
  }
  if (spec.min_turn_tokens == 0 ||
      spec.min_turn_tokens > spec.max_turn_tokens) {
    raise(ErrorKind::InvalidSpec,
          "turn token range must satisfy 1 <= min <= max");
  }
  for (const CategoryProfile& profile : spec.profiles) {
    if (profile.word_distribution.empty()) {
      raise(ErrorKind::InvalidSpec, "word distribution must not be empty");
    }
    double total = 0.0;
    for (const auto& [surface, weight] : profile.word_distribution) {
      if (surface.empty()) {
        raise(ErrorKind::InvalidSpec, "word surface must not be empty");
      }
      if (!(weight >= 0.0) || !std::isfinite(weight)) {
        raise(ErrorKind::InvalidSpec,
              "word weight must be finite and non-negative");
      }
      total += weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      raise(ErrorKind::InvalidSpec, "word distribution must sum to 1");
    }
    for (std::size_t c = 0; c < kParticleCategoryCount; ++c) {
      check_rate(profile.particle_rates[c], "particle");
    }
    check_rate(profile.laughter_rate, "laughter");
    check_rate(profile.short_pause_rate, "short pause");
    check_rate(profile.long_pause_rate, "long pause");
    check_rate(profile.truncation_rate, "truncation");
    check_rate(profile.overlap_rate, "overlap");
  }
}

Corpus generate_corpus(const SynthSpec& spec) {
  validate_spec(spec);
  Generator generator(spec);
  Corpus corpus;
  corpus.conversations.reserve(spec.speakers_per_category);
  for (std::size_t pair = 0; pair < spec.speakers_per_category; ++pair) {
    corpus.conversations.push_back(generator.make_conversation(pair));
  }
  corpus.speakers = generator.make_manifest();
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  ensure_directory(dir);
  for (const Conversation& conversation : corpus.conversations) {
    write_file(dir / (conversation.id + ".json"),
               serialize_conversation(conversation));
  }
  write_file(dir / "speakers.json", serialize_manifest(corpus.speakers));
}

void generate_to_dir(const SynthSpec& spec,
                     const std::filesystem::path& dir) {
  validate_spec(spec);
  ensure_directory(dir);
  Generator generator(spec);
  for (std::size_t pair = 0; pair < spec.speakers_per_category; ++pair) {
    const Conversation conversation = generator.make_conversation(pair);
    write_file(dir / (conversation.id + ".json"),
               serialize_conversation(conversation));
  }
  write_file(dir / "speakers.json",
             serialize_manifest(generator.make_manifest()));
}

SynthSpec planted_spec(std::size_t speakers_per_category,
                       std::size_t turns_per_speaker, std::uint64_t seed) {
  SynthSpec spec = base_spec(speakers_per_category, turns_per_speaker, seed);
  for (std::size_t side = 0; side < 2; ++side) {
    CategoryProfile profile = base_profile();
    profile.word_distribution = common_distribution(0.85);
    append_markers(profile.word_distribution,
                   side == 0 ? std::span<const char* const>(kMarkersA)
                             : std::span<const char* const>(kMarkersB),
                   0.15);
    spec.profiles[side] = std::move(profile);
  }
  return spec;
}

SynthSpec null_spec(std::size_t speakers_per_category,
                    std::size_t turns_per_speaker, std::uint64_t seed) {
  SynthSpec spec = base_spec(speakers_per_category, turns_per_speaker, seed);
  CategoryProfile profile = base_profile();
  profile.word_distribution = common_distribution(0.85);
  append_markers(profile.word_distribution, kMarkersA, 0.075);
  append_markers(profile.word_distribution, kMarkersB, 0.075);
  spec.profiles = {profile, profile};
  return spec;
}

SynthSpec nonlex_spec(std::size_t speakers_per_category,
                      std::size_t turns_per_speaker, std::uint64_t seed) {
  // Identical word distributions; the categories differ only in laughter,
  // continuer and stalling rates. Pause, truncation and overlap rates stay
  // equal so those features carry no signal.
  SynthSpec spec = null_spec(speakers_per_category, turns_per_speaker, seed);
  spec.profiles[0].particle_rates = {0.020, 0.010, 0.030, 0.002, 0.010};
  spec.profiles[0].laughter_rate = 0.010;
  spec.profiles[1].particle_rates = {0.100, 0.040, 0.030, 0.002, 0.010};
  spec.profiles[1].laughter_rate = 0.050;
  return spec;
}

SynthSpec mixed_spec(std::size_t speakers_per_category,
                     std::size_t turns_per_speaker, std::uint64_t seed) {
  SynthSpec spec = base_spec(speakers_per_category, turns_per_speaker, seed);
  SplitMix64 rng(derive_seed(seed, "mixed-spec"));
  spec.min_turn_tokens = 6;
  spec.max_turn_tokens = 8 + rng.next_below(8);
  for (std::size_t side = 0; side < 2; ++side) {
    CategoryProfile profile;
    auto words = common_distribution(1.0);
    for (auto& [surface, weight] : words) {
      weight *= 0.5 + rng.next_double();
    }
    append_markers(words,
                   side == 0 ? std::span<const char* const>(kMarkersA)
                             : std::span<const char* const>(kMarkersB),
                   0.15);
    double total = 0.0;
    for (const auto& [surface, weight] : words) total += weight;
    for (auto& [surface, weight] : words) weight /= total;
    profile.word_distribution = std::move(words);
    for (std::size_t c = 0; c < kParticleCategoryCount; ++c) {
      profile.particle_rates[c] = 0.04 * rng.next_double();
    }
    profile.laughter_rate = 0.04 * rng.next_double();
    profile.short_pause_rate = 0.03 * rng.next_double();
    profile.long_pause_rate = 0.01 * rng.next_double();
    profile.truncation_rate = 0.01 * rng.next_double();
    profile.overlap_rate = 0.20 * rng.next_double();
    spec.profiles[side] = std::move(profile);
  }
  return spec;
}

SynthSpec spec_by_name(std::string_view preset,
                       std::size_t speakers_per_category,
                       std::size_t turns_per_speaker, std::uint64_t seed) {
  if (preset == "planted") {
    return planted_spec(speakers_per_category, turns_per_speaker, seed);
  }
  if (preset == "null") {
    return null_spec(speakers_per_category, turns_per_speaker, seed);
  }
  if (preset == "nonlex") {
    return nonlex_spec(speakers_per_category, turns_per_speaker, seed);
  }
  if (preset == "mixed") {
    return mixed_spec(speakers_per_category, turns_per_speaker, seed);
  }
  raise(ErrorKind::InvalidSpec,
        "unknown preset '" + std::string(preset) +
            "' (expected planted, null, nonlex or mixed)");
}

}  // namespace talkprofiler
