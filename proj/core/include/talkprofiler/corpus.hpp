#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace talkprofiler {

enum class EventKind : std::uint8_t {
  Word,
  Particle,
  Laughter,
  Pause,
  Truncation,
  OverlapMark,
};

enum class PauseClass : std::uint8_t {
  Short,  // 1-5 s
  Long,
};

// One transcribed event inside a turn. `surface` is set for Word, Particle
// and Truncation events only (lowercase); `pause_class` is meaningful for
// Pause events only and normalized to Short everywhere else.
struct Event {
  EventKind kind = EventKind::Word;
  PauseClass pause_class = PauseClass::Short;
  std::string surface;

  bool operator==(const Event&) const = default;
};

Event word_event(std::string surface);
Event particle_event(std::string surface);
Event laughter_event();
Event pause_event(PauseClass pause_class);
Event truncation_event(std::string surface);
Event overlap_event();

struct Turn {
  std::string speaker_id;
  int index = 0;  // position within the conversation
  std::vector<Event> events;

  bool operator==(const Turn&) const = default;
};

// Word tokens of a turn: Word and Particle events. Truncations, laughter,
// pauses and overlap marks are tracked separately and never counted here.
std::size_t word_count(const Turn& turn);

struct Conversation {
  std::string id;
  std::vector<Turn> turns;
  std::vector<std::string> speaker_ids;  // sorted, unique

  bool operator==(const Conversation&) const = default;
};

enum class Gender : std::uint8_t { Female, Male, Unspecified };

struct SpeakerProfile {
  std::string id;
  Gender gender = Gender::Unspecified;
  std::optional<int> age;  // years, <= 130 when present

  bool operator==(const SpeakerProfile&) const = default;
};

struct Corpus {
  std::vector<Conversation> conversations;           // lexicographic by file
  std::map<std::string, SpeakerProfile> speakers;    // id -> profile

  std::size_t turn_count() const;
  std::size_t event_count() const;
};

enum class Scheme : std::uint8_t { Gender, Age };

enum class CategoryLabel : std::uint8_t { Female, Male, Old, Young };

inline constexpr int kOldAgeMin = 70;
inline constexpr int kYoungAgeMax = 18;

std::string_view to_string(Scheme scheme);
std::string_view to_string(CategoryLabel label);
std::optional<Scheme> scheme_from_string(std::string_view name);
std::optional<CategoryLabel> category_from_string(std::string_view name);

// Canonical category pair of a scheme: {Female, Male} or {Old, Young}.
std::array<CategoryLabel, 2> scheme_categories(Scheme scheme);

// Maps a speaker to its category under the scheme, or nullopt when the
// speaker does not belong to either side (unspecified gender, mid-range or
// unknown age). Age: Old iff age >= 70, Young iff age <= 18.
std::optional<CategoryLabel> category_of(const SpeakerProfile& speaker,
                                         Scheme scheme);

}  // namespace talkprofiler
