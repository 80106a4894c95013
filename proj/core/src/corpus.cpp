#include "talkprofiler/corpus.hpp"

namespace talkprofiler {

Event word_event(std::string surface) {
  return Event{EventKind::Word, PauseClass::Short, std::move(surface)};
}

Event particle_event(std::string surface) {
  return Event{EventKind::Particle, PauseClass::Short, std::move(surface)};
}

Event laughter_event() {
  return Event{EventKind::Laughter, PauseClass::Short, {}};
}

Event pause_event(PauseClass pause_class) {
  return Event{EventKind::Pause, pause_class, {}};
}

Event truncation_event(std::string surface) {
  return Event{EventKind::Truncation, PauseClass::Short, std::move(surface)};
}

Event overlap_event() {
  return Event{EventKind::OverlapMark, PauseClass::Short, {}};
}

std::size_t word_count(const Turn& turn) {
  std::size_t n = 0;
  for (const Event& event : turn.events) {
    if (event.kind == EventKind::Word || event.kind == EventKind::Particle) {
      ++n;
    }
  }
  return n;
}

std::size_t Corpus::turn_count() const {
  std::size_t n = 0;
  for (const Conversation& conversation : conversations) {
    n += conversation.turns.size();
  }
  return n;
}

std::size_t Corpus::event_count() const {
  std::size_t n = 0;
  for (const Conversation& conversation : conversations) {
    for (const Turn& turn : conversation.turns) n += turn.events.size();
  }
  return n;
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Gender ? "gender" : "age";
}

std::string_view to_string(CategoryLabel label) {
  switch (label) {
    case CategoryLabel::Female: return "female";
    case CategoryLabel::Male: return "male";
    case CategoryLabel::Old: return "old";
    case CategoryLabel::Young: return "young";
  }
  return "?";
}

std::optional<Scheme> scheme_from_string(std::string_view name) {
  if (name == "gender") return Scheme::Gender;
  if (name == "age") return Scheme::Age;
  return std::nullopt;
}

std::optional<CategoryLabel> category_from_string(std::string_view name) {
  if (name == "female") return CategoryLabel::Female;
  if (name == "male") return CategoryLabel::Male;
  if (name == "old") return CategoryLabel::Old;
  if (name == "young") return CategoryLabel::Young;
  return std::nullopt;
}

std::array<CategoryLabel, 2> scheme_categories(Scheme scheme) {
  if (scheme == Scheme::Gender) {
    return {CategoryLabel::Female, CategoryLabel::Male};
  }
  return {CategoryLabel::Old, CategoryLabel::Young};
}

std::optional<CategoryLabel> category_of(const SpeakerProfile& speaker,
                                         Scheme scheme) {
  if (scheme == Scheme::Gender) {
    if (speaker.gender == Gender::Female) return CategoryLabel::Female;
    if (speaker.gender == Gender::Male) return CategoryLabel::Male;
    return std::nullopt;
  }
  if (!speaker.age) return std::nullopt;
  if (*speaker.age >= kOldAgeMin) return CategoryLabel::Old;
  if (*speaker.age <= kYoungAgeMax) return CategoryLabel::Young;
  return std::nullopt;
}

}  // namespace talkprofiler
