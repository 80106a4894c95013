#include "talkprofiler/parser.hpp"

#include <algorithm>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "talkprofiler/errors.hpp"
#include "talkprofiler/nonlex.hpp"
#include "talkprofiler/parallel.hpp"

namespace talkprofiler {
namespace {

using nlohmann::json;

void lowercase_ascii(std::string& s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t last_newline = 0;
  bool any_newline = false;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      last_newline = i;
      any_newline = true;
    }
  }
  const std::size_t column = any_newline ? byte - last_newline : byte + 1;
  return {line, column};
}

void append_json_string(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\u00";
          out.push_back(hex[(c >> 4) & 0xf]);
          out.push_back(hex[c & 0xf]);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

// Streaming schema validator and builder for the conversation format. Keeps
// no DOM; every accepted token moves a small state machine.
class ConversationSax {
 public:
  Conversation conversation;
  std::string schema_error;  // empty until a schema rule fails

  bool null() { return unexpected("null"); }
  bool boolean(bool) { return unexpected("boolean"); }
  bool number_integer(json::number_integer_t) { return unexpected("number"); }
  bool number_unsigned(json::number_unsigned_t) { return unexpected("number"); }
  bool number_float(json::number_float_t, const std::string&) {
    return unexpected("number");
  }
  bool binary(json::binary_t&) { return unexpected("binary"); }

  bool string(std::string& value) {
    switch (state_) {
      case State::ConvId:
        if (value.empty()) return fail("conversation_id is empty");
        conversation.id = std::move(value);
        state_ = State::Root;
        return true;
      case State::Speaker:
        if (value.empty()) return fail(turn_path() + ".speaker is empty");
        turn_.speaker_id = std::move(value);
        state_ = State::Turn;
        return true;
      case State::EventTag: {
        tag_ = parse_tag(value);
        if (tag_ == Tag::Unknown) {
          return fail(event_path() + ": unknown event tag \"" + value + "\"");
        }
        has_tag_ = true;
        state_ = State::Event;
        return true;
      }
      case State::EventSurface:
        if (value.empty()) return fail(event_path() + ".v is empty");
        surface_ = std::move(value);
        has_surface_ = true;
        state_ = State::Event;
        return true;
      case State::EventPauseClass:
        if (value == "short") {
          pause_class_ = PauseClass::Short;
        } else if (value == "long") {
          pause_class_ = PauseClass::Long;
        } else {
          return fail(event_path() + ".c must be \"short\" or \"long\"");
        }
        has_pause_class_ = true;
        state_ = State::Event;
        return true;
      default:
        return unexpected("string");
    }
  }

  bool start_object(std::size_t) {
    switch (state_) {
      case State::Start:
        state_ = State::Root;
        return true;
      case State::TurnsArray:
        turn_ = Turn{};
        turn_.index = static_cast<int>(conversation.turns.size());
        turn_seen_speaker_ = turn_seen_events_ = false;
        state_ = State::Turn;
        return true;
      case State::EventsArray:
        reset_event();
        state_ = State::Event;
        return true;
      default:
        return unexpected("object");
    }
  }

  bool key(std::string& name) {
    switch (state_) {
      case State::Root:
        if (name == "conversation_id") {
          if (root_seen_id_) return fail("duplicate key conversation_id");
          root_seen_id_ = true;
          state_ = State::ConvId;
          return true;
        }
        if (name == "turns") {
          if (root_seen_turns_) return fail("duplicate key turns");
          root_seen_turns_ = true;
          state_ = State::Turns;
          return true;
        }
        return fail("unknown key \"" + name + "\" in conversation object");
      case State::Turn:
        if (name == "speaker") {
          if (turn_seen_speaker_) {
            return fail(turn_path() + ": duplicate key speaker");
          }
          turn_seen_speaker_ = true;
          state_ = State::Speaker;
          return true;
        }
        if (name == "events") {
          if (turn_seen_events_) {
            return fail(turn_path() + ": duplicate key events");
          }
          turn_seen_events_ = true;
          state_ = State::Events;
          return true;
        }
        return fail(turn_path() + ": unknown key \"" + name + "\"");
      case State::Event:
        if (name == "t") {
          if (has_tag_) return fail(event_path() + ": duplicate key t");
          state_ = State::EventTag;
          return true;
        }
        if (name == "v") {
          if (has_surface_) return fail(event_path() + ": duplicate key v");
          state_ = State::EventSurface;
          return true;
        }
        if (name == "c") {
          if (has_pause_class_) {
            return fail(event_path() + ": duplicate key c");
          }
          state_ = State::EventPauseClass;
          return true;
        }
        return fail(event_path() + ": unknown key \"" + name + "\"");
      default:
        return unexpected("key");
    }
  }

  bool end_object() {
    switch (state_) {
      case State::Root:
        if (!root_seen_id_) return fail("missing key conversation_id");
        if (!root_seen_turns_) return fail("missing key turns");
        state_ = State::Done;
        return true;
      case State::Turn:
        if (!turn_seen_speaker_) {
          return fail(turn_path() + ": missing key speaker");
        }
        if (!turn_seen_events_) {
          return fail(turn_path() + ": missing key events");
        }
        conversation.turns.push_back(std::move(turn_));
        state_ = State::TurnsArray;
        return true;
      case State::Event:
        if (!finish_event()) return false;
        state_ = State::EventsArray;
        return true;
      default:
        return unexpected("end of object");
    }
  }

  bool start_array(std::size_t) {
    switch (state_) {
      case State::Turns:
        state_ = State::TurnsArray;
        return true;
      case State::Events:
        state_ = State::EventsArray;
        return true;
      default:
        return unexpected("array");
    }
  }

  bool end_array() {
    switch (state_) {
      case State::TurnsArray:
        state_ = State::Root;
        return true;
      case State::EventsArray:
        if (turn_.events.empty()) return fail(turn_path() + ": empty turn");
        state_ = State::Turn;
        return true;
      default:
        return unexpected("end of array");
    }
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) {
    syntax_error_byte = position;
    syntax_error_reason = ex.what();
    return false;
  }

  std::size_t syntax_error_byte = 0;
  std::string syntax_error_reason;

 private:
  enum class State {
    Start,
    Root,
    ConvId,
    Turns,
    TurnsArray,
    Turn,
    Speaker,
    Events,
    EventsArray,
    Event,
    EventTag,
    EventSurface,
    EventPauseClass,
    Done,
  };

  enum class Tag { Word, Particle, Laugh, Pause, Trunc, Overlap, Unknown };

  static Tag parse_tag(std::string_view value) {
    if (value == "w") return Tag::Word;
    if (value == "p") return Tag::Particle;
    if (value == "laugh") return Tag::Laugh;
    if (value == "pause") return Tag::Pause;
    if (value == "trunc") return Tag::Trunc;
    if (value == "ov") return Tag::Overlap;
    return Tag::Unknown;
  }

  void reset_event() {
    has_tag_ = has_surface_ = has_pause_class_ = false;
    surface_.clear();
  }

  bool finish_event() {
    if (!has_tag_) return fail(event_path() + ": missing key t");
    const bool wants_surface =
        tag_ == Tag::Word || tag_ == Tag::Particle || tag_ == Tag::Trunc;
    if (wants_surface && !has_surface_) {
      return fail(event_path() + ": missing key v");
    }
    if (!wants_surface && has_surface_) {
      return fail(event_path() + ": key v not allowed for this event");
    }
    if (tag_ == Tag::Pause && !has_pause_class_) {
      return fail(event_path() + ": missing key c");
    }
    if (tag_ != Tag::Pause && has_pause_class_) {
      return fail(event_path() + ": key c not allowed for this event");
    }
    Event event;
    switch (tag_) {
      case Tag::Word:
        lowercase_ascii(surface_);
        // Transcripts sometimes carry particles as plain words; inventory
        // surfaces are normalized to Particle so feature extraction does not
        // depend on transcriber tagging.
        event = classify_particle(surface_) ? particle_event(std::move(surface_))
                                            : word_event(std::move(surface_));
        break;
      case Tag::Particle:
        lowercase_ascii(surface_);
        event = particle_event(std::move(surface_));
        break;
      case Tag::Trunc:
        lowercase_ascii(surface_);
        event = truncation_event(std::move(surface_));
        break;
      case Tag::Laugh:
        event = laughter_event();
        break;
      case Tag::Pause:
        event = pause_event(pause_class_);
        break;
      case Tag::Overlap:
        event = overlap_event();
        break;
      case Tag::Unknown:
        return fail("unreachable event tag");
    }
    turn_.events.push_back(std::move(event));
    return true;
  }

  std::string turn_path() const {
    return "turns[" + std::to_string(conversation.turns.size()) + "]";
  }

  std::string event_path() const {
    return turn_path() + ".events[" + std::to_string(turn_.events.size()) +
           "]";
  }

  bool fail(std::string reason) {
    if (schema_error.empty()) schema_error = std::move(reason);
    return false;
  }

  bool unexpected(std::string_view what) {
    return fail("unexpected " + std::string(what) +
                (state_ == State::Done ? " after conversation object" : ""));
  }

  State state_ = State::Start;
  Turn turn_;
  bool root_seen_id_ = false;
  bool root_seen_turns_ = false;
  bool turn_seen_speaker_ = false;
  bool turn_seen_events_ = false;
  Tag tag_ = Tag::Unknown;
  bool has_tag_ = false;
  bool has_surface_ = false;
  bool has_pause_class_ = false;
  std::string surface_;
  PauseClass pause_class_ = PauseClass::Short;
};

}  // namespace

std::string ParseError::to_string() const {
  std::string out = file.empty() ? std::string("<input>") : file;
  if (line > 0) {
    out += ":" + std::to_string(line) + ":" + std::to_string(column);
  }
  out += ": " + reason;
  return out;
}

Parsed<Conversation> parse_conversation(std::string_view text,
                                        std::string_view filename) {
  ConversationSax handler;
  const bool ok = json::sax_parse(text, &handler);
  if (ok) {
    std::vector<std::string> ids;
    ids.reserve(handler.conversation.turns.size());
    for (const Turn& turn : handler.conversation.turns) {
      ids.push_back(turn.speaker_id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    handler.conversation.speaker_ids = std::move(ids);
    return std::move(handler.conversation);
  }
  ParseError error;
  error.file = std::string(filename);
  if (!handler.schema_error.empty()) {
    error.reason = handler.schema_error;
  } else {
    const auto [line, column] = line_column(text, handler.syntax_error_byte);
    error.line = line;
    error.column = column;
    error.reason = handler.syntax_error_reason.empty()
                       ? "malformed JSON"
                       : handler.syntax_error_reason;
  }
  return error;
}

Parsed<SpeakerMap> parse_speaker_manifest(std::string_view text,
                                          std::string_view filename) {
  const auto fail = [&filename](std::string reason, std::size_t line = 0,
                                std::size_t column = 0) {
    ParseError error;
    error.file = std::string(filename);
    error.line = line;
    error.column = column;
    error.reason = std::move(reason);
    return error;
  };

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    const auto [line, column] = line_column(text, ex.byte);
    return fail(ex.what(), line, column);
  }
  if (!doc.is_array()) return fail("manifest must be a JSON array");

  SpeakerMap speakers;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    const std::string path = "[" + std::to_string(i) + "]";
    if (!entry.is_object()) return fail(path + " must be an object");
    SpeakerProfile profile;
    for (const auto& [key, value] : entry.items()) {
      if (key == "id") {
        if (!value.is_string() || value.get_ref<const std::string&>().empty()) {
          return fail(path + ".id must be a non-empty string");
        }
        profile.id = value.get<std::string>();
      } else if (key == "gender") {
        if (value.is_null()) {
          profile.gender = Gender::Unspecified;
        } else if (value == "F") {
          profile.gender = Gender::Female;
        } else if (value == "M") {
          profile.gender = Gender::Male;
        } else {
          return fail(path + ".gender must be \"F\", \"M\" or null");
        }
      } else if (key == "age") {
        if (value.is_null()) {
          profile.age.reset();
        } else if (value.is_number_unsigned() &&
                   value.get<std::uint64_t>() <= 130) {
          profile.age = value.get<int>();
        } else {
          return fail(path + ".age must be an integer in [0, 130] or null");
        }
      } else {
        return fail(path + ": unknown key \"" + key + "\"");
      }
    }
    if (profile.id.empty()) return fail(path + ": missing key id");
    if (!speakers.try_emplace(profile.id, profile).second) {
      return fail(path + ": duplicate speaker id \"" + profile.id + "\"");
    }
  }
  return speakers;
}

std::string serialize_conversation(const Conversation& conversation) {
  std::string out = "{\"conversation_id\":";
  append_json_string(out, conversation.id);
  out += ",\"turns\":[";
  bool first_turn = true;
  for (const Turn& turn : conversation.turns) {
    if (!first_turn) out.push_back(',');
    first_turn = false;
    out += "{\"speaker\":";
    append_json_string(out, turn.speaker_id);
    out += ",\"events\":[";
    bool first_event = true;
    for (const Event& event : turn.events) {
      if (!first_event) out.push_back(',');
      first_event = false;
      switch (event.kind) {
        case EventKind::Word:
          out += "{\"t\":\"w\",\"v\":";
          append_json_string(out, event.surface);
          out.push_back('}');
          break;
        case EventKind::Particle:
          out += "{\"t\":\"p\",\"v\":";
          append_json_string(out, event.surface);
          out.push_back('}');
          break;
        case EventKind::Laughter:
          out += "{\"t\":\"laugh\"}";
          break;
        case EventKind::Pause:
          out += event.pause_class == PauseClass::Short
                     ? "{\"t\":\"pause\",\"c\":\"short\"}"
                     : "{\"t\":\"pause\",\"c\":\"long\"}";
          break;
        case EventKind::Truncation:
          out += "{\"t\":\"trunc\",\"v\":";
          append_json_string(out, event.surface);
          out.push_back('}');
          break;
        case EventKind::OverlapMark:
          out += "{\"t\":\"ov\"}";
          break;
      }
    }
    out += "]}";
  }
  out += "]}\n";
  return out;
}

std::string serialize_manifest(const SpeakerMap& speakers) {
  std::string out = "[";
  bool first = true;
  for (const auto& [id, profile] : speakers) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "{\"id\":";
    append_json_string(out, id);
    out += ",\"gender\":";
    switch (profile.gender) {
      case Gender::Female: out += "\"F\""; break;
      case Gender::Male: out += "\"M\""; break;
      case Gender::Unspecified: out += "null"; break;
    }
    out += ",\"age\":";
    out += profile.age ? std::to_string(*profile.age) : "null";
    out.push_back('}');
  }
  out += "\n]\n";
  return out;
}

std::string CorpusError::to_string() const {
  if (kind == Kind::Parse) return parse.to_string();
  return file + ": speaker \"" + speaker_id + "\" not in manifest";
}

LoadResult load_corpus(const std::filesystem::path& root) {
  LoadResult result;
  const auto report = [&result](std::string file, std::string reason) {
    CorpusError error;
    error.kind = CorpusError::Kind::Parse;
    error.parse.file = std::move(file);
    error.parse.reason = std::move(reason);
    result.errors.push_back(std::move(error));
  };

  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) {
    report(root.string(), "not a directory");
    return result;
  }

  std::vector<std::filesystem::path> files;
  bool manifest_found = false;
  for (const auto& entry : std::filesystem::directory_iterator(root, ec)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".json") continue;
    if (entry.path().filename() == "speakers.json") {
      manifest_found = true;
      continue;
    }
    files.push_back(entry.path());
  }
  if (ec) {
    report(root.string(), "cannot list directory: " + ec.message());
    return result;
  }
  std::sort(files.begin(), files.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.filename().string() < b.filename().string();
            });

  const auto slurp = [](const std::filesystem::path& path,
                        std::string& out) -> bool {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    if (size < 0) return false;
    out.resize(static_cast<std::size_t>(size));
    in.seekg(0);
    in.read(out.data(), size);
    return static_cast<bool>(in);
  };

  if (!manifest_found) {
    report((root / "speakers.json").string(), "missing speakers manifest");
  } else {
    std::string text;
    if (!slurp(root / "speakers.json", text)) {
      report((root / "speakers.json").string(), "cannot read file");
    } else {
      auto parsed =
          parse_speaker_manifest(text, (root / "speakers.json").string());
      if (parsed.ok()) {
        result.corpus.speakers = std::move(parsed).value();
      } else {
        CorpusError error;
        error.kind = CorpusError::Kind::Parse;
        error.parse = parsed.error();
        result.errors.push_back(std::move(error));
      }
    }
  }
  if (files.empty()) {
    report(root.string(), "no conversation files");
  }

  std::vector<Parsed<Conversation>> parsed(files.size(),
                                           Parsed<Conversation>(ParseError{}));
  parallel_for(files.size(), [&](std::size_t i) {
    std::string text;
    if (!slurp(files[i], text)) {
      ParseError error;
      error.file = files[i].string();
      error.reason = "cannot read file";
      parsed[i] = std::move(error);
      return;
    }
    parsed[i] = parse_conversation(text, files[i].string());
  });

  std::map<std::string, std::size_t> conversation_ids;
  std::vector<std::string> missing_speakers;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!parsed[i].ok()) {
      CorpusError error;
      error.kind = CorpusError::Kind::Parse;
      error.parse = parsed[i].error();
      result.errors.push_back(std::move(error));
      continue;
    }
    Conversation conversation = std::move(parsed[i]).value();
    const auto [it, inserted] =
        conversation_ids.emplace(conversation.id, i);
    if (!inserted) {
      report(files[i].string(),
             "duplicate conversation id \"" + conversation.id + "\" (also in " +
                 files[it->second].filename().string() + ")");
      continue;
    }
    for (const std::string& id : conversation.speaker_ids) {
      if (!result.corpus.speakers.contains(id)) {
        if (std::find(missing_speakers.begin(), missing_speakers.end(), id) ==
            missing_speakers.end()) {
          missing_speakers.push_back(id);
          CorpusError error;
          error.kind = CorpusError::Kind::MissingSpeaker;
          error.speaker_id = id;
          error.file = files[i].string();
          result.errors.push_back(std::move(error));
        }
      }
    }
    result.corpus.conversations.push_back(std::move(conversation));
  }

  if (!result.ok()) result.corpus = Corpus{};
  return result;
}

}  // namespace talkprofiler
