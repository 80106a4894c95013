#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "talkprofiler/corpus.hpp"

namespace talkprofiler {

// Position-annotated input error. line/column are 1-based and populated for
// JSON syntax errors; structural validation errors carry them as 0 and put
// the offending path into `reason`.
struct ParseError {
  std::string file;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string reason;

  std::string to_string() const;
};

template <class T>
class Parsed {
 public:
  Parsed(T value) : value_(std::move(value)) {}
  Parsed(ParseError error) : error_(std::move(error)) {}

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return *value_; }
  T&& value() && { return *std::move(value_); }
  const ParseError& error() const { return error_; }

 private:
  std::optional<T> value_;
  ParseError error_;
};

using SpeakerMap = std::map<std::string, SpeakerProfile>;

// Parses one conversation document (UTF-8 JSON, see README for the format).
// Surfaces are lowercased; Word events whose surface is in the minimal
// particle inventory are reclassified as Particle events.
Parsed<Conversation> parse_conversation(std::string_view text,
                                        std::string_view filename = "");

// Parses the speakers manifest (JSON list of {id, gender, age}).
Parsed<SpeakerMap> parse_speaker_manifest(std::string_view text,
                                          std::string_view filename = "");

// Canonical serialization; parse_conversation(serialize_conversation(c))
// reproduces `c` structurally for any valid conversation.
std::string serialize_conversation(const Conversation& conversation);
std::string serialize_manifest(const SpeakerMap& speakers);

struct CorpusError {
  enum class Kind { Parse, MissingSpeaker };

  Kind kind = Kind::Parse;
  ParseError parse;        // Parse errors
  std::string speaker_id;  // MissingSpeaker errors
  std::string file;

  std::string to_string() const;
};

struct LoadResult {
  Corpus corpus;  // valid iff errors is empty
  std::vector<CorpusError> errors;

  bool ok() const { return errors.empty(); }
};

// Loads `root/speakers.json` plus every other `*.json` file under root as a
// conversation, in lexicographic filename order. Aggregates all errors
// instead of stopping at the first; cross-references every turn's speaker
// against the manifest.
LoadResult load_corpus(const std::filesystem::path& root);

}  // namespace talkprofiler
