#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace talkprofiler {

enum class ErrorKind {
  EmptyCategory,
  EmptyVocabulary,
  EmptyTrainingSet,
  EmptyTestSet,
  TooFewUnits,
  SingleClass,
  NonFinite,
  DimensionMismatch,
  InvalidSpec,
  ModelFormat,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Contract violations and unrecoverable data conditions. Recoverable,
// per-record input problems use ParseError / CorpusError values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace talkprofiler
