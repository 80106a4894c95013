#include "talkprofiler/errors.hpp"

namespace talkprofiler {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCategory: return "EmptyCategory";
    case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::EmptyTestSet: return "EmptyTestSet";
    case ErrorKind::TooFewUnits: return "TooFewUnits";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ModelFormat: return "ModelFormat";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace talkprofiler
