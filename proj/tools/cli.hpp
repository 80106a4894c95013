#pragma once

#include <cstdint>
#include <string>

namespace talkprofiler::cli {

// Fully resolved knobs of one invocation. Serialized into every report (and
// echoed as a JSON line on stderr for CSV commands) so that replaying a
// report's config reproduces its numbers exactly.
struct ExperimentConfig {
  std::string corpus;
  std::string scheme = "gender";
  std::string unit = "speaker";
  std::string features = "lex";
  std::uint64_t seed = 42;
  std::uint64_t min_tokens = 100;
  std::size_t folds = 10;
  double test_fraction = 0.2;
  std::size_t top = 20;
  std::uint64_t min_count = 5;
  std::size_t vocab_size = 5000;
  double lambda = 1.0;
  double tol = 1e-6;
  std::size_t max_epochs = 1000;
  bool include_particles = false;
  bool remove_stopwords = false;
  bool bigrams = true;
  bool group_by_speaker = true;
  std::string stoplist;  // empty: built-in list
  std::string out;       // empty: stdout
};

// Entry point of the talkprof tool; argv follows main() conventions.
// Exit code 0 on success, 1 on usage errors, 2 on data errors.
int run(int argc, const char* const* argv);

}  // namespace talkprofiler::cli
