#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "talkprofiler/corpus.hpp"

namespace talkprofiler {

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

enum class TokenSource : std::uint8_t { Word, Particle };

// A lexical token. `surface` points into the owning corpus and stays valid
// for the corpus lifetime.
struct Token {
  std::string_view surface;
  TokenSource source = TokenSource::Word;

  bool operator==(const Token&) const = default;
};

// Bundled stopword list. The default list is compiled in (mirrored by
// core/data/stopwords.txt, list version 1) and can be replaced by any file
// in the same format: one lowercase token per line, '#' comments ignored.
class Stoplist {
 public:
  static const Stoplist& default_list();
  static Stoplist from_file(const std::filesystem::path& path);  // throws Io
  static Stoplist from_words(std::span<const std::string_view> words);

  bool contains(std::string_view surface) const {
    return words_.find(surface) != words_.end();
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string, TransparentStringHash, std::equal_to<>>
      words_;
};

// Word events always become tokens; Particle events only when requested.
// Laughter, pauses, truncations and overlap marks never do.
std::vector<Token> tokens_of(const Turn& turn, bool include_particles);
void tokens_of(const Turn& turn, bool include_particles,
               std::vector<Token>& out);

// Tokens grouped into runs that do not span a pause annotation. Bigrams are
// built per segment so that no phrase crosses a pause (or a turn).
std::vector<std::vector<Token>> token_segments(const Turn& turn,
                                               bool include_particles);

// Order-preserving removal of stoplisted tokens; idempotent.
std::vector<Token> filter_stopwords(std::vector<Token> tokens,
                                    const Stoplist& stoplist);

struct NGramOrders {
  bool unigrams = true;
  bool bigrams = true;

  bool operator==(const NGramOrders&) const = default;
};

// All contiguous n-grams of the requested orders, one entry per occurrence.
// Bigram keys join the two surfaces with a single space.
std::vector<std::string> ngrams(std::span<const Token> tokens,
                                NGramOrders orders);

struct TokenizerConfig {
  bool include_particles = false;
  bool remove_stopwords = false;
  const Stoplist* stoplist = nullptr;  // nullptr -> Stoplist::default_list()
  NGramOrders orders;
};

// Per-turn n-grams under the full pipeline: tokenize, optionally drop
// stopwords, then emit n-grams per pause-delimited segment.
std::vector<std::string> turn_ngrams(const Turn& turn,
                                     const TokenizerConfig& config);

// Zero-copy walker used by the counting paths. Reuses `scratch` across calls;
// emits each n-gram occurrence as a string_view valid only during the call.
struct TurnScratch {
  std::vector<Token> tokens;
  std::vector<std::uint32_t> segment_ends;
  std::string key;
};

void for_each_turn_ngram(const Turn& turn, const TokenizerConfig& config,
                         TurnScratch& scratch,
                         const std::function<void(std::string_view)>& emit);

// Token count the turn contributes under `config` (after the particle flag
// and stopword filter are applied).
std::size_t turn_token_count(const Turn& turn, const TokenizerConfig& config);

}  // namespace talkprofiler
