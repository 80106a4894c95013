#include "talkprofiler/tokenizer.hpp"

#include <fstream>

#include "talkprofiler/errors.hpp"

namespace talkprofiler {

Stoplist Stoplist::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::Io, "cannot open stoplist " + path.string());
  Stoplist list;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') continue;
    list.words_.insert(line);
  }
  return list;
}

Stoplist Stoplist::from_words(std::span<const std::string_view> words) {
  Stoplist list;
  for (std::string_view word : words) list.words_.emplace(word);
  return list;
}

void tokens_of(const Turn& turn, bool include_particles,
               std::vector<Token>& out) {
  out.clear();
  for (const Event& event : turn.events) {
    if (event.kind == EventKind::Word) {
      out.push_back({event.surface, TokenSource::Word});
    } else if (event.kind == EventKind::Particle && include_particles) {
      out.push_back({event.surface, TokenSource::Particle});
    }
  }
}

std::vector<Token> tokens_of(const Turn& turn, bool include_particles) {
  std::vector<Token> out;
  tokens_of(turn, include_particles, out);
  return out;
}

std::vector<std::vector<Token>> token_segments(const Turn& turn,
                                               bool include_particles) {
  std::vector<std::vector<Token>> segments(1);
  for (const Event& event : turn.events) {
    if (event.kind == EventKind::Pause) {
      if (!segments.back().empty()) segments.emplace_back();
    } else if (event.kind == EventKind::Word) {
      segments.back().push_back({event.surface, TokenSource::Word});
    } else if (event.kind == EventKind::Particle && include_particles) {
      segments.back().push_back({event.surface, TokenSource::Particle});
    }
  }
  if (segments.back().empty()) segments.pop_back();
  return segments;
}

std::vector<Token> filter_stopwords(std::vector<Token> tokens,
                                    const Stoplist& stoplist) {
  std::erase_if(tokens, [&stoplist](const Token& token) {
    return stoplist.contains(token.surface);
  });
  return tokens;
}

std::vector<std::string> ngrams(std::span<const Token> tokens,
                                NGramOrders orders) {
  std::vector<std::string> out;
  if (orders.unigrams) {
    for (const Token& token : tokens) out.emplace_back(token.surface);
  }
  if (orders.bigrams) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      std::string key;
      key.reserve(tokens[i].surface.size() + 1 + tokens[i + 1].surface.size());
      key.append(tokens[i].surface);
      key.push_back(' ');
      key.append(tokens[i + 1].surface);
      out.push_back(std::move(key));
    }
  }
  return out;
}

namespace {

const Stoplist& active_stoplist(const TokenizerConfig& config) {
  return config.stoplist ? *config.stoplist : Stoplist::default_list();
}

// Tokens surviving the particle flag and stopword filter, with segment end
// offsets at every pause and at the end.
void segmented_tokens(const Turn& turn, const TokenizerConfig& config,
                      std::vector<Token>& tokens,
                      std::vector<std::uint32_t>& segment_ends) {
  tokens.clear();
  segment_ends.clear();
  const Stoplist* stoplist =
      config.remove_stopwords ? &active_stoplist(config) : nullptr;
  for (const Event& event : turn.events) {
    if (event.kind == EventKind::Pause) {
      if (segment_ends.empty() ? !tokens.empty()
                               : segment_ends.back() < tokens.size()) {
        segment_ends.push_back(static_cast<std::uint32_t>(tokens.size()));
      }
      continue;
    }
    TokenSource source;
    if (event.kind == EventKind::Word) {
      source = TokenSource::Word;
    } else if (event.kind == EventKind::Particle && config.include_particles) {
      source = TokenSource::Particle;
    } else {
      continue;
    }
    if (stoplist && stoplist->contains(event.surface)) continue;
    tokens.push_back({event.surface, source});
  }
  if (segment_ends.empty() ? !tokens.empty()
                           : segment_ends.back() < tokens.size()) {
    segment_ends.push_back(static_cast<std::uint32_t>(tokens.size()));
  }
}

}  // namespace

void for_each_turn_ngram(const Turn& turn, const TokenizerConfig& config,
                         TurnScratch& scratch,
                         const std::function<void(std::string_view)>& emit) {
  segmented_tokens(turn, config, scratch.tokens, scratch.segment_ends);
  std::size_t begin = 0;
  for (std::uint32_t end : scratch.segment_ends) {
    if (config.orders.unigrams) {
      for (std::size_t i = begin; i < end; ++i) {
        emit(scratch.tokens[i].surface);
      }
    }
    if (config.orders.bigrams) {
      for (std::size_t i = begin; i + 1 < end; ++i) {
        scratch.key.clear();
        scratch.key.append(scratch.tokens[i].surface);
        scratch.key.push_back(' ');
        scratch.key.append(scratch.tokens[i + 1].surface);
        emit(scratch.key);
      }
    }
    begin = end;
  }
}

std::vector<std::string> turn_ngrams(const Turn& turn,
                                     const TokenizerConfig& config) {
  std::vector<std::string> out;
  TurnScratch scratch;
  for_each_turn_ngram(turn, config, scratch, [&out](std::string_view gram) {
    out.emplace_back(gram);
  });
  return out;
}

std::size_t turn_token_count(const Turn& turn, const TokenizerConfig& config) {
  const Stoplist* stoplist =
      config.remove_stopwords ? &active_stoplist(config) : nullptr;
  std::size_t n = 0;
  for (const Event& event : turn.events) {
    if (event.kind != EventKind::Word &&
        (event.kind != EventKind::Particle || !config.include_particles)) {
      continue;
    }
    if (stoplist && stoplist->contains(event.surface)) continue;
    ++n;
  }
  return n;
}

}  // namespace talkprofiler
