#include "talkprofiler/salience.hpp"

#include <algorithm>
#include <numeric>

#include "talkprofiler/csv.hpp"
#include "talkprofiler/errors.hpp"
#include "talkprofiler/parallel.hpp"

namespace talkprofiler {
namespace {

// Average-tie rank percentiles: pct(v) = (#smaller + #equal / 2) / T.
// Identical value multisets yield bitwise identical percentiles, which makes
// the A/B antisymmetry of the score exact.
std::vector<double> rank_percentiles(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&values](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> pct(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    const double p =
        (static_cast<double>(start) + 0.5 * static_cast<double>(end - start)) /
        static_cast<double>(n);
    for (std::size_t i = start; i < end; ++i) pct[order[i]] = p;
    start = end;
  }
  return pct;
}

std::uint64_t lookup(const TermCounts& counts, std::string_view term) {
  const auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

void sort_for_side_a(std::vector<TermSalience>& scores) {
  std::sort(scores.begin(), scores.end(),
            [](const TermSalience& x, const TermSalience& y) {
              if (x.sfs != y.sfs) return x.sfs > y.sfs;
              const auto cx = x.count_a + x.count_b;
              const auto cy = y.count_a + y.count_b;
              if (cx != cy) return cx > cy;
              return x.term < y.term;
            });
}

}  // namespace

CategoryTermCounts count_terms(std::span<const Turn* const> turns,
                               const TokenizerConfig& config) {
  struct Partial {
    TermCounts counts;
    std::uint64_t total = 0;
  };
  Partial merged = parallel_chunk_reduce(
      turns.size(), 2048, Partial{},
      [&turns, &config](std::size_t begin, std::size_t end) {
        Partial partial;
        TurnScratch scratch;
        for (std::size_t i = begin; i < end; ++i) {
          const Turn& turn = *turns[i];
          for_each_turn_ngram(turn, config, scratch,
                              [&partial](std::string_view gram) {
                                const auto it = partial.counts.find(gram);
                                if (it == partial.counts.end()) {
                                  partial.counts.emplace(std::string(gram), 1);
                                } else {
                                  ++it->second;
                                }
                              });
          partial.total += turn_token_count(turn, config);
        }
        return partial;
      },
      [](Partial& out, Partial&& in) {
        if (out.counts.size() < in.counts.size()) {
          std::swap(out.counts, in.counts);
        }
        for (auto& [term, count] : in.counts) out.counts[term] += count;
        out.total += in.total;
      });
  return CategoryTermCounts{std::move(merged.counts), merged.total};
}

void prune_min_count(CategoryTermCounts& side_a, CategoryTermCounts& side_b,
                     std::uint64_t min_count) {
  if (min_count <= 1) return;
  std::erase_if(side_a.counts, [&side_b, min_count](const auto& entry) {
    return entry.second + lookup(side_b.counts, entry.first) < min_count;
  });
  std::erase_if(side_b.counts, [&side_a, min_count](const auto& entry) {
    return entry.second + lookup(side_a.counts, entry.first) < min_count;
  });
}

ContrastCounts contrast_counts(const Corpus& corpus, Scheme scheme,
                               const TokenizerConfig& config,
                               std::uint64_t min_count) {
  const auto categories = scheme_categories(scheme);
  std::array<bool, 2> seen{};
  for (const auto& [id, speaker] : corpus.speakers) {
    if (const auto category = category_of(speaker, scheme)) {
      seen[*category == categories[1] ? 1 : 0] = true;
    }
  }
  for (std::size_t side = 0; side < 2; ++side) {
    if (!seen[side]) {
      raise(ErrorKind::EmptyCategory,
            "no speakers in category " +
                std::string(to_string(categories[side])));
    }
  }

  std::array<std::vector<const Turn*>, 2> turns;
  for (const Conversation& conversation : corpus.conversations) {
    for (const Turn& turn : conversation.turns) {
      const auto speaker = corpus.speakers.find(turn.speaker_id);
      if (speaker == corpus.speakers.end()) continue;
      const auto category = category_of(speaker->second, scheme);
      if (!category) continue;
      turns[*category == categories[1] ? 1 : 0].push_back(&turn);
    }
  }

  ContrastCounts out{count_terms(turns[0], config),
                     count_terms(turns[1], config)};
  prune_min_count(out.side_a, out.side_b, min_count);
  return out;
}

double harmonic_mean(double x, double y) {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  return 2.0 * x * y / (x + y);
}

std::vector<TermSalience> scaled_f_scores(const CategoryTermCounts& side_a,
                                          const CategoryTermCounts& side_b) {
  std::vector<TermSalience> scores;
  scores.reserve(side_a.counts.size() + side_b.counts.size());
  for (const auto& [term, count] : side_a.counts) {
    TermSalience s;
    s.term = term;
    s.count_a = count;
    s.count_b = lookup(side_b.counts, term);
    scores.push_back(std::move(s));
  }
  for (const auto& [term, count] : side_b.counts) {
    if (side_a.counts.find(term) != side_a.counts.end()) continue;
    TermSalience s;
    s.term = term;
    s.count_a = 0;
    s.count_b = count;
    scores.push_back(std::move(s));
  }
  if (scores.empty()) {
    raise(ErrorKind::EmptyVocabulary, "no terms to score");
  }

  const std::size_t n = scores.size();
  const auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return num == 0 ? 0.0
                    : static_cast<double>(num) / static_cast<double>(den);
  };
  std::vector<double> precision_a(n), precision_b(n), freq_a(n), freq_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto combined = scores[i].count_a + scores[i].count_b;
    precision_a[i] = ratio(scores[i].count_a, combined);
    precision_b[i] = ratio(scores[i].count_b, combined);
    freq_a[i] = ratio(scores[i].count_a, side_a.total);
    freq_b[i] = ratio(scores[i].count_b, side_b.total);
  }
  const std::vector<double> pct_precision_a = rank_percentiles(precision_a);
  const std::vector<double> pct_precision_b = rank_percentiles(precision_b);
  const std::vector<double> pct_freq_a = rank_percentiles(freq_a);
  const std::vector<double> pct_freq_b = rank_percentiles(freq_b);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i].precision_pct_a = pct_precision_a[i];
    scores[i].freq_pct_a = pct_freq_a[i];
    scores[i].precision_pct_b = pct_precision_b[i];
    scores[i].freq_pct_b = pct_freq_b[i];
    scores[i].sfs = harmonic_mean(pct_precision_a[i], pct_freq_a[i]) -
                    harmonic_mean(pct_precision_b[i], pct_freq_b[i]);
  }
  sort_for_side_a(scores);
  return scores;
}

SalienceSummary top_terms(const std::vector<TermSalience>& scores,
                          std::size_t k) {
  SalienceSummary out;
  std::vector<TermSalience> sorted = scores;
  sort_for_side_a(sorted);
  out.top_a.assign(sorted.begin(),
                   sorted.begin() + std::min(k, sorted.size()));
  std::sort(sorted.begin(), sorted.end(),
            [](const TermSalience& x, const TermSalience& y) {
              if (x.sfs != y.sfs) return x.sfs < y.sfs;
              const auto cx = x.count_a + x.count_b;
              const auto cy = y.count_a + y.count_b;
              if (cx != cy) return cx > cy;
              return x.term < y.term;
            });
  out.top_b.assign(sorted.begin(),
                   sorted.begin() + std::min(k, sorted.size()));
  return out;
}

std::string salience_csv(const std::vector<TermSalience>& scores) {
  std::string out = "term,count_a,count_b,pct_freq_a,pct_freq_b,sfs\n";
  for (const TermSalience& s : scores) {
    out.append(csv_field(s.term));
    out.push_back(',');
    out.append(std::to_string(s.count_a));
    out.push_back(',');
    out.append(std::to_string(s.count_b));
    out.push_back(',');
    out.append(format_double(s.freq_pct_a));
    out.push_back(',');
    out.append(format_double(s.freq_pct_b));
    out.push_back(',');
    out.append(format_double(s.sfs));
    out.push_back('\n');
  }
  return out;
}

}  // namespace talkprofiler
