#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "talkprofiler/tokenizer.hpp"

namespace talkprofiler {

using TermCounts =
    std::unordered_map<std::string, std::uint64_t, TransparentStringHash,
                       std::equal_to<>>;

// Occurrence counts for one side of a two-category contrast. `total` is the
// unigram token count of the side under the same tokenizer config, kept
// separately so that pruning the table never changes relative frequencies.
struct CategoryTermCounts {
  TermCounts counts;
  std::uint64_t total = 0;
};

CategoryTermCounts count_terms(std::span<const Turn* const> turns,
                               const TokenizerConfig& config);

// Drops terms whose combined count across both sides is below `min_count`.
// Totals are untouched.
void prune_min_count(CategoryTermCounts& side_a, CategoryTermCounts& side_b,
                     std::uint64_t min_count);

// Scores for one term in the A-vs-B contrast. Percentiles are computed over
// the union vocabulary with average tie ranks: pct = (rank - 0.5) / T for the
// average rank, equivalently (#smaller + #equal / 2) / T.
struct TermSalience {
  std::string term;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  double precision_pct_a = 0.0;  // percentile of count_a/(count_a+count_b)
  double freq_pct_a = 0.0;       // percentile of count_a/total_a
  double precision_pct_b = 0.0;
  double freq_pct_b = 0.0;
  double sfs = 0.0;  // hm(precision_pct_a, freq_pct_a) - hm(..b.., ..b..)
};

// Both sides of a scheme's contrast counted over a corpus, min_count prune
// applied. Side order follows scheme_categories(). EmptyCategory if either
// side has no matching speaker.
struct ContrastCounts {
  CategoryTermCounts side_a;
  CategoryTermCounts side_b;
};

ContrastCounts contrast_counts(const Corpus& corpus, Scheme scheme,
                               const TokenizerConfig& config,
                               std::uint64_t min_count);

// Harmonic mean with the zero convention: zero if either input is zero.
double harmonic_mean(double x, double y);

// Scores every term in the union vocabulary. Requires a non-empty union
// (EmptyVocabulary otherwise). Output is sorted by descending sfs; ties break
// by higher combined count, then ascending term bytes. Swapping A and B
// negates every sfs bit for bit.
std::vector<TermSalience> scaled_f_scores(const CategoryTermCounts& side_a,
                                          const CategoryTermCounts& side_b);

// Top `k` per side, each list strongest first: A by sfs descending, B by sfs
// ascending, ties by higher combined count then ascending term bytes. The
// lists overlap when the vocabulary is smaller than 2k.
struct SalienceSummary {
  std::vector<TermSalience> top_a;
  std::vector<TermSalience> top_b;
};

SalienceSummary top_terms(const std::vector<TermSalience>& scores,
                          std::size_t k);

// Plot data, one row per score in the given order. Header (byte exact):
// term,count_a,count_b,pct_freq_a,pct_freq_b,sfs
std::string salience_csv(const std::vector<TermSalience>& scores);

}  // namespace talkprofiler
