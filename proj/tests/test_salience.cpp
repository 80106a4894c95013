#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "talkprofiler/corpus.hpp"
#include "talkprofiler/errors.hpp"
#include "talkprofiler/rng.hpp"
#include "talkprofiler/salience.hpp"

using namespace talkprofiler;

namespace {

CategoryTermCounts side(std::vector<std::pair<std::string, std::uint64_t>>
                            counts,
                        std::uint64_t total) {
  CategoryTermCounts result;
  for (auto& [term, count] : counts) result.counts[term] = count;
  result.total = total;
  return result;
}

// From-scratch rescoring of one term, sharing no code with the library:
// percentiles by pair counting over the union vocabulary.
double naive_pct(const std::vector<double>& values, double v) {
  double less = 0.0;
  double equal = 0.0;
  for (const double x : values) {
    if (x < v) less += 1.0;
    if (x == v) equal += 1.0;
  }
  return (less + 0.5 * equal) / static_cast<double>(values.size());
}

double naive_hm(double x, double y) {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  return 2.0 * x * y / (x + y);
}

std::map<std::string, double> naive_sfs(const CategoryTermCounts& a,
                                        const CategoryTermCounts& b) {
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> merged;
  for (const auto& [term, count] : a.counts) merged[term].first = count;
  for (const auto& [term, count] : b.counts) merged[term].second = count;

  std::vector<std::string> terms;
  std::vector<double> prec_a, prec_b, freq_a, freq_b;
  for (const auto& [term, counts] : merged) {
    const double ca = static_cast<double>(counts.first);
    const double cb = static_cast<double>(counts.second);
    terms.push_back(term);
    prec_a.push_back(ca / (ca + cb));
    prec_b.push_back(cb / (ca + cb));
    freq_a.push_back(counts.first == 0
                         ? 0.0
                         : ca / static_cast<double>(a.total));
    freq_b.push_back(counts.second == 0
                         ? 0.0
                         : cb / static_cast<double>(b.total));
  }

  std::map<std::string, double> result;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double hm_a = naive_hm(naive_pct(prec_a, prec_a[i]),
                                 naive_pct(freq_a, freq_a[i]));
    const double hm_b = naive_hm(naive_pct(prec_b, prec_b[i]),
                                 naive_pct(freq_b, freq_b[i]));
    result[terms[i]] = hm_a - hm_b;
  }
  return result;
}

CategoryTermCounts random_side(SplitMix64& rng, std::size_t pool) {
  CategoryTermCounts result;
  for (std::size_t i = 0; i < pool; ++i) {
    const std::uint64_t count = rng.next_below(20);
    if (count > 0) result.counts["t" + std::to_string(i)] = count;
    result.total += count;
  }
  if (result.counts.empty()) {
    result.counts["t0"] = 1;
    result.total = 1;
  }
  return result;
}

}  // namespace

TEST_CASE("harmonic mean uses the zero convention") {
  CHECK(harmonic_mean(0.5, 0.5) == 0.5);
  CHECK(harmonic_mean(1.0, 0.0) == 0.0);
  CHECK(harmonic_mean(0.0, 1.0) == 0.0);
  CHECK(harmonic_mean(0.25, 0.75) == doctest::Approx(0.375));
}

TEST_CASE("toy corpus reproduces the hand-computed scores") {
  // A: cat x3, dog x1 (4 tokens); B: cat x1, bird x3 (4 tokens).
  // Exact fractions: sfs(dog) = 11/24, sfs(cat) = 1/8, sfs(bird) = -2/3.
  const auto scores = scaled_f_scores(side({{"cat", 3}, {"dog", 1}}, 4),
                                      side({{"cat", 1}, {"bird", 3}}, 4));
  REQUIRE(scores.size() == 3);
  std::map<std::string, const TermSalience*> by_term;
  for (const TermSalience& score : scores) by_term[score.term] = &score;

  CHECK(by_term.at("dog")->sfs ==
        doctest::Approx(11.0 / 24.0).epsilon(1e-12));
  CHECK(by_term.at("cat")->sfs == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(by_term.at("bird")->sfs ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-12));

  // Sorted by descending sfs.
  CHECK(scores[0].term == "dog");
  CHECK(scores[1].term == "cat");
  CHECK(scores[2].term == "bird");

  CHECK(by_term.at("dog")->count_a == 1);
  CHECK(by_term.at("dog")->count_b == 0);
}

TEST_CASE("scores agree with an independent naive rescoring") {
  SplitMix64 rng(2026);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_side(rng, 1 + rng.next_below(30));
    const auto b = random_side(rng, 1 + rng.next_below(30));
    const auto scores = scaled_f_scores(a, b);
    const auto expected = naive_sfs(a, b);
    REQUIRE(scores.size() == expected.size());
    for (const TermSalience& score : scores) {
      CAPTURE(trial);
      CAPTURE(score.term);
      CHECK(score.sfs == expected.at(score.term));
    }
  }
}

TEST_CASE("swapping the sides negates every score bit for bit") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_side(rng, 1 + rng.next_below(50));
    const auto b = random_side(rng, 1 + rng.next_below(50));
    const auto forward = scaled_f_scores(a, b);
    auto backward = scaled_f_scores(b, a);
    REQUIRE(forward.size() == backward.size());

    std::map<std::string, double> reversed;
    for (const TermSalience& score : backward) {
      reversed[score.term] = score.sfs;
    }
    for (const TermSalience& score : forward) {
      CAPTURE(trial);
      CAPTURE(score.term);
      CHECK(score.sfs == -reversed.at(score.term));
    }
  }
}

TEST_CASE("ties break by combined count, then term bytes") {
  // Four terms with identical counts score identically; byte order decides.
  const auto scores = scaled_f_scores(
      side({{"b", 2}, {"a", 2}, {"d", 5}, {"c", 5}}, 14),
      side({{"b", 2}, {"a", 2}, {"d", 5}, {"c", 5}}, 14));
  REQUIRE(scores.size() == 4);
  for (const TermSalience& score : scores) CHECK(score.sfs == 0.0);
  CHECK(scores[0].term == "c");  // higher combined count first
  CHECK(scores[1].term == "d");
  CHECK(scores[2].term == "a");
  CHECK(scores[3].term == "b");
}

TEST_CASE("empty union is rejected") {
  CHECK_THROWS_AS(scaled_f_scores(side({}, 0), side({}, 0)), Error);
}

TEST_CASE("prune_min_count drops rare terms but keeps totals") {
  auto a = side({{"keep", 3}, {"rare", 1}, {"split", 2}}, 6);
  auto b = side({{"keep", 2}, {"split", 2}, {"own", 5}}, 9);
  prune_min_count(a, b, 4);
  CHECK(a.counts.size() == 2);  // keep, split
  CHECK(b.counts.size() == 3);  // keep, split, own
  CHECK(a.counts.contains("keep"));
  CHECK(a.counts.contains("split"));
  CHECK(!a.counts.contains("rare"));
  CHECK(a.total == 6);
  CHECK(b.total == 9);

  auto c = side({{"x", 1}}, 1);
  auto d = side({{"y", 1}}, 1);
  prune_min_count(c, d, 1);  // no-op threshold
  CHECK(c.counts.size() == 1);
  CHECK(d.counts.size() == 1);
}

TEST_CASE("count_terms counts n-grams and unigram totals per config") {
  Turn turn;
  turn.speaker_id = "s";
  turn.events = {word_event("the"), word_event("cat"),
                 pause_event(PauseClass::Short), word_event("cat"),
                 particle_event("erm")};
  const std::vector<const Turn*> turns = {&turn};

  TokenizerConfig config;  // no stopword removal, no particles
  auto counts = count_terms(turns, config);
  CHECK(counts.total == 3);  // unigram tokens: the, cat, cat
  CHECK(counts.counts.at("the") == 1);
  CHECK(counts.counts.at("cat") == 2);
  CHECK(counts.counts.at("the cat") == 1);  // bigram within first segment
  CHECK(!counts.counts.contains("cat cat"));  // pause breaks adjacency

  config.remove_stopwords = true;
  config.include_particles = true;
  counts = count_terms(turns, config);
  CHECK(counts.total == 3);  // cat, cat, erm
  CHECK(!counts.counts.contains("the"));
  CHECK(counts.counts.at("erm") == 1);
  CHECK(counts.counts.at("cat erm") == 1);
}

TEST_CASE("contrast_counts routes turns by category and prunes") {
  Corpus corpus;
  SpeakerProfile female;
  female.id = "f";
  female.gender = Gender::Female;
  SpeakerProfile male;
  male.id = "m";
  male.gender = Gender::Male;
  SpeakerProfile unknown;
  unknown.id = "u";
  corpus.speakers = {{"f", female}, {"m", male}, {"u", unknown}};

  Conversation conversation;
  conversation.id = "c";
  Turn f_turn;
  f_turn.speaker_id = "f";
  f_turn.events = {word_event("apple"), word_event("apple"),
                   word_event("pear")};
  Turn m_turn;
  m_turn.speaker_id = "m";
  m_turn.index = 1;
  m_turn.events = {word_event("stone"), word_event("stone"),
                   word_event("stone")};
  Turn u_turn;
  u_turn.speaker_id = "u";
  u_turn.index = 2;
  u_turn.events = {word_event("ghost")};
  conversation.turns = {f_turn, m_turn, u_turn};
  conversation.speaker_ids = {"f", "m", "u"};
  corpus.conversations.push_back(conversation);

  TokenizerConfig config;
  config.orders.bigrams = false;
  const ContrastCounts contrast =
      contrast_counts(corpus, Scheme::Gender, config, 2);
  CHECK(contrast.side_a.total == 3);
  CHECK(contrast.side_b.total == 3);
  CHECK(contrast.side_a.counts.at("apple") == 2);
  CHECK(!contrast.side_a.counts.contains("pear"));  // pruned, count 1
  CHECK(contrast.side_b.counts.at("stone") == 3);
  CHECK(!contrast.side_a.counts.contains("ghost"));
  CHECK(!contrast.side_b.counts.contains("ghost"));

  CHECK_THROWS_AS(contrast_counts(corpus, Scheme::Age, config, 1), Error);
}

TEST_CASE("top_terms returns each side strongest first") {
  const auto scores = scaled_f_scores(
      side({{"aa", 9}, {"ab", 6}, {"shared", 5}}, 20),
      side({{"ba", 9}, {"bb", 6}, {"shared", 5}}, 20));
  const SalienceSummary summary = top_terms(scores, 2);
  REQUIRE(summary.top_a.size() == 2);
  REQUIRE(summary.top_b.size() == 2);
  CHECK(summary.top_a[0].sfs >= summary.top_a[1].sfs);
  CHECK(summary.top_b[0].sfs <= summary.top_b[1].sfs);
  CHECK(summary.top_a[0].term[0] == 'a');
  CHECK(summary.top_b[0].term[0] == 'b');

  const SalienceSummary all = top_terms(scores, 10);
  CHECK(all.top_a.size() == scores.size());
  CHECK(all.top_b.size() == scores.size());
}

TEST_CASE("salience_csv has the documented header and one row per score") {
  const auto scores = scaled_f_scores(side({{"cat", 3}, {"dog", 1}}, 4),
                                      side({{"cat", 1}, {"bird", 3}}, 4));
  const std::string csv = salience_csv(scores);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "term,count_a,count_b,pct_freq_a,pct_freq_b,sfs");
  std::size_t rows = 0;
  for (const char c : csv) rows += c == '\n';
  CHECK(rows == 1 + scores.size());
  CHECK(csv.find("dog,1,0,") != std::string::npos);
}
