#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "talkprofiler/classifier.hpp"
#include "talkprofiler/cohorts.hpp"
#include "talkprofiler/parser.hpp"
#include "talkprofiler/rng.hpp"
#include "talkprofiler/salience.hpp"
#include "talkprofiler/synth.hpp"
#include "talkprofiler/tokenizer.hpp"

namespace {

using namespace talkprofiler;

// Shared medium corpus: 40 conversations, 100 turns each, ~7 tokens a turn.
const Corpus& fixture_corpus() {
  static const Corpus corpus = generate_corpus(planted_spec(40, 50, 7));
  return corpus;
}

std::vector<const Turn*> fixture_turns() {
  std::vector<const Turn*> turns;
  for (const Conversation& conversation : fixture_corpus().conversations)
    for (const Turn& turn : conversation.turns) turns.push_back(&turn);
  return turns;
}

void BM_ParseConversation(benchmark::State& state) {
  const std::string text =
      serialize_conversation(fixture_corpus().conversations.front());
  std::uint64_t events = 0;
  for (auto _ : state) {
    auto parsed = parse_conversation(text, "bench.json");
    events += parsed.value().turns.size();
    benchmark::DoNotOptimize(parsed);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseConversation);

void BM_SerializeConversation(benchmark::State& state) {
  const Conversation& conversation = fixture_corpus().conversations.front();
  for (auto _ : state) {
    std::string text = serialize_conversation(conversation);
    benchmark::DoNotOptimize(text);
  }
}
BENCHMARK(BM_SerializeConversation);

void BM_TurnNgrams(benchmark::State& state) {
  const auto turns = fixture_turns();
  TokenizerConfig config;
  config.remove_stopwords = state.range(0) != 0;
  std::size_t produced = 0;
  for (auto _ : state) {
    for (const Turn* turn : turns) {
      auto grams = turn_ngrams(*turn, config);
      produced += grams.size();
      benchmark::DoNotOptimize(grams);
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(turns.size()));
}
BENCHMARK(BM_TurnNgrams)->Arg(0)->Arg(1);

void BM_CountTerms(benchmark::State& state) {
  const auto turns = fixture_turns();
  const TokenizerConfig config;
  for (auto _ : state) {
    CategoryTermCounts counts = count_terms(turns, config);
    benchmark::DoNotOptimize(counts);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(turns.size()));
}
BENCHMARK(BM_CountTerms);

void BM_ScaledFScores(benchmark::State& state) {
  const std::size_t terms = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(11);
  CategoryTermCounts side_a;
  CategoryTermCounts side_b;
  for (std::size_t i = 0; i < terms; ++i) {
    const std::string term = "term" + std::to_string(i);
    const std::uint64_t in_a = rng.next_below(50);
    const std::uint64_t in_b = rng.next_below(50);
    if (in_a > 0) side_a.counts[term] = in_a;
    if (in_b > 0 || in_a == 0) side_b.counts[term] = in_b + (in_a == 0);
    side_a.total += in_a;
    side_b.total += in_b;
  }
  for (auto _ : state) {
    auto scores = scaled_f_scores(side_a, side_b);
    benchmark::DoNotOptimize(scores);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(terms));
}
BENCHMARK(BM_ScaledFScores)->Arg(1000)->Arg(10000);

void BM_VectorizeUnits(benchmark::State& state) {
  const auto units =
      make_units(fixture_corpus(), Scheme::Gender, UnitKind::Speaker);
  const TokenizerConfig config;
  const Vocabulary vocabulary = build_vocabulary(units, config, 5000);
  for (auto _ : state) {
    auto vectors = vectorize_units(units, vocabulary, config, true);
    benchmark::DoNotOptimize(vectors);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(units.size()));
}
BENCHMARK(BM_VectorizeUnits);

void BM_GenerateCorpus(benchmark::State& state) {
  const SynthSpec spec = planted_spec(10, 50, 3);
  std::uint64_t turns = 0;
  for (auto _ : state) {
    Corpus corpus = generate_corpus(spec);
    turns += corpus.turn_count();
    benchmark::DoNotOptimize(corpus);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(turns));
}
BENCHMARK(BM_GenerateCorpus);

}  // namespace

BENCHMARK_MAIN();
