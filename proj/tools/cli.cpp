#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "talkprofiler/classifier.hpp"
#include "talkprofiler/cohorts.hpp"
#include "talkprofiler/corpus.hpp"
#include "talkprofiler/csv.hpp"
#include "talkprofiler/errors.hpp"
#include "talkprofiler/nonlex.hpp"
#include "talkprofiler/parser.hpp"
#include "talkprofiler/salience.hpp"
#include "talkprofiler/stats.hpp"
#include "talkprofiler/synth.hpp"
#include "talkprofiler/tokenizer.hpp"

namespace talkprofiler::cli {

namespace {

using nlohmann::json;

// All option storage for one invocation; only the chosen subcommand's
// fields are meaningful.
struct Args {
  ExperimentConfig cfg;
  std::string model;
  std::string report;
  std::string preset = "planted";
  std::string kind = "holdout";
  std::size_t speakers = 20;
  std::size_t turns = 20;
  bool all_terms = false;
  bool balanced = false;
  bool keep_stopwords = false;
  bool no_bigrams = false;
  bool no_speaker_groups = false;
};

void write_output(const std::string& out, std::string_view text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) {
    raise(ErrorKind::Io, "cannot open " + out + " for writing");
  }
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) {
    raise(ErrorKind::Io, "write failed for " + out);
  }
}

json config_json(const ExperimentConfig& cfg) {
  return json{{"corpus", cfg.corpus},
              {"scheme", cfg.scheme},
              {"unit", cfg.unit},
              {"features", cfg.features},
              {"seed", cfg.seed},
              {"min_tokens", cfg.min_tokens},
              {"folds", cfg.folds},
              {"test_fraction", cfg.test_fraction},
              {"top", cfg.top},
              {"min_count", cfg.min_count},
              {"vocab_size", cfg.vocab_size},
              {"lambda", cfg.lambda},
              {"tol", cfg.tol},
              {"max_epochs", cfg.max_epochs},
              {"include_particles", cfg.include_particles},
              {"remove_stopwords", cfg.remove_stopwords},
              {"bigrams", cfg.bigrams},
              {"group_by_speaker", cfg.group_by_speaker},
              {"stoplist", cfg.stoplist},
              {"out", cfg.out}};
}

// CSV commands keep their output pure; the resolved config goes to stderr
// as a single JSON line for replay.
void echo_config(const ExperimentConfig& cfg, std::string_view command) {
  json j = config_json(cfg);
  j["command"] = command;
  std::cerr << j.dump() << "\n";
}

Scheme scheme_of(const ExperimentConfig& cfg) {
  const auto scheme = scheme_from_string(cfg.scheme);
  if (!scheme) {
    raise(ErrorKind::InvalidSpec, "unknown scheme '" + cfg.scheme + "'");
  }
  return *scheme;
}

UnitKind unit_of(const ExperimentConfig& cfg) {
  if (cfg.unit == "speaker") return UnitKind::Speaker;
  if (cfg.unit == "turn") return UnitKind::Turn;
  raise(ErrorKind::InvalidSpec, "unknown unit '" + cfg.unit + "'");
}

Corpus load_or_report(const std::string& dir) {
  LoadResult result = load_corpus(dir);
  if (!result.ok()) {
    for (const CorpusError& error : result.errors) {
      std::cerr << error.to_string() << "\n";
    }
    raise(ErrorKind::Io, dir + ": " + std::to_string(result.errors.size()) +
                             " corpus error(s)");
  }
  return std::move(result.corpus);
}

// Stoplist override lives for the duration of a command.
struct TokenizerSetup {
  std::optional<Stoplist> custom;
  TokenizerConfig config;
};

TokenizerSetup tokenizer_setup(const Args& args) {
  TokenizerSetup setup;
  setup.config.include_particles = args.cfg.include_particles;
  setup.config.remove_stopwords = args.cfg.remove_stopwords;
  setup.config.orders.bigrams = args.cfg.bigrams;
  if (!args.cfg.stoplist.empty()) {
    setup.custom = Stoplist::from_file(args.cfg.stoplist);
    setup.config.stoplist = &*setup.custom;
  }
  return setup;
}

// Unit preparation shared by balance/split/train/evaluate: build, apply the
// talk-time floor (speaker units) or drop empty turns, optionally balance.
std::vector<Unit> prepare_units(const Corpus& corpus, const Args& args,
                                bool do_balance) {
  const UnitKind kind = unit_of(args.cfg);
  std::vector<Unit> units = make_units(corpus, scheme_of(args.cfg), kind);
  if (kind == UnitKind::Speaker) {
    units = filter_min_talk(std::move(units), args.cfg.min_tokens);
  } else {
    units = drop_empty_turn_units(std::move(units));
  }
  if (do_balance) {
    units = balance(std::move(units), args.cfg.seed);
  }
  return units;
}

PipelineConfig pipeline_config(const Args& args,
                               const TokenizerSetup& setup) {
  PipelineConfig config;
  config.tokenizer = setup.config;
  config.include_nonlex = args.cfg.features == "lex+nonlex";
  config.vocab_size = args.cfg.vocab_size;
  config.train.lambda = args.cfg.lambda;
  config.train.tol = args.cfg.tol;
  config.train.max_epochs = args.cfg.max_epochs;
  config.group_by_speaker = args.cfg.group_by_speaker;
  return config;
}

std::string_view label_for_class(Scheme scheme, std::uint8_t cls) {
  const auto categories = scheme_categories(scheme);
  for (const CategoryLabel label : categories) {
    if (class_of(label) == cls) return to_string(label);
  }
  return to_string(categories[0]);
}

int cmd_ingest(const Args& args) {
  LoadResult result = load_corpus(args.cfg.corpus);
  json report{{"command", "ingest"},
              {"corpus", args.cfg.corpus},
              {"ok", result.ok()},
              {"conversations", result.corpus.conversations.size()},
              {"turns", result.corpus.turn_count()},
              {"events", result.corpus.event_count()},
              {"speakers", result.corpus.speakers.size()},
              {"errors", json::array()}};
  for (const CorpusError& error : result.errors) {
    std::cerr << error.to_string() << "\n";
    report["errors"].push_back(error.to_string());
  }
  write_output(args.cfg.out, report.dump(1) + "\n");
  return result.ok() ? 0 : 2;
}

int cmd_stats(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const auto rows = compute_stats(corpus, scheme_of(args.cfg));
  write_output(args.cfg.out, stats_csv(rows));
  echo_config(args.cfg, "stats");
  return 0;
}

int cmd_terms(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const TokenizerSetup setup = tokenizer_setup(args);
  const ContrastCounts contrast = contrast_counts(
      corpus, scheme_of(args.cfg), setup.config, args.cfg.min_count);
  const auto scores = scaled_f_scores(contrast.side_a, contrast.side_b);
  if (args.all_terms) {
    write_output(args.cfg.out, salience_csv(scores));
  } else {
    // Union of the top K per side, kept in overall sfs order.
    const SalienceSummary summary = top_terms(scores, args.cfg.top);
    std::unordered_set<std::string_view> keep;
    for (const TermSalience& t : summary.top_a) keep.insert(t.term);
    for (const TermSalience& t : summary.top_b) keep.insert(t.term);
    std::vector<TermSalience> selected;
    selected.reserve(keep.size());
    for (const TermSalience& t : scores) {
      if (keep.contains(t.term)) selected.push_back(t);
    }
    write_output(args.cfg.out, salience_csv(selected));
  }
  echo_config(args.cfg, "terms");
  return 0;
}

int cmd_nonlex(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const auto rows = nonlex_profile(corpus, scheme_of(args.cfg));
  write_output(args.cfg.out, nonlex_csv(rows));
  echo_config(args.cfg, "nonlex");
  return 0;
}

int cmd_balance(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const std::vector<Unit> units = prepare_units(corpus, args, true);
  std::string manifest;
  for (const Unit& unit : units) {
    manifest += unit.id;
    manifest += '\n';
  }
  write_output(args.cfg.out, manifest);
  echo_config(args.cfg, "balance");
  return 0;
}

int cmd_split(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const std::vector<Unit> units = prepare_units(corpus, args, args.balanced);

  std::vector<std::pair<std::string, std::vector<std::size_t>>> parts;
  if (args.kind == "holdout") {
    Split split = holdout_split(units, args.cfg.test_fraction, args.cfg.seed,
                                args.cfg.group_by_speaker);
    parts.emplace_back("train", std::move(split.train));
    parts.emplace_back("test", std::move(split.test));
  } else {
    auto folds =
        kfold(units, args.cfg.folds, args.cfg.seed, args.cfg.group_by_speaker);
    for (std::size_t i = 0; i < folds.size(); ++i) {
      parts.emplace_back("fold" + std::to_string(i + 1), std::move(folds[i]));
    }
  }

  if (args.cfg.out.empty()) {
    std::string text;
    for (const auto& [name, indices] : parts) {
      text += "# " + name + "\n";
      for (const std::size_t index : indices) {
        text += units[index].id;
        text += '\n';
      }
    }
    write_output("", text);
  } else {
    for (const auto& [name, indices] : parts) {
      std::string text;
      for (const std::size_t index : indices) {
        text += units[index].id;
        text += '\n';
      }
      write_output(args.cfg.out + "." + name, text);
    }
  }
  echo_config(args.cfg, "split");
  return 0;
}

int cmd_train(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const TokenizerSetup setup = tokenizer_setup(args);
  const std::vector<Unit> units = prepare_units(corpus, args, true);
  const PipelineConfig config = pipeline_config(args, setup);
  const HoldoutResult result =
      run_holdout(units, config, args.cfg.test_fraction, args.cfg.seed);
  save_model(result.model, args.model);

  json report{{"command", "train"},
              {"config", config_json(args.cfg)},
              {"model", args.model},
              {"units", units.size()},
              {"train_units", units.size() - result.report.n_test},
              {"test_units", result.report.n_test},
              {"accuracy", result.report.accuracy},
              {"std_error", result.report.std_error},
              {"vocabulary_size", result.model.vocabulary.size()},
              {"epochs", result.model.epochs},
              {"final_grad_norm", result.model.final_grad_norm}};
  write_output(args.report, report.dump(1) + "\n");
  return 0;
}

int cmd_predict(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  const TrainedModel model = load_model(args.model);
  const std::vector<Unit> units =
      make_units(corpus, model.scheme, model.unit);
  const Vocabulary vocabulary(model.vocabulary);
  const auto vectors = vectorize_units(units, vocabulary,
                                       model.tokenizer_config(),
                                       model.includes_nonlex);
  std::string csv = "unit_id,category,p_positive,predicted\n";
  for (std::size_t i = 0; i < units.size(); ++i) {
    const double p = predict(model, vectors[i]);
    const std::uint8_t cls = predict_class(model, vectors[i]);
    csv += csv_field(units[i].id);
    csv += ',';
    csv += to_string(units[i].category);
    csv += ',';
    csv += format_double(p);
    csv += ',';
    csv += label_for_class(model.scheme, cls);
    csv += '\n';
  }
  write_output(args.cfg.out, csv);
  echo_config(args.cfg, "predict");
  return 0;
}

int cmd_evaluate(const Args& args) {
  const Corpus corpus = load_or_report(args.cfg.corpus);
  json report{{"command", "evaluate"}, {"config", config_json(args.cfg)}};
  EvalReport eval;
  if (!args.model.empty()) {
    // Score a saved model on this corpus; the model's own scheme, unit and
    // tokenizer settings apply.
    const TrainedModel model = load_model(args.model);
    std::vector<Unit> units = make_units(corpus, model.scheme, model.unit);
    if (model.unit == UnitKind::Speaker) {
      units = filter_min_talk(std::move(units), args.cfg.min_tokens);
    } else {
      units = drop_empty_turn_units(std::move(units));
    }
    const Vocabulary vocabulary(model.vocabulary);
    const auto vectors = vectorize_units(units, vocabulary,
                                         model.tokenizer_config(),
                                         model.includes_nonlex);
    eval = evaluate(model, vectors);
    report["mode"] = "model";
    report["model"] = args.model;
  } else {
    const TokenizerSetup setup = tokenizer_setup(args);
    const std::vector<Unit> units = prepare_units(corpus, args, true);
    eval = cross_validate(units, pipeline_config(args, setup),
                          args.cfg.folds, args.cfg.seed);
    report["mode"] = "cross_validation";
    report["units"] = units.size();
  }
  report["accuracy"] = eval.accuracy;
  report["std_error"] = eval.std_error;
  report["n_test"] = eval.n_test;
  report["folds"] = eval.folds;
  write_output(args.cfg.out, report.dump(1) + "\n");
  return 0;
}

int cmd_synth(const Args& args) {
  const SynthSpec spec =
      spec_by_name(args.preset, args.speakers, args.turns, args.cfg.seed);
  generate_to_dir(spec, args.cfg.out);
  json report{{"command", "synth"},
              {"preset", args.preset},
              {"speakers_per_category", args.speakers},
              {"turns_per_speaker", args.turns},
              {"seed", args.cfg.seed},
              {"dir", args.cfg.out},
              {"conversations", args.speakers}};
  write_output(args.report, report.dump(1) + "\n");
  return 0;
}

void add_corpus_arg(CLI::App* cmd, Args& args) {
  cmd->add_option("corpus", args.cfg.corpus, "Corpus directory")
      ->required();
}

void add_scheme_flag(CLI::App* cmd, Args& args) {
  cmd->add_option("--by", args.cfg.scheme, "Contrast scheme")
      ->check(CLI::IsMember({"gender", "age"}))
      ->capture_default_str();
}

void add_unit_flags(CLI::App* cmd, Args& args) {
  cmd->add_option("--unit", args.cfg.unit, "Classification unit")
      ->check(CLI::IsMember({"speaker", "turn"}))
      ->capture_default_str();
  cmd->add_option("--min-tokens", args.cfg.min_tokens,
                  "Minimum word tokens per speaker unit")
      ->capture_default_str();
  cmd->add_flag("--no-speaker-groups", args.no_speaker_groups,
                "Split turn units without grouping by speaker");
}

void add_tokenizer_flags(CLI::App* cmd, Args& args) {
  cmd->add_flag("--include-particles", args.cfg.include_particles,
                "Treat particles as word tokens");
  cmd->add_option("--stoplist", args.cfg.stoplist,
                  "Stopword file overriding the built-in list")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--no-bigrams", args.no_bigrams, "Unigrams only");
}

void add_out_flag(CLI::App* cmd, Args& args, const char* what) {
  cmd->add_option("--out", args.cfg.out, what);
}

void add_seed_flag(CLI::App* cmd, Args& args) {
  cmd->add_option("--seed", args.cfg.seed, "Deterministic seed")
      ->capture_default_str();
}

void add_train_flags(CLI::App* cmd, Args& args) {
  cmd->add_option("--features", args.cfg.features, "Feature set")
      ->check(CLI::IsMember({"lex", "lex+nonlex"}))
      ->capture_default_str();
  cmd->add_option("--vocab-size", args.cfg.vocab_size, "Vocabulary cap")
      ->capture_default_str();
  cmd->add_option("--lambda", args.cfg.lambda, "L2 strength")
      ->capture_default_str();
  cmd->add_option("--tol", args.cfg.tol, "Gradient stop tolerance")
      ->capture_default_str();
  cmd->add_option("--max-epochs", args.cfg.max_epochs, "Epoch cap")
      ->capture_default_str();
  cmd->add_flag("--remove-stopwords", args.cfg.remove_stopwords,
                "Drop stopwords before featurizing");
}

}  // namespace

int run(int argc, const char* const* argv) {
  Args args;
  int (*command)(const Args&) = nullptr;

  CLI::App app{"Conversation-corpus profiling toolkit"};
  app.require_subcommand(1);

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Validate a corpus directory and report totals");
  add_corpus_arg(ingest, args);
  add_out_flag(ingest, args, "Report path (default stdout)");
  ingest->callback([&] { command = cmd_ingest; });

  CLI::App* stats = app.add_subcommand(
      "stats", "Per-category corpus statistics as CSV");
  add_corpus_arg(stats, args);
  add_scheme_flag(stats, args);
  add_out_flag(stats, args, "CSV path (default stdout)");
  stats->callback([&] { command = cmd_stats; });

  CLI::App* terms = app.add_subcommand(
      "terms", "Characteristic terms by Scaled F-score as plot CSV");
  add_corpus_arg(terms, args);
  add_scheme_flag(terms, args);
  terms->add_option("--top", args.cfg.top, "Terms highlighted per category")
      ->capture_default_str();
  terms->add_option("--min-count", args.cfg.min_count,
                    "Minimum combined term count")
      ->capture_default_str();
  terms->add_flag("--all", args.all_terms, "Emit every term, not the top");
  terms->add_flag("--keep-stopwords", args.keep_stopwords,
                  "Score stopwords too");
  add_tokenizer_flags(terms, args);
  add_out_flag(terms, args, "CSV path (default stdout)");
  terms->callback([&] { command = cmd_terms; });

  CLI::App* nonlex = app.add_subcommand(
      "nonlex", "Non-lexical feature profile as CSV");
  add_corpus_arg(nonlex, args);
  add_scheme_flag(nonlex, args);
  add_out_flag(nonlex, args, "CSV path (default stdout)");
  nonlex->callback([&] { command = cmd_nonlex; });

  CLI::App* balance_cmd = app.add_subcommand(
      "balance", "Balanced cohort manifest, one unit id per line");
  add_corpus_arg(balance_cmd, args);
  add_scheme_flag(balance_cmd, args);
  add_unit_flags(balance_cmd, args);
  add_seed_flag(balance_cmd, args);
  add_out_flag(balance_cmd, args, "Manifest path (default stdout)");
  balance_cmd->callback([&] { command = cmd_balance; });

  CLI::App* split = app.add_subcommand(
      "split", "Holdout or k-fold unit-id manifests");
  add_corpus_arg(split, args);
  add_scheme_flag(split, args);
  add_unit_flags(split, args);
  add_seed_flag(split, args);
  split->add_option("--kind", args.kind, "Split kind")
      ->check(CLI::IsMember({"holdout", "kfold"}))
      ->capture_default_str();
  split->add_option("--test-fraction", args.cfg.test_fraction,
                    "Holdout test share")
      ->capture_default_str();
  split->add_option("--folds", args.cfg.folds, "Fold count")
      ->capture_default_str();
  split->add_flag("--balance", args.balanced, "Balance before splitting");
  add_out_flag(split, args,
               "Manifest base path; writes BASE.train/BASE.test or "
               "BASE.fold1..K (default stdout)");
  split->callback([&] { command = cmd_split; });

  CLI::App* train = app.add_subcommand(
      "train", "Balance, hold out, train a classifier and save it");
  add_corpus_arg(train, args);
  add_scheme_flag(train, args);
  add_unit_flags(train, args);
  add_seed_flag(train, args);
  add_tokenizer_flags(train, args);
  add_train_flags(train, args);
  train->add_option("--test-fraction", args.cfg.test_fraction,
                    "Holdout test share")
      ->capture_default_str();
  train->add_option("--out", args.model, "Model file path")->required();
  train->add_option("--report", args.report,
                    "Report path (default stdout)");
  train->callback([&] { command = cmd_train; });

  CLI::App* predict = app.add_subcommand(
      "predict", "Per-unit predictions from a saved model as CSV");
  add_corpus_arg(predict, args);
  predict->add_option("--model", args.model, "Model file")->required();
  add_out_flag(predict, args, "CSV path (default stdout)");
  predict->callback([&] { command = cmd_predict; });

  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate",
      "Cross-validate the full pipeline, or score a saved model");
  add_corpus_arg(evaluate_cmd, args);
  add_scheme_flag(evaluate_cmd, args);
  add_unit_flags(evaluate_cmd, args);
  add_seed_flag(evaluate_cmd, args);
  add_tokenizer_flags(evaluate_cmd, args);
  add_train_flags(evaluate_cmd, args);
  evaluate_cmd->add_option("--folds", args.cfg.folds, "Fold count")
      ->capture_default_str();
  evaluate_cmd->add_option("--model", args.model,
                           "Score this saved model instead");
  add_out_flag(evaluate_cmd, args, "Report path (default stdout)");
  evaluate_cmd->callback([&] { command = cmd_evaluate; });

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic corpus directory");
  synth->add_option("--preset", args.preset, "Generation preset")
      ->check(CLI::IsMember({"planted", "null", "nonlex", "mixed"}))
      ->capture_default_str();
  synth->add_option("--speakers", args.speakers, "Speakers per category")
      ->capture_default_str();
  synth->add_option("--turns", args.turns, "Turns per speaker")
      ->capture_default_str();
  add_seed_flag(synth, args);
  synth->add_option("--out", args.cfg.out, "Output directory")->required();
  synth->add_option("--report", args.report,
                    "Report path (default stdout)");
  synth->callback([&] { command = cmd_synth; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  args.cfg.group_by_speaker = !args.no_speaker_groups;
  args.cfg.bigrams = !args.no_bigrams;
  // Salience defaults to a stopword-free vocabulary; classification keeps
  // stopwords unless asked (--remove-stopwords).
  if (command == cmd_terms) {
    args.cfg.remove_stopwords = !args.keep_stopwords;
  }

  try {
    return command(args);
  } catch (const Error& e) {
    std::cerr << "talkprof: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "talkprof: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace talkprofiler::cli
