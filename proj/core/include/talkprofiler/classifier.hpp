#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "talkprofiler/cohorts.hpp"
#include "talkprofiler/corpus.hpp"
#include "talkprofiler/nonlex.hpp"
#include "talkprofiler/tokenizer.hpp"

namespace talkprofiler {

// Class index of a category within its scheme: 0 for Female/Old, 1 for
// Male/Young. Class 1 is the positive class everywhere.
std::uint8_t class_of(CategoryLabel category);

// Ordered term list built from training units only. Feature index = position.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  // Feature index of `term`, or npos.
  std::size_t index_of(std::string_view term) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t, TransparentStringHash,
                     std::equal_to<>>
      index_;
};

// Top `size` terms by total count over the training units, ties by count
// descending then ascending term bytes. EmptyTrainingSet if units is empty.
Vocabulary build_vocabulary(std::span<const Unit> units,
                            const TokenizerConfig& config, std::size_t size);

// One unit's features. Lexical entries are (vocabulary index, count / unit
// token count) with the token count taken under the same tokenizer config;
// entries are sorted by index and only present for nonzero counts. The nine
// non-lexical rates are appended after the lexical block when present.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> lexical;
  std::array<double, kNonLexicalFeatureCount> nonlex{};
  bool has_nonlex = false;
  std::uint8_t label = 0;
};

FeatureVector vectorize(const Unit& unit, const Vocabulary& vocabulary,
                        const TokenizerConfig& config, bool include_nonlex);

std::vector<FeatureVector> vectorize_units(std::span<const Unit> units,
                                           const Vocabulary& vocabulary,
                                           const TokenizerConfig& config,
                                           bool include_nonlex);

// Per-feature affine transform fitted on training data: population mean and
// standard deviation, with zero-variance features given scale 1.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;
};

Standardization fit_standardization(std::span<const FeatureVector> vectors,
                                    std::size_t dim);

// Dense feature dimension of a vector set (lexical dim + 9 when nonlex).
std::size_t feature_dim(std::size_t vocabulary_size, bool include_nonlex);

struct TrainConfig {
  double lambda = 1.0;  // L2 strength on weights; bias unpenalized
  double tol = 1e-6;    // stop when gradient infinity norm drops below
  std::size_t max_epochs = 1000;
};

// Sum over examples of logistic loss at (weights, bias) on standardized
// features, plus (lambda/2)|w|^2. `grad` receives d(loss)/d(weights) in
// [0, dim) and d(loss)/d(bias) in slot dim; pass empty to skip. NonFinite
// if the result is not finite.
double logistic_loss(std::span<const FeatureVector> vectors,
                     const Standardization& standardization,
                     std::span<const double> weights, double bias,
                     double lambda, std::span<double> grad);

struct TrainedModel {
  std::vector<std::string> vocabulary;
  std::vector<double> weights;  // size = vocab + 9 when includes_nonlex
  double bias = 0.0;
  Standardization standardization;
  bool includes_nonlex = false;
  Scheme scheme = Scheme::Gender;
  UnitKind unit = UnitKind::Speaker;
  bool include_particles = false;
  bool remove_stopwords = false;
  NGramOrders orders;
  TrainConfig config;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;         // accepted descent steps taken
  double final_grad_norm = 0.0;   // infinity norm at the returned weights

  std::size_t dim() const {
    return feature_dim(vocabulary.size(), includes_nonlex);
  }
  TokenizerConfig tokenizer_config() const;
};

// Full-batch gradient descent with backtracking (Armijo) line search from
// w = 0, b = 0. Deterministic. Requires both classes present (SingleClass).
// Vocabulary terms are recorded in the model; metadata fields other than the
// trained parameters are left at defaults for the caller to fill.
TrainedModel train(std::span<const FeatureVector> vectors,
                   Vocabulary vocabulary, bool includes_nonlex,
                   const TrainConfig& config);

// sigma(w . x_standardized + b), the probability of class 1.
// DimensionMismatch if the vector shape disagrees with the model.
double predict(const TrainedModel& model, const FeatureVector& vector);

// Class from probability; the 0.5 tie goes to class 1.
std::uint8_t predict_class(const TrainedModel& model,
                           const FeatureVector& vector);

struct EvalReport {
  double accuracy = 0.0;
  double std_error = 0.0;
  std::size_t n_test = 0;
  UnitKind unit = UnitKind::Speaker;
  bool includes_nonlex = false;
  std::size_t folds = 0;  // 0 for a single holdout
};

// Holdout evaluation; std_error is binomial sqrt(acc(1-acc)/n).
// EmptyTestSet if vectors is empty.
EvalReport evaluate(const TrainedModel& model,
                    std::span<const FeatureVector> vectors);

// End-to-end protocol settings shared by the holdout and cross-validation
// runners.
struct PipelineConfig {
  TokenizerConfig tokenizer;   // remove_stopwords defaults off here
  bool include_nonlex = false;
  std::size_t vocab_size = 5000;
  TrainConfig train;
  bool group_by_speaker = true;  // leakage guard for turn units
};

struct HoldoutResult {
  TrainedModel model;
  EvalReport report;
};

// Splits units, builds the vocabulary on the training side only, trains and
// evaluates. Seed drives the split.
HoldoutResult run_holdout(const std::vector<Unit>& units,
                          const PipelineConfig& config, double test_fraction,
                          std::uint64_t seed);

// Stratified k-fold cross-validation; every fold gets its own vocabulary and
// standardization from its training portion. accuracy = mean of fold
// accuracies, std_error = sample standard deviation of fold accuracies
// divided by sqrt(k).
EvalReport cross_validate(const std::vector<Unit>& units,
                          const PipelineConfig& config, std::size_t k,
                          std::uint64_t seed);

// Versioned JSON model files with a content hash over the payload.
// ModelFormat on version/hash/shape mismatch, Io on filesystem failure.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

}  // namespace talkprofiler
