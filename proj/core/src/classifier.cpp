#include "talkprofiler/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "talkprofiler/errors.hpp"
#include "talkprofiler/parallel.hpp"
#include "talkprofiler/salience.hpp"

namespace talkprofiler {
namespace {

constexpr double kArmijoC = 1e-4;
constexpr std::size_t kGradChunk = 1024;

Scheme scheme_of(CategoryLabel category) {
  return (category == CategoryLabel::Female || category == CategoryLabel::Male)
             ? Scheme::Gender
             : Scheme::Age;
}

double stable_softplus(double z) {
  // log(1 + e^z) without overflow on either side.
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Applies fn(feature index, raw value) over the sparse lexical entries and,
// when present, the dense non-lexical block at [dim - 9, dim).
template <class Fn>
void for_each_feature(const FeatureVector& v, std::size_t dim, Fn&& fn) {
  for (const auto& [index, value] : v.lexical) fn(index, value);
  if (v.has_nonlex) {
    const std::size_t offset = dim - kNonLexicalFeatureCount;
    for (std::size_t j = 0; j < kNonLexicalFeatureCount; ++j) {
      fn(offset + j, v.nonlex[j]);
    }
  }
}

struct LossPartial {
  double loss = 0.0;
  double resid_sum = 0.0;           // R = sum of (p_i - y_i)
  std::vector<double> resid_dot;    // S_j = sum of (p_i - y_i) x_ij

  LossPartial() = default;
  explicit LossPartial(std::size_t dim) : resid_dot(dim, 0.0) {}
};

// Sum loss and, when wanted, raw-residual accumulators over the examples.
// z_i = sum_j ws_j x_ij + shift with ws_j = w_j / scale_j and
// shift = b - sum_j w_j mean_j / scale_j, which standardizes on the fly.
LossPartial accumulate_loss(std::span<const FeatureVector> vectors,
                            std::span<const double> scaled_weights,
                            double shift, bool want_gradient) {
  const std::size_t dim = scaled_weights.size();
  return parallel_chunk_reduce(
      vectors.size(), kGradChunk, LossPartial(want_gradient ? dim : 0),
      [&](std::size_t begin, std::size_t end) {
        LossPartial partial(want_gradient ? dim : 0);
        for (std::size_t i = begin; i < end; ++i) {
          const FeatureVector& v = vectors[i];
          double z = shift;
          for_each_feature(v, dim, [&](std::size_t j, double x) {
            z += scaled_weights[j] * x;
          });
          partial.loss += stable_softplus(z) - (v.label ? z : 0.0);
          if (want_gradient) {
            const double r = sigmoid(z) - static_cast<double>(v.label);
            partial.resid_sum += r;
            for_each_feature(v, dim, [&](std::size_t j, double x) {
              partial.resid_dot[j] += r * x;
            });
          }
        }
        return partial;
      },
      [](LossPartial& out, LossPartial&& in) {
        out.loss += in.loss;
        out.resid_sum += in.resid_sum;
        for (std::size_t j = 0; j < in.resid_dot.size(); ++j) {
          out.resid_dot[j] += in.resid_dot[j];
        }
      });
}

// loss and gradient wrt (weights, bias); returns false when non-finite.
bool loss_gradient_impl(std::span<const FeatureVector> vectors,
                        const Standardization& st,
                        std::span<const double> weights, double bias,
                        double lambda, std::span<double> grad, double& loss) {
  const std::size_t dim = weights.size();
  std::vector<double> scaled(dim);
  double shift = bias;
  double penalty = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    scaled[j] = weights[j] / st.scale[j];
    shift -= scaled[j] * st.mean[j];
    penalty += weights[j] * weights[j];
  }
  const bool want_gradient = !grad.empty();
  LossPartial acc = accumulate_loss(vectors, scaled, shift, want_gradient);
  loss = acc.loss + 0.5 * lambda * penalty;
  if (!std::isfinite(loss)) return false;
  if (want_gradient) {
    for (std::size_t j = 0; j < dim; ++j) {
      grad[j] = (acc.resid_dot[j] - st.mean[j] * acc.resid_sum) / st.scale[j] +
                lambda * weights[j];
      if (!std::isfinite(grad[j])) return false;
    }
    grad[dim] = acc.resid_sum;
    if (!std::isfinite(grad[dim])) return false;
  }
  return true;
}

std::uint64_t count_terms_of_unit(const Unit& unit,
                                  const TokenizerConfig& config,
                                  TurnScratch& scratch, TermCounts& counts) {
  std::uint64_t tokens = 0;
  for (const Turn* turn : unit.turns) {
    for_each_turn_ngram(*turn, config, scratch,
                        [&counts](std::string_view gram) {
                          const auto it = counts.find(gram);
                          if (it == counts.end()) {
                            counts.emplace(std::string(gram), 1);
                          } else {
                            ++it->second;
                          }
                        });
    tokens += turn_token_count(*turn, config);
  }
  return tokens;
}

}  // namespace

std::uint8_t class_of(CategoryLabel category) {
  return (category == CategoryLabel::Male ||
          category == CategoryLabel::Young)
             ? 1
             : 0;
}

Vocabulary::Vocabulary(std::vector<std::string> terms)
    : terms_(std::move(terms)) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::size_t Vocabulary::index_of(std::string_view term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? npos : it->second;
}

Vocabulary build_vocabulary(std::span<const Unit> units,
                            const TokenizerConfig& config, std::size_t size) {
  if (size == 0) raise(ErrorKind::InvalidSpec, "vocabulary size must be >= 1");
  if (units.empty()) {
    raise(ErrorKind::EmptyTrainingSet, "no units to build a vocabulary from");
  }
  TermCounts counts;
  TurnScratch scratch;
  for (const Unit& unit : units) {
    count_terms_of_unit(unit, config, scratch, counts);
  }
  std::vector<std::pair<std::string_view, std::uint64_t>> ranked;
  ranked.reserve(counts.size());
  for (const auto& [term, count] : counts) ranked.push_back({term, count});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > size) ranked.resize(size);
  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (const auto& [term, count] : ranked) terms.emplace_back(term);
  return Vocabulary(std::move(terms));
}

std::size_t feature_dim(std::size_t vocabulary_size, bool include_nonlex) {
  return vocabulary_size + (include_nonlex ? kNonLexicalFeatureCount : 0);
}

FeatureVector vectorize(const Unit& unit, const Vocabulary& vocabulary,
                        const TokenizerConfig& config, bool include_nonlex) {
  FeatureVector out;
  out.label = class_of(unit.category);

  TurnScratch scratch;
  std::unordered_map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t tokens = 0;
  for (const Turn* turn : unit.turns) {
    for_each_turn_ngram(*turn, config, scratch,
                        [&](std::string_view gram) {
                          const std::size_t index = vocabulary.index_of(gram);
                          if (index != Vocabulary::npos) {
                            ++counts[static_cast<std::uint32_t>(index)];
                          }
                        });
    tokens += turn_token_count(*turn, config);
  }
  if (tokens > 0) {
    out.lexical.reserve(counts.size());
    for (const auto& [index, count] : counts) {
      out.lexical.push_back(
          {index, static_cast<double>(count) / static_cast<double>(tokens)});
    }
    std::sort(out.lexical.begin(), out.lexical.end());
  }
  if (include_nonlex) {
    out.has_nonlex = true;
    out.nonlex = nonlexical_rates(count_nonlexical(unit.turns));
  }
  return out;
}

std::vector<FeatureVector> vectorize_units(std::span<const Unit> units,
                                           const Vocabulary& vocabulary,
                                           const TokenizerConfig& config,
                                           bool include_nonlex) {
  std::vector<FeatureVector> out(units.size());
  parallel_for(units.size(), [&](std::size_t i) {
    out[i] = vectorize(units[i], vocabulary, config, include_nonlex);
  });
  return out;
}

Standardization fit_standardization(std::span<const FeatureVector> vectors,
                                    std::size_t dim) {
  Standardization st;
  st.mean.assign(dim, 0.0);
  st.scale.assign(dim, 1.0);
  if (vectors.empty()) return st;
  std::vector<double> sum(dim, 0.0);
  std::vector<double> sum_sq(dim, 0.0);
  for (const FeatureVector& v : vectors) {
    for_each_feature(v, dim, [&](std::size_t j, double x) {
      sum[j] += x;
      sum_sq[j] += x * x;
    });
  }
  const double n = static_cast<double>(vectors.size());
  for (std::size_t j = 0; j < dim; ++j) {
    const double mean = sum[j] / n;
    const double variance = std::max(0.0, sum_sq[j] / n - mean * mean);
    const double stddev = std::sqrt(variance);
    st.mean[j] = mean;
    // Constant features keep scale 1; with a zero-initialized weight they
    // stay inert instead of dividing by zero.
    st.scale[j] = stddev < 1e-12 ? 1.0 : stddev;
  }
  return st;
}

double logistic_loss(std::span<const FeatureVector> vectors,
                     const Standardization& standardization,
                     std::span<const double> weights, double bias,
                     double lambda, std::span<double> grad) {
  if (standardization.mean.size() != weights.size() ||
      standardization.scale.size() != weights.size()) {
    raise(ErrorKind::DimensionMismatch,
          "standardization size does not match weights");
  }
  if (!grad.empty() && grad.size() != weights.size() + 1) {
    raise(ErrorKind::DimensionMismatch, "gradient span must be dim + 1");
  }
  double loss = 0.0;
  if (!loss_gradient_impl(vectors, standardization, weights, bias, lambda,
                          grad, loss)) {
    raise(ErrorKind::NonFinite, "loss or gradient is not finite");
  }
  return loss;
}

TokenizerConfig TrainedModel::tokenizer_config() const {
  TokenizerConfig config;
  config.include_particles = include_particles;
  config.remove_stopwords = remove_stopwords;
  config.orders = orders;
  return config;
}

TrainedModel train(std::span<const FeatureVector> vectors,
                   Vocabulary vocabulary, bool includes_nonlex,
                   const TrainConfig& config) {
  if (vectors.empty()) {
    raise(ErrorKind::EmptyTrainingSet, "no training vectors");
  }
  bool saw[2] = {false, false};
  for (const FeatureVector& v : vectors) {
    if (v.label > 1) raise(ErrorKind::InvalidSpec, "labels must be 0 or 1");
    if (v.has_nonlex != includes_nonlex) {
      raise(ErrorKind::DimensionMismatch,
            "vector non-lexical block does not match the requested features");
    }
    saw[v.label] = true;
  }
  if (!saw[0] || !saw[1]) {
    raise(ErrorKind::SingleClass, "training data holds a single class");
  }
  const std::size_t dim = feature_dim(vocabulary.size(), includes_nonlex);
  for (const FeatureVector& v : vectors) {
    if (!v.lexical.empty() && v.lexical.back().first >= vocabulary.size()) {
      raise(ErrorKind::DimensionMismatch,
            "lexical index outside the vocabulary");
    }
  }
  if (config.lambda < 0.0 || !(config.tol > 0.0)) {
    raise(ErrorKind::InvalidSpec, "lambda must be >= 0 and tol > 0");
  }

  TrainedModel model;
  model.vocabulary = std::move(vocabulary).terms();
  model.includes_nonlex = includes_nonlex;
  model.config = config;
  model.standardization = fit_standardization(vectors, dim);
  model.weights.assign(dim, 0.0);
  model.bias = 0.0;

  std::vector<double> weights(dim, 0.0);
  double bias = 0.0;
  std::vector<double> grad(dim + 1, 0.0);
  double loss = 0.0;
  if (!loss_gradient_impl(vectors, model.standardization, weights, bias,
                          config.lambda, grad, loss)) {
    raise(ErrorKind::NonFinite, "initial loss is not finite");
  }

  std::vector<double> candidate(dim, 0.0);
  std::vector<double> candidate_grad(dim + 1, 0.0);
  double step = 1.0;
  std::size_t epochs = 0;
  const auto inf_norm = [](std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  };

  while (epochs < config.max_epochs && inf_norm(grad) >= config.tol) {
    double grad_sq = 0.0;
    for (double g : grad) grad_sq += g * g;
    bool accepted = false;
    while (step >= 1e-20) {
      for (std::size_t j = 0; j < dim; ++j) {
        candidate[j] = weights[j] - step * grad[j];
      }
      const double candidate_bias = bias - step * grad[dim];
      double candidate_loss = 0.0;
      const bool finite = loss_gradient_impl(
          vectors, model.standardization, candidate, candidate_bias,
          config.lambda, candidate_grad, candidate_loss);
      if (finite && candidate_loss <= loss - kArmijoC * step * grad_sq) {
        weights.swap(candidate);
        bias = candidate_bias;
        grad.swap(candidate_grad);
        loss = candidate_loss;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: no further progress possible
    ++epochs;
  }

  model.weights = std::move(weights);
  model.bias = bias;
  model.epochs = epochs;
  model.final_grad_norm = inf_norm(grad);
  return model;
}

namespace {

void check_vector_shape(const TrainedModel& model, const FeatureVector& v) {
  if (v.has_nonlex != model.includes_nonlex) {
    raise(ErrorKind::DimensionMismatch,
          "vector non-lexical block does not match the model");
  }
  if (!v.lexical.empty() && v.lexical.back().first >= model.vocabulary.size()) {
    raise(ErrorKind::DimensionMismatch, "lexical index outside the model");
  }
}

// Precomputed prediction state shared across calls.
struct Predictor {
  std::vector<double> scaled;
  double shift = 0.0;

  explicit Predictor(const TrainedModel& model) {
    const std::size_t dim = model.dim();
    scaled.resize(dim);
    shift = model.bias;
    for (std::size_t j = 0; j < dim; ++j) {
      scaled[j] = model.weights[j] / model.standardization.scale[j];
      shift -= scaled[j] * model.standardization.mean[j];
    }
  }

  double probability(const FeatureVector& v) const {
    double z = shift;
    for_each_feature(v, scaled.size(), [&](std::size_t j, double x) {
      z += scaled[j] * x;
    });
    return sigmoid(z);
  }
};

}  // namespace

double predict(const TrainedModel& model, const FeatureVector& vector) {
  check_vector_shape(model, vector);
  return Predictor(model).probability(vector);
}

std::uint8_t predict_class(const TrainedModel& model,
                           const FeatureVector& vector) {
  return predict(model, vector) >= 0.5 ? 1 : 0;
}

EvalReport evaluate(const TrainedModel& model,
                    std::span<const FeatureVector> vectors) {
  if (vectors.empty()) raise(ErrorKind::EmptyTestSet, "no test vectors");
  for (const FeatureVector& v : vectors) check_vector_shape(model, v);
  const Predictor predictor(model);
  std::size_t correct = 0;
  for (const FeatureVector& v : vectors) {
    const std::uint8_t predicted = predictor.probability(v) >= 0.5 ? 1 : 0;
    if (predicted == v.label) ++correct;
  }
  EvalReport report;
  report.n_test = vectors.size();
  report.accuracy =
      static_cast<double>(correct) / static_cast<double>(vectors.size());
  report.std_error = std::sqrt(report.accuracy * (1.0 - report.accuracy) /
                               static_cast<double>(vectors.size()));
  report.unit = model.unit;
  report.includes_nonlex = model.includes_nonlex;
  report.folds = 0;
  return report;
}

namespace {

std::vector<Unit> select_units(const std::vector<Unit>& units,
                               const std::vector<std::size_t>& indices) {
  std::vector<Unit> out;
  out.reserve(indices.size());
  for (const std::size_t i : indices) out.push_back(units[i]);
  return out;
}

TrainedModel train_on(const std::vector<Unit>& train_units,
                      const PipelineConfig& config, std::uint64_t seed) {
  const Vocabulary vocabulary =
      build_vocabulary(train_units, config.tokenizer, config.vocab_size);
  const std::vector<FeatureVector> vectors = vectorize_units(
      train_units, vocabulary, config.tokenizer, config.include_nonlex);
  TrainedModel model = train(vectors, Vocabulary(vocabulary.terms()),
                             config.include_nonlex, config.train);
  model.scheme = scheme_of(train_units.front().category);
  model.unit = train_units.front().kind;
  model.include_particles = config.tokenizer.include_particles;
  model.remove_stopwords = config.tokenizer.remove_stopwords;
  model.orders = config.tokenizer.orders;
  model.seed = seed;
  return model;
}

}  // namespace

HoldoutResult run_holdout(const std::vector<Unit>& units,
                          const PipelineConfig& config, double test_fraction,
                          std::uint64_t seed) {
  const Split split =
      holdout_split(units, test_fraction, seed, config.group_by_speaker);
  const std::vector<Unit> train_units = select_units(units, split.train);
  const std::vector<Unit> test_units = select_units(units, split.test);
  HoldoutResult result{train_on(train_units, config, seed), EvalReport{}};
  const Vocabulary vocabulary{
      std::vector<std::string>(result.model.vocabulary)};
  const std::vector<FeatureVector> test_vectors = vectorize_units(
      test_units, vocabulary, config.tokenizer, config.include_nonlex);
  result.report = evaluate(result.model, test_vectors);
  return result;
}

EvalReport cross_validate(const std::vector<Unit>& units,
                          const PipelineConfig& config, std::size_t k,
                          std::uint64_t seed) {
  const auto folds = kfold(units, k, seed, config.group_by_speaker);
  std::vector<double> accuracies;
  accuracies.reserve(folds.size());
  std::size_t n_test = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<bool> held_out(units.size(), false);
    for (const std::size_t i : folds[f]) held_out[i] = true;
    std::vector<Unit> train_units;
    train_units.reserve(units.size() - folds[f].size());
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (!held_out[i]) train_units.push_back(units[i]);
    }
    const TrainedModel model = train_on(train_units, config, seed);
    const Vocabulary vocabulary{std::vector<std::string>(model.vocabulary)};
    const std::vector<Unit> test_units = select_units(units, folds[f]);
    const std::vector<FeatureVector> test_vectors = vectorize_units(
        test_units, vocabulary, config.tokenizer, config.include_nonlex);
    const EvalReport fold_report = evaluate(model, test_vectors);
    accuracies.push_back(fold_report.accuracy);
    n_test += fold_report.n_test;
  }

  EvalReport report;
  report.folds = folds.size();
  report.n_test = n_test;
  report.unit = units.empty() ? UnitKind::Speaker : units.front().kind;
  report.includes_nonlex = config.include_nonlex;
  double mean = 0.0;
  for (const double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  double variance = 0.0;
  for (const double a : accuracies) variance += (a - mean) * (a - mean);
  variance /= static_cast<double>(accuracies.size() - 1);
  report.accuracy = mean;
  report.std_error =
      std::sqrt(variance) / std::sqrt(static_cast<double>(accuracies.size()));
  return report;
}

}  // namespace talkprofiler
