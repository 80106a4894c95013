#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "talkprofiler/classifier.hpp"
#include "talkprofiler/csv.hpp"
#include "talkprofiler/errors.hpp"

namespace talkprofiler {
namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;
constexpr std::string_view kModelFormat = "talkprofiler-model";

// Hash over a canonical rendering of everything that affects predictions;
// load refuses a file whose payload does not match its recorded hash.
std::string content_hash(const TrainedModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::string_view text) {
    for (const char c : text) {
      h ^= static_cast<std::uint8_t>(c);
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const std::string& term : model.vocabulary) mix(term);
  for (const double w : model.weights) mix(format_double(w));
  mix(format_double(model.bias));
  for (const double m : model.standardization.mean) mix(format_double(m));
  for (const double s : model.standardization.scale) mix(format_double(s));
  mix(model.includes_nonlex ? "lex+nonlex" : "lex");
  mix(to_string(model.scheme));
  mix(model.unit == UnitKind::Turn ? "turn" : "speaker");
  mix(model.include_particles ? "particles" : "no-particles");
  mix(model.remove_stopwords ? "stopwords-removed" : "stopwords-kept");
  mix(model.orders.unigrams ? "uni" : "no-uni");
  mix(model.orders.bigrams ? "bi" : "no-bi");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

[[noreturn]] void bad(const std::string& what) {
  raise(ErrorKind::ModelFormat, what);
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["scheme"] = to_string(model.scheme);
  const auto categories = scheme_categories(model.scheme);
  doc["categories"] = {to_string(categories[0]), to_string(categories[1])};
  doc["unit"] = model.unit == UnitKind::Turn ? "turn" : "speaker";
  doc["features"] = model.includes_nonlex ? "lex+nonlex" : "lex";
  doc["include_particles"] = model.include_particles;
  doc["remove_stopwords"] = model.remove_stopwords;
  doc["orders"] = {{"unigrams", model.orders.unigrams},
                   {"bigrams", model.orders.bigrams}};
  doc["config"] = {{"lambda", model.config.lambda},
                   {"tol", model.config.tol},
                   {"max_epochs", model.config.max_epochs}};
  doc["seed"] = model.seed;
  doc["epochs"] = model.epochs;
  doc["final_grad_norm"] = model.final_grad_norm;
  doc["vocabulary"] = model.vocabulary;
  doc["weights"] = model.weights;
  doc["bias"] = model.bias;
  doc["mean"] = model.standardization.mean;
  doc["scale"] = model.standardization.scale;
  doc["content_hash"] = content_hash(model);
  return doc.dump(1) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    bad(std::string("not valid JSON: ") + ex.what());
  }
  if (!doc.is_object()) bad("model file must hold a JSON object");
  try {
    if (doc.at("format") != kModelFormat) bad("unknown format tag");
    if (doc.at("version") != kModelVersion) {
      bad("unsupported model version");
    }
    TrainedModel model;
    const auto scheme = scheme_from_string(
        doc.at("scheme").get_ref<const std::string&>());
    if (!scheme) bad("unknown scheme");
    model.scheme = *scheme;
    const std::string& unit = doc.at("unit").get_ref<const std::string&>();
    if (unit == "speaker") {
      model.unit = UnitKind::Speaker;
    } else if (unit == "turn") {
      model.unit = UnitKind::Turn;
    } else {
      bad("unknown unit kind");
    }
    const std::string& features =
        doc.at("features").get_ref<const std::string&>();
    if (features == "lex") {
      model.includes_nonlex = false;
    } else if (features == "lex+nonlex") {
      model.includes_nonlex = true;
    } else {
      bad("unknown features mode");
    }
    model.include_particles = doc.at("include_particles").get<bool>();
    model.remove_stopwords = doc.at("remove_stopwords").get<bool>();
    model.orders.unigrams = doc.at("orders").at("unigrams").get<bool>();
    model.orders.bigrams = doc.at("orders").at("bigrams").get<bool>();
    model.config.lambda = doc.at("config").at("lambda").get<double>();
    model.config.tol = doc.at("config").at("tol").get<double>();
    model.config.max_epochs =
        doc.at("config").at("max_epochs").get<std::size_t>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.epochs = doc.at("epochs").get<std::size_t>();
    model.final_grad_norm = doc.at("final_grad_norm").get<double>();
    model.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.standardization.mean =
        doc.at("mean").get<std::vector<double>>();
    model.standardization.scale =
        doc.at("scale").get<std::vector<double>>();
    if (model.weights.size() != model.dim() ||
        model.standardization.mean.size() != model.dim() ||
        model.standardization.scale.size() != model.dim()) {
      bad("weight/standardization shapes do not match the vocabulary");
    }
    for (const double s : model.standardization.scale) {
      if (!(s > 0.0)) bad("scale entries must be positive");
    }
    if (doc.at("content_hash") != content_hash(model)) {
      bad("content hash mismatch: file was altered or truncated");
    }
    return model;
  } catch (const json::exception& ex) {
    bad(std::string("missing or mistyped field: ") + ex.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::Io, "cannot open " + path.string());
  out << model_to_json(model);
  if (!out.flush()) raise(ErrorKind::Io, "cannot write " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Io, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace talkprofiler
