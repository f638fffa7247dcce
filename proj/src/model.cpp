#include "darkpat/model.hpp"

#include "darkpat/error.hpp"
#include "darkpat/hashing.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace darkpat {

namespace {

constexpr double kLogClamp = 1e-12;

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

template <typename T, typename Fn>
std::string join(const std::vector<T>& values, Fn fn) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fn(values[i]);
  }
  out += ']';
  return out;
}

std::string vocabulary_entry(const Vocabulary& vocab, std::size_t i) {
  std::string out = "[" + quote(vocab.terms()[i]) + "," + std::to_string(vocab.doc_freq()[i]) + ",";
  out += vocab.idf() ? format_double((*vocab.idf())[i]) : "null";
  out += "]";
  return out;
}

// Compact text of [vocabulary, weights, bias]; the checksum covers exactly these bytes.
std::string canonical_payload(const Vocabulary& vocab, const Parameters& params) {
  std::string out = "[[";
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (i) out += ',';
    out += vocabulary_entry(vocab, i);
  }
  out += "],";
  out += join(params.weights, format_double);
  out += ',';
  out += format_double(params.bias);
  out += ']';
  return out;
}

std::string vectorizer_json(const VectorizerConfig& c) {
  std::ostringstream o;
  o << "{\"ngram_min\":" << c.ngram_min << ",\"ngram_max\":" << c.ngram_max << ",\"max_features\":"
    << (c.max_features ? std::to_string(*c.max_features) : std::string("null"))
    << ",\"min_df\":" << c.min_df << ",\"weighting\":\"" << weighting_name(c.weighting)
    << "\",\"strip_html\":" << (c.preprocessing.strip_html ? "true" : "false")
    << ",\"lowercase\":" << (c.preprocessing.lowercase ? "true" : "false") << "}";
  return o.str();
}

std::string train_json(const TrainConfig& c) {
  std::ostringstream o;
  o << "{\"lambda\":" << format_double(c.lambda) << ",\"learning_rate\":" << format_double(c.learning_rate)
    << ",\"max_iters\":" << c.max_iters << ",\"tol\":" << format_double(c.tol)
    << ",\"threshold\":" << format_double(c.threshold) << ",\"seed\":" << c.seed << "}";
  return o.str();
}

bool row_less(const FeatureVector& a, Label la, const FeatureVector& b, Label lb) {
  const auto n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.entries[i];
    const auto& y = b.entries[i];
    if (x.index != y.index) return x.index < y.index;
    if (x.weight != y.weight) return x.weight < y.weight;
  }
  if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size();
  return la < lb;
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be >= 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be > 0");
  }
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold must lie in (0,1)");
}

double default_learning_rate(Weighting weighting) noexcept {
  return weighting == Weighting::TfIdf ? 0.1 : 0.01;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LossGradient loss_and_gradient(const Parameters& params, const FeatureMatrix& data, double lambda) {
  if (data.rows() == 0) throw ValidationError("loss_and_gradient: empty dataset");
  if (!data.has_labels()) throw ValidationError("loss_and_gradient: data has no labels");
  if (params.weights.size() != data.dimension()) {
    throw ValidationError("loss_and_gradient: weight length does not match feature dimension");
  }

  const auto m = static_cast<double>(data.rows());
  LossGradient out;
  out.gradient.weights.assign(params.weights.size(), 0.0);
  double loss = 0.0;
  double bias_grad = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto& x = data.row(i);
    const double y = data.labels()[i] == Label::Dark ? 1.0 : 0.0;
    const double h = sigmoid(x.dot(params.weights) + params.bias);
    const double hc = std::clamp(h, kLogClamp, 1.0 - kLogClamp);
    loss -= y * std::log(hc) + (1.0 - y) * std::log(1.0 - hc);
    const double r = h - y;
    for (const auto& e : x.entries) out.gradient.weights[e.index] += r * e.weight;
    bias_grad += r;
  }

  double sq = 0.0;
  for (double w : params.weights) sq += w * w;
  out.loss = loss / m + lambda / (2.0 * m) * sq;
  for (std::size_t j = 0; j < params.weights.size(); ++j) {
    out.gradient.weights[j] = out.gradient.weights[j] / m + lambda / m * params.weights[j];
  }
  out.gradient.bias = bias_grad / m;
  return out;
}

TrainedModel train(const FeatureMatrix& data, const Vocabulary& vocab, const VectorizerConfig& vconfig,
                   const TrainConfig& config) {
  config.validate();
  if (data.rows() == 0 || !data.has_labels()) throw ValidationError("train: no labeled rows");
  if (data.dimension() != vocab.size()) {
    throw ValidationError("train: feature dimension does not match vocabulary size");
  }
  const auto& labels = data.labels();
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Dark));
  if (positives == 0 || positives == labels.size()) {
    throw ValidationError("train: data holds a single class");
  }
  for (const auto& row : data.row_data()) {
    for (const auto& e : row.entries) {
      if (!std::isfinite(e.weight)) throw ValidationError("train: non-finite feature value");
    }
  }

  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row_less(data.row(a), labels[a], data.row(b), labels[b]);
  });
  FeatureMatrix canonical(data.dimension());
  for (auto i : order) canonical.add_row(data.row(i), labels[i]);

  TrainedModel model;
  model.vocab = vocab;
  model.vectorizer = vconfig;
  model.train = config;
  model.params.weights.assign(data.dimension(), 0.0);

  for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
    auto step = loss_and_gradient(model.params, canonical, config.lambda);
    if (!std::isfinite(step.loss)) {
      throw DivergenceError("training diverged at iteration " + std::to_string(iter) +
                                " (non-finite loss); lower the learning rate",
                            iter);
    }
    model.training_log.push_back(step.loss);
    const auto n = model.training_log.size();
    if (n > 1 && std::abs(model.training_log[n - 1] - model.training_log[n - 2]) < config.tol) break;
    if (iter + 1 == config.max_iters) break;
    for (std::size_t j = 0; j < model.params.weights.size(); ++j) {
      model.params.weights[j] -= config.learning_rate * step.gradient.weights[j];
    }
    model.params.bias -= config.learning_rate * step.gradient.bias;
  }
  return model;
}

TrainedModel train_on_corpus(const Corpus& preprocessed, const VectorizerConfig& vconfig,
                             const TrainConfig& config) {
  auto vocab = fit_vocabulary(preprocessed, vconfig);
  const auto matrix = transform(preprocessed, vocab, vconfig);
  return train(matrix, vocab, vconfig, config);
}

double predict_proba(const TrainedModel& model, const FeatureVector& x) {
  if (x.dimension != model.params.weights.size()) {
    throw ValidationError("feature dimension " + std::to_string(x.dimension) +
                          " does not match model dimension " +
                          std::to_string(model.params.weights.size()));
  }
  return sigmoid(x.dot(model.params.weights) + model.params.bias);
}

Label decide(double probability, double threshold) noexcept {
  return probability >= threshold ? Label::Dark : Label::NotDark;
}

Label predict(const TrainedModel& model, const FeatureVector& x) {
  return decide(predict_proba(model, x), model.train.threshold);
}

double score_text(const TrainedModel& model, std::string_view raw_text) {
  const auto clean = preprocess(raw_text, model.vectorizer.preprocessing);
  return predict_proba(model, transform(clean, model.vocab, model.vectorizer));
}

void write_model(std::ostream& out, const TrainedModel& model) {
  if (model.params.weights.size() != model.vocab.size()) {
    throw ValidationError("model weights do not match vocabulary size");
  }
  const auto payload = canonical_payload(model.vocab, model.params);
  out << "{\n\"format_version\": " << kModelFormatVersion << ",\n";
  out << "\"vectorizer_config\": " << vectorizer_json(model.vectorizer) << ",\n";
  out << "\"train_config\": " << train_json(model.train) << ",\n";
  out << "\"n_docs\": " << model.vocab.n_docs() << ",\n";
  out << "\"vocabulary\": [";
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    out << (i ? ",\n  " : "\n  ") << vocabulary_entry(model.vocab, i);
  }
  out << "\n],\n";
  out << "\"weights\": " << join(model.params.weights, format_double) << ",\n";
  out << "\"bias\": " << format_double(model.params.bias) << ",\n";
  out << "\"training_log\": " << join(model.training_log, format_double) << ",\n";
  out << "\"checksum\": " << crc32(payload) << "\n}\n";
}

TrainedModel read_model(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IntegrityError(std::string("model file is truncated or not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) {
      throw IntegrityError("model file has no format_version");
    }
    const auto& version = doc.at("format_version");
    if (!version.is_number_integer() || version.get<long long>() != kModelFormatVersion) {
      throw IntegrityError("unsupported model format_version " + version.dump() + " (expected " +
                           std::to_string(kModelFormatVersion) + ")");
    }

    TrainedModel model;
    const auto& vc = doc.at("vectorizer_config");
    model.vectorizer.ngram_min = vc.at("ngram_min").get<int>();
    model.vectorizer.ngram_max = vc.at("ngram_max").get<int>();
    if (!vc.at("max_features").is_null()) {
      model.vectorizer.max_features = vc.at("max_features").get<std::size_t>();
    }
    model.vectorizer.min_df = vc.at("min_df").get<std::size_t>();
    model.vectorizer.weighting = parse_weighting(vc.at("weighting").get<std::string>());
    model.vectorizer.preprocessing.strip_html = vc.at("strip_html").get<bool>();
    model.vectorizer.preprocessing.lowercase = vc.at("lowercase").get<bool>();
    model.vectorizer.validate();

    const auto& tc = doc.at("train_config");
    model.train.lambda = tc.at("lambda").get<double>();
    model.train.learning_rate = tc.at("learning_rate").get<double>();
    model.train.max_iters = tc.at("max_iters").get<std::size_t>();
    model.train.tol = tc.at("tol").get<double>();
    model.train.threshold = tc.at("threshold").get<double>();
    model.train.seed = tc.at("seed").get<std::uint64_t>();
    model.train.validate();

    const auto& entries = doc.at("vocabulary");
    const auto& weights = doc.at("weights");
    if (!entries.is_array() || !weights.is_array()) throw IntegrityError("vocabulary/weights must be arrays");
    if (weights.size() != entries.size()) {
      throw IntegrityError("weights length " + std::to_string(weights.size()) +
                           " does not match vocabulary size " + std::to_string(entries.size()));
    }

    std::vector<std::string> terms;
    std::vector<std::size_t> doc_freq;
    std::vector<double> idf;
    bool has_idf = model.vectorizer.weighting == Weighting::TfIdf;
    for (const auto& e : entries) {
      if (!e.is_array() || e.size() != 3) throw IntegrityError("vocabulary entries must be [term, doc_freq, idf]");
      terms.push_back(e[0].get<std::string>());
      doc_freq.push_back(e[1].get<std::size_t>());
      if (has_idf != !e[2].is_null()) throw IntegrityError("idf presence does not match weighting");
      if (has_idf) idf.push_back(e[2].get<double>());
    }
    std::optional<std::vector<double>> idf_opt;
    if (has_idf) idf_opt = std::move(idf);
    model.vocab = Vocabulary(std::move(terms), std::move(doc_freq), doc.at("n_docs").get<std::size_t>(),
                             std::move(idf_opt));
    model.params.weights = weights.get<std::vector<double>>();
    model.params.bias = doc.at("bias").get<double>();
    model.training_log = doc.at("training_log").get<std::vector<double>>();

    const auto stored = doc.at("checksum").get<std::uint32_t>();
    const auto actual = crc32(canonical_payload(model.vocab, model.params));
    if (stored != actual) {
      throw IntegrityError("model checksum mismatch (stored " + std::to_string(stored) + ", computed " +
                           std::to_string(actual) + ")");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("model file is structurally invalid: ") + e.what());
  } catch (const ValidationError& e) {
    throw IntegrityError(std::string("model file is inconsistent: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ostringstream buffer;
  write_model(buffer, model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file '" + path.string() + "'");
  out << buffer.str();
  if (!out) throw IoError("failed writing model file '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file '" + path.string() + "'");
  return read_model(in);
}

}  // namespace darkpat
