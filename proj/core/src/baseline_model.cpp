#include "argrel/baseline_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "argrel/atomic_file.hpp"
#include "argrel/errors.hpp"
#include "argrel/rng.hpp"

namespace argrel::baseline {

double FeatureVector::dense(DenseFeature f) const {
  const auto idx = hashed_dim + static_cast<std::uint32_t>(f);
  auto it = std::lower_bound(entries.begin(), entries.end(), idx,
                             [](const Feature& e, std::uint32_t i) { return e.index < i; });
  return it != entries.end() && it->index == idx ? it->value : 0.0;
}

std::vector<std::string_view> tokenize(std::string_view text) {
  auto word_byte = [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '\'' || c >= 0x80;
  };
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c <= ' ') {
      ++i;
    } else if (word_byte(c)) {
      std::size_t j = i;
      while (j < text.size() && word_byte(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back(text.substr(i, j - i));
      i = j;
    } else {
      out.push_back(text.substr(i, 1));
      ++i;
    }
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr std::string_view kSep = "[SEP]";

void add_ngrams(std::span<const std::string_view> tokens, char ns, std::uint32_t dim,
                std::vector<Feature>& out) {
  std::unordered_map<std::uint32_t, double> tf;
  const std::string prefix{ns, '\x1f'};
  const std::uint64_t seed = fnv1a(prefix);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    tf[static_cast<std::uint32_t>(fnv1a(tokens[i], seed) % dim)] += 1.0;
    if (i + 1 < tokens.size()) {
      std::uint64_t h = fnv1a(tokens[i], fnv1a("\x1e", seed));
      h = fnv1a(tokens[i + 1], fnv1a("\x1f", h));
      tf[static_cast<std::uint32_t>(h % dim)] += 1.0;
    }
  }
  double norm = 0.0;
  for (const auto& [_, v] : tf) norm += v * v;
  if (norm == 0.0) return;
  norm = std::sqrt(norm);
  for (const auto& [idx, v] : tf) out.push_back({idx, v / norm});
}

}  // namespace

FeatureVector featurize_pair(std::string_view p1, std::string_view p2, std::uint32_t hashed_dim) {
  if (hashed_dim == 0) throw Error(ErrorCode::InvalidArgument, "hashed dimension must be > 0");
  FeatureVector fv;
  fv.hashed_dim = hashed_dim;
  const auto t1 = tokenize(p1);
  const auto t2 = tokenize(p2);
  std::vector<std::string_view> joined(t1);
  joined.push_back(kSep);
  joined.insert(joined.end(), t2.begin(), t2.end());

  std::vector<Feature> raw;
  add_ngrams(t1, 'A', hashed_dim, raw);
  add_ngrams(t2, 'B', hashed_dim, raw);
  add_ngrams(joined, 'J', hashed_dim, raw);

  std::sort(raw.begin(), raw.end(), [](const Feature& a, const Feature& b) {
    return a.index != b.index ? a.index < b.index : a.value < b.value;
  });
  for (const auto& f : raw) {
    if (!fv.entries.empty() && fv.entries.back().index == f.index) fv.entries.back().value += f.value;
    else fv.entries.push_back(f);
  }

  const std::set<std::string_view> s1(t1.begin(), t1.end());
  const std::set<std::string_view> s2(t2.begin(), t2.end());
  std::size_t shared = 0;
  for (auto t : s1) shared += s2.count(t);
  const std::size_t uni = s1.size() + s2.size() - shared;
  const double jaccard = uni ? static_cast<double>(shared) / static_cast<double>(uni) : 0.0;
  const double longest = static_cast<double>(std::max<std::size_t>({t1.size(), t2.size(), 1}));
  const double len_ratio =
      std::fabs(static_cast<double>(t1.size()) - static_cast<double>(t2.size())) / longest;

  fv.entries.push_back({hashed_dim + static_cast<std::uint32_t>(DenseFeature::Jaccard), jaccard});
  fv.entries.push_back(
      {hashed_dim + static_cast<std::uint32_t>(DenseFeature::LengthRatio), len_ratio});
  fv.entries.push_back({hashed_dim + static_cast<std::uint32_t>(DenseFeature::SharedTokens),
                        static_cast<double>(shared)});
  return fv;
}

LinearModel::LinearModel(LabelSet labels, const Hyperparams& hp)
    : label_set(std::move(labels)), hyperparams(hp) {
  weights.assign(num_classes() * feature_dim(), 0.0);
  bias.assign(num_classes(), 0.0);
}

std::vector<double> scores(const LinearModel& model, const FeatureVector& x) {
  std::vector<double> s(model.bias);
  const std::size_t dim = model.feature_dim();
  for (std::size_t c = 0; c < s.size(); ++c) {
    const double* row = model.weights.data() + c * dim;
    for (const auto& f : x.entries) {
      if (f.index < dim) s[c] += row[f.index] * f.value;
    }
  }
  return s;
}

ClassDistribution softmax(std::span<const double> s) {
  ClassDistribution d;
  if (s.empty()) return d;
  const double top = *std::max_element(s.begin(), s.end());
  d.probs.resize(s.size());
  double z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) z += d.probs[i] = std::exp(s[i] - top);
  for (auto& p : d.probs) p /= z;
  return d;
}

namespace {

// Calls visit(cls, feature_index, coefficient) for each data-term gradient
// contribution (feature_index == npos for the bias) and returns the mean
// weighted cross-entropy of the batch.
template <typename Visit>
double data_term(const LinearModel& model, std::span<const Example> batch, Visit&& visit) {
  if (batch.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const auto& ex : batch) {
    const auto s = scores(model, ex.features);
    const double top = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double v : s) z += std::exp(v - top);
    loss += ex.weight * (top + std::log(z) - s[ex.gold]) * inv_n;
    for (std::size_t c = 0; c < s.size(); ++c) {
      const double p = std::exp(s[c] - top) / z;
      const double coeff = ex.weight * inv_n * (p - (c == ex.gold ? 1.0 : 0.0));
      if (coeff == 0.0) continue;
      visit(c, std::size_t(-1), coeff);
      for (const auto& f : ex.features.entries) {
        if (f.index < model.feature_dim()) visit(c, f.index, coeff * f.value);
      }
    }
  }
  return loss;
}

}  // namespace

double objective(const LinearModel& model, std::span<const Example> batch) {
  double loss = data_term(model, batch, [](std::size_t, std::size_t, double) {});
  double sq = 0.0;
  for (double w : model.weights) sq += w * w;
  return loss + 0.5 * model.hyperparams.l2 * sq;
}

Gradient gradient(const LinearModel& model, std::span<const Example> batch) {
  Gradient g;
  g.weights.assign(model.weights.size(), 0.0);
  g.bias.assign(model.bias.size(), 0.0);
  const std::size_t dim = model.feature_dim();
  data_term(model, batch, [&](std::size_t c, std::size_t f, double v) {
    if (f == std::size_t(-1)) g.bias[c] += v;
    else g.weights[c * dim + f] += v;
  });
  for (std::size_t i = 0; i < g.weights.size(); ++i) {
    g.weights[i] += model.hyperparams.l2 * model.weights[i];
  }
  return g;
}

std::vector<Example> make_examples(const PairDataset& ds, const Hyperparams& hp) {
  std::vector<std::size_t> counts(ds.label_set.size(), 0);
  std::vector<Example> out;
  out.reserve(ds.pairs.size());
  for (const auto& p : ds.pairs) {
    auto cls = index_of(ds.label_set, p.label);
    if (!cls) {
      throw Error(ErrorCode::UnknownLabel,
                  std::string(to_string(p.label)) + " is outside the training label set");
    }
    ++counts[*cls];
    out.push_back({featurize_pair(p.proposition1, p.proposition2, hp.hashed_dim), *cls, 1.0});
  }
  if (hp.balanced && !out.empty()) {
    std::size_t present = 0;
    for (auto n : counts) present += n > 0;
    for (auto& ex : out) {
      ex.weight = static_cast<double>(out.size()) /
                  (static_cast<double>(present) * static_cast<double>(counts[ex.gold]));
    }
  }
  return out;
}

LinearModel train(const PairDataset& train_set, const Hyperparams& hp) {
  if (hp.batch_size == 0 || hp.epochs == 0 || !(hp.learning_rate > 0.0) || hp.l2 < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "hyperparameters out of range");
  }
  std::set<RelationLabel> present;
  for (const auto& p : train_set.pairs) present.insert(p.label);
  if (present.size() < 2) {
    throw Error(ErrorCode::DegenerateData,
                "training needs at least two classes, found " + std::to_string(present.size()));
  }

  LinearModel model(train_set.label_set, hp);
  const auto examples = make_examples(train_set, hp);
  const std::size_t dim = model.feature_dim();
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Example> batch;
  batch.reserve(hp.batch_size);

  for (std::uint32_t epoch = 0; epoch < hp.epochs; ++epoch) {
    CounterRng rng(hp.seed, epoch + 1);
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      batch.clear();
      const std::size_t end = std::min(order.size(), start + hp.batch_size);
      for (std::size_t k = start; k < end; ++k) batch.push_back(examples[order[k]]);

      // Gradient at the current point: collect first, then step.
      std::vector<std::pair<std::size_t, double>> updates;
      std::vector<double> bias_grad(model.num_classes(), 0.0);
      data_term(model, batch, [&](std::size_t c, std::size_t f, double v) {
        if (f == std::size_t(-1)) bias_grad[c] += v;
        else updates.emplace_back(c * dim + f, v);
      });
      if (hp.l2 > 0.0) {
        const double decay = 1.0 - hp.learning_rate * hp.l2;
        for (auto& w : model.weights) w *= decay;
      }
      for (const auto& [i, v] : updates) model.weights[i] -= hp.learning_rate * v;
      for (std::size_t c = 0; c < bias_grad.size(); ++c) {
        model.bias[c] -= hp.learning_rate * bias_grad[c];
      }
    }
  }
  model.final_loss = objective(model, examples);
  return model;
}

Prediction predict(const LinearModel& model, const FeatureVector& x) {
  const auto s = scores(model, x);
  Prediction out{model.label_set.front(), softmax(s)};
  std::size_t best = 0;
  for (std::size_t c = 1; c < s.size(); ++c) {
    if (s[c] > s[best]) best = c;
  }
  out.label = model.label_set[best];
  return out;
}

Prediction predict(const LinearModel& model, std::string_view p1, std::string_view p2) {
  return predict(model, featurize_pair(p1, p2, model.hyperparams.hashed_dim));
}

namespace {

constexpr std::string_view kMagic = "ARGRELLM";
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  void bytes(std::string_view b) { out_ += b; }
  void u8(std::uint8_t v) { out_ += static_cast<char>(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view in, const std::string& source) : in_(in), source_(source) {}

  std::string_view bytes(std::size_t n) {
    need(n);
    auto b = in_.substr(pos_, n);
    pos_ += n;
    return b;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(bytes(1)[0]); }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  bool done() const { return pos_ == in_.size(); }
  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(source_, pos_, "model artifact: " + what);
  }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail("truncated");
  }

  std::string_view in_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const LinearModel& model) {
  Writer w;
  w.bytes(kMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.label_set.size()));
  for (auto l : model.label_set) {
    auto name = to_string(l);
    w.u8(static_cast<std::uint8_t>(name.size()));
    w.bytes(name);
  }
  const auto& hp = model.hyperparams;
  w.u32(hp.hashed_dim);
  w.f64(hp.learning_rate);
  w.f64(hp.l2);
  w.u32(hp.epochs);
  w.u32(hp.batch_size);
  w.u64(hp.seed);
  w.u8(hp.balanced ? 1 : 0);
  w.f64(model.final_loss);
  for (double b : model.bias) w.f64(b);

  const std::size_t dim = model.feature_dim();
  std::vector<std::uint32_t> nonzero;
  for (std::size_t f = 0; f < dim; ++f) {
    for (std::size_t c = 0; c < model.num_classes(); ++c) {
      if (model.weight(c, f) != 0.0) {
        nonzero.push_back(static_cast<std::uint32_t>(f));
        break;
      }
    }
  }
  w.u64(nonzero.size());
  for (auto f : nonzero) {
    w.u32(f);
    for (std::size_t c = 0; c < model.num_classes(); ++c) w.f64(model.weight(c, f));
  }
  return w.take();
}

LinearModel deserialize_model(std::string_view bytes, const std::string& source) {
  Reader r(bytes, source);
  if (r.bytes(kMagic.size()) != kMagic) r.fail("bad magic");
  if (auto v = r.u32(); v != kFormatVersion) r.fail("unsupported version " + std::to_string(v));
  const auto n_labels = r.u32();
  if (n_labels < 2 || n_labels > 16) r.fail("bad label count");
  LabelSet labels;
  for (std::uint32_t i = 0; i < n_labels; ++i) {
    auto name = r.bytes(r.u8());
    auto label = parse_label(name);
    if (!label || index_of(labels, *label)) r.fail("bad label '" + std::string(name) + "'");
    labels.push_back(*label);
  }
  Hyperparams hp;
  hp.hashed_dim = r.u32();
  if (hp.hashed_dim == 0 || hp.hashed_dim > (1u << 28)) r.fail("bad hashed dimension");
  hp.learning_rate = r.f64();
  hp.l2 = r.f64();
  hp.epochs = r.u32();
  hp.batch_size = r.u32();
  hp.seed = r.u64();
  hp.balanced = r.u8() != 0;

  LinearModel model(std::move(labels), hp);
  model.final_loss = r.f64();
  for (auto& b : model.bias) b = r.f64();
  const auto columns = r.u64();
  if (columns > model.feature_dim()) r.fail("too many weight columns");
  for (std::uint64_t k = 0; k < columns; ++k) {
    const auto f = r.u32();
    if (f >= model.feature_dim()) r.fail("weight column out of range");
    for (std::size_t c = 0; c < model.num_classes(); ++c) model.weight(c, f) = r.f64();
  }
  if (!r.done()) r.fail("trailing bytes");
  for (double w : model.weights) {
    if (!std::isfinite(w)) r.fail("non-finite weight");
  }
  return model;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

LinearModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path), path.string());
}

}  // namespace argrel::baseline
