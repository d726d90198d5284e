#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argrel/dataset.hpp"
#include "argrel/labels.hpp"

namespace argrel {

/// Probability vector aligned with a label set.
struct ClassDistribution {
  std::vector<double> probs;
};

namespace baseline {

/// Dense pair features sit right after the hashed block, in this order.
enum class DenseFeature : std::uint32_t { Jaccard = 0, LengthRatio = 1, SharedTokens = 2 };
inline constexpr std::uint32_t kDenseFeatureCount = 3;
inline constexpr std::uint32_t kDefaultHashedDim = 1u << 18;

struct Feature {
  std::uint32_t index;
  double value;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Sparse vector over [0, hashed_dim + kDenseFeatureCount), sorted by index,
/// indices unique.
struct FeatureVector {
  std::uint32_t hashed_dim = kDefaultHashedDim;
  std::vector<Feature> entries;

  std::uint32_t dimension() const noexcept { return hashed_dim + kDenseFeatureCount; }
  double dense(DenseFeature f) const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Word runs (ASCII alphanumerics, apostrophes, any non-ASCII byte) and
/// single punctuation characters.
std::vector<std::string_view> tokenize(std::string_view text);

/// Stable 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Hashed unigrams and bigrams of p1 (namespace A), of p2 (namespace B) and
/// of the sequence p1 [SEP] p2 (namespace AB), term-frequency weighted and
/// L2-scaled per namespace, followed by the dense overlap features.
FeatureVector featurize_pair(std::string_view p1, std::string_view p2,
                             std::uint32_t hashed_dim = kDefaultHashedDim);

struct Hyperparams {
  double learning_rate = 0.5;
  double l2 = 1e-6;
  std::uint32_t epochs = 10;
  std::uint32_t batch_size = 32;
  std::uint64_t seed = 42;
  std::uint32_t hashed_dim = kDefaultHashedDim;
  /// Weight each example by N / (C * n_class) so rare classes count equally.
  bool balanced = true;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Multinomial logistic regression. weights is row-major
/// [class][feature], feature dimension hashed_dim + kDenseFeatureCount.
struct LinearModel {
  LabelSet label_set;
  Hyperparams hyperparams;
  std::vector<double> weights;
  std::vector<double> bias;
  double final_loss = 0.0;

  LinearModel() = default;
  LinearModel(LabelSet labels, const Hyperparams& hp);

  std::size_t num_classes() const noexcept { return label_set.size(); }
  std::size_t feature_dim() const noexcept {
    return static_cast<std::size_t>(hyperparams.hashed_dim) + kDenseFeatureCount;
  }
  double& weight(std::size_t cls, std::size_t feature) {
    return weights[cls * feature_dim() + feature];
  }
  double weight(std::size_t cls, std::size_t feature) const {
    return weights[cls * feature_dim() + feature];
  }
};

struct Example {
  FeatureVector features;
  std::size_t gold = 0;
  double weight = 1.0;
};

std::vector<double> scores(const LinearModel& model, const FeatureVector& x);
/// Numerically stable softmax.
ClassDistribution softmax(std::span<const double> scores);

/// Mean weighted cross-entropy over the batch plus (l2 / 2) * ||W||^2
/// (bias unregularized).
double objective(const LinearModel& model, std::span<const Example> batch);

/// Gradient of objective() laid out like the model: weights then bias.
struct Gradient {
  std::vector<double> weights;
  std::vector<double> bias;
};
Gradient gradient(const LinearModel& model, std::span<const Example> batch);

std::vector<Example> make_examples(const PairDataset& ds, const Hyperparams& hp);

/// Mini-batch gradient descent. Deterministic for a fixed seed. Throws
/// DegenerateData when fewer than two classes occur.
LinearModel train(const PairDataset& train_set, const Hyperparams& hp);

struct Prediction {
  RelationLabel label;
  ClassDistribution dist;
};

/// Argmax of the softmax; ties resolve to the earliest label in label_set.
Prediction predict(const LinearModel& model, std::string_view p1, std::string_view p2);
Prediction predict(const LinearModel& model, const FeatureVector& x);

/// Versioned little-endian binary artifact; only non-zero weight columns
/// are stored.
std::string serialize_model(const LinearModel& model);
LinearModel deserialize_model(std::string_view bytes, const std::string& source = "<model>");
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace baseline
}  // namespace argrel
