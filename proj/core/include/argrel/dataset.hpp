#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "argrel/labels.hpp"
#include "argrel/ratio.hpp"
#include "argrel/text.hpp"

namespace argrel {

/// proposition1 is the source (premise) side, proposition2 the target.
struct LabeledPair {
  std::string proposition1;
  std::string proposition2;
  RelationLabel label = RelationLabel::NO;
  std::string map_id;
  std::string corpus_id;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

/// Compares only what the TSV carries: both texts and the label.
bool same_task_fields(const LabeledPair& a, const LabeledPair& b);

enum class NegativeScope { WithinMap, WithinCorpus };

std::string_view to_string(NegativeScope scope);

struct CompileConfig {
  std::uint64_t seed = 42;
  Casing casing = Casing::Uncased;
  /// Target share of NO pairs in the compiled dataset.
  Ratio no_ratio{65, 100};
  NegativeScope negative_scope = NegativeScope::WithinMap;
  /// Worker threads for per-map extraction; output does not depend on it.
  unsigned threads = 1;

  friend bool operator==(const CompileConfig&, const CompileConfig&) = default;
};

struct SkippedMap {
  std::string map_id;
  std::string reason;

  friend bool operator==(const SkippedMap&, const SkippedMap&) = default;
};

struct CompileReport {
  std::size_t maps_total = 0;
  std::size_t maps_processed = 0;
  std::vector<SkippedMap> skipped;
  std::size_t violations = 0;
  std::size_t related_pairs = 0;
  std::size_t negatives_requested = 0;
  std::size_t negative_pool_size = 0;

  friend bool operator==(const CompileReport&, const CompileReport&) = default;
};

struct Provenance {
  bool known = false;
  std::string corpus_id;
  std::string content_digest;
  std::optional<CompileConfig> config;
  std::optional<CompileReport> report;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct PairDataset {
  std::vector<LabeledPair> pairs;
  LabelSet label_set = standard_labels();
  Provenance provenance;
};

struct SplitSpec {
  Ratio train_fraction{8, 10};
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct ClassRow {
  RelationLabel label;
  std::size_t count = 0;
  /// count / total, 0 when total is 0.
  double fraction = 0.0;
};

struct ClassTable {
  std::vector<ClassRow> rows;
  std::size_t total = 0;
};

namespace dataset {

/// Serialized form: `proposition1<TAB>proposition2<TAB>label\n` per pair.
std::string render_tsv(const PairDataset& ds);
/// `source` labels FormatError messages.
PairDataset parse_tsv(std::string_view bytes, const std::string& source = "<tsv>");

/// Writes the TSV and, when provenance is known, a `<path>.meta.json`
/// sidecar. Both files are replaced atomically.
void write_tsv(const PairDataset& ds, const std::filesystem::path& path);
/// Reads the TSV; provenance and label set come from the sidecar when
/// present, otherwise the label set is inferred (four-way unless every
/// label is Support/Attack) and provenance is marked unknown.
PairDataset read_tsv(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& tsv);
std::string render_sidecar(const PairDataset& ds);

/// Per class with n pairs, floor(train_fraction * n) go to train. Members
/// are chosen by a seeded shuffle within each class; both halves keep the
/// input order. Throws EmptyClass when a label_set class has no pairs.
/// With stratified = false the same floor rule applies to the whole dataset.
std::pair<PairDataset, PairDataset> stratified_split(const PairDataset& ds, const SplitSpec& spec);

/// `<stem>.train.tsv` and `<stem>.test.tsv` next to `in`.
std::pair<std::filesystem::path, std::filesystem::path> split_paths(
    const std::filesystem::path& in);

/// RA -> Support, CA -> Attack; MA and NO pairs are dropped.
PairDataset collapse_binary(const PairDataset& ds);

ClassTable class_distribution(const PairDataset& ds);

}  // namespace dataset
}  // namespace argrel
