#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "argrel/aif_graph.hpp"
#include "argrel/corpus_client.hpp"
#include "argrel/dataset.hpp"
#include "argrel/ratio.hpp"
#include "argrel/text.hpp"

namespace argrel::compiler {

/// For every RA/CA/MA node s, every I-node p with p->s and every I-node q
/// with s->q yields (text(p), text(q), label(s)). Non-I endpoints are
/// skipped, as are pairs whose normalized text is empty. Ordered by
/// (s id, p id, q id); repeated (text1, text2, label) triples keep their
/// first occurrence.
std::vector<LabeledPair> extract_related_pairs(const aif::ArgumentMap& map, Casing casing);

/// ceil(related * r / (1 - r)) in exact integer arithmetic, so that NO pairs
/// make up a share r of the final dataset. r must lie in (0, 1).
std::uint64_t negative_count(std::uint64_t related, const Ratio& no_ratio);

/// Ids of I-nodes with no edge to or from any RA/CA/MA node, id-sorted.
std::vector<std::string> collect_negative_pool(const aif::ArgumentMap& map);

struct NegativePool {
  std::string map_id;
  std::string corpus_id;
  /// Normalized, non-empty texts of the pooled propositions.
  std::vector<std::string> texts;
};

NegativePool build_negative_pool(const aif::ArgumentMap& map, Casing casing);

/// Unordered text pair, stored (smaller, larger).
using TextPairSet = std::set<std::pair<std::string, std::string>>;

TextPairSet unordered_text_pairs(std::span<const LabeledPair> pairs);

/// Draws exactly `count` distinct NO pairs without replacement. The
/// candidate space is every unordered pair of distinct texts that share a
/// map (WithinMap) or the whole corpus (WithinCorpus), enumerated in sorted
/// text order; a lazy Fisher-Yates over that space driven by a CounterRng
/// picks candidates. Candidates that repeat an earlier text pair or appear
/// in `exclude` are passed over. Throws InsufficientPool with the exact
/// number of usable candidates when fewer than `count` exist.
std::vector<LabeledPair> sample_negative_pairs(std::span<const NegativePool> pools,
                                               std::uint64_t count, std::uint64_t seed,
                                               NegativeScope scope,
                                               const TextPairSet* exclude = nullptr);

/// Related pairs of every parseable map (map-id order) followed by the
/// sampled NO pairs. Maps that fail to parse are skipped and listed in the
/// report. Throws EmptyCorpus when no related pair exists.
PairDataset compile_corpus(const corpus::CorpusSnapshot& snapshot, const CompileConfig& config);

}  // namespace argrel::compiler
