#include "argrel/pair_compiler.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "argrel/errors.hpp"
#include "argrel/rng.hpp"

namespace argrel::compiler {

using aif::ArgumentMap;
using aif::AifNode;

namespace {

RelationLabel label_for(const aif::NodeKind& kind) {
  switch (kind.tag()) {
    case aif::NodeKind::Tag::Inference: return RelationLabel::RA;
    case aif::NodeKind::Tag::Conflict: return RelationLabel::CA;
    default: return RelationLabel::MA;
  }
}

struct Adjacency {
  std::unordered_map<std::string_view, const AifNode*> nodes;
  std::unordered_map<std::string_view, std::vector<std::string_view>> incoming;
  std::unordered_map<std::string_view, std::vector<std::string_view>> outgoing;

  explicit Adjacency(const ArgumentMap& map) {
    for (const auto& n : map.nodes) nodes.emplace(n.id, &n);
    for (const auto& e : map.edges) {
      if (!nodes.count(e.from) || !nodes.count(e.to)) continue;
      outgoing[e.from].push_back(e.to);
      incoming[e.to].push_back(e.from);
    }
  }

  /// Sorted, unique I-node neighbours.
  std::vector<const AifNode*> information(
      const std::unordered_map<std::string_view, std::vector<std::string_view>>& side,
      std::string_view id) const {
    std::vector<const AifNode*> out;
    auto it = side.find(id);
    if (it == side.end()) return out;
    for (auto other : it->second) {
      const AifNode* n = nodes.at(other);
      if (n->kind.is_information()) out.push_back(n);
    }
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// Lexicographic unranking of t within all pairs (a, b), a < b < n.
std::pair<std::uint64_t, std::uint64_t> unrank_pair(std::uint64_t t, std::uint64_t n) {
  auto row_start = [n](std::uint64_t a) { return a * (2 * n - a - 1) / 2; };
  std::uint64_t lo = 0;
  std::uint64_t hi = n - 2;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (row_start(mid) <= t) lo = mid;
    else hi = mid - 1;
  }
  return {lo, lo + 1 + (t - row_start(lo))};
}

}  // namespace

std::vector<LabeledPair> extract_related_pairs(const ArgumentMap& map, Casing casing) {
  Adjacency adj(map);
  std::vector<LabeledPair> out;
  std::set<std::tuple<std::string, std::string, RelationLabel>> seen;
  for (const auto& s : aif::relation_nodes(map)) {
    const auto label = label_for(s.kind);
    const auto sources = adj.information(adj.incoming, s.id);
    const auto targets = adj.information(adj.outgoing, s.id);
    for (const AifNode* p : sources) {
      auto t1 = text::normalize(p->text, casing);
      if (t1.empty()) continue;
      for (const AifNode* q : targets) {
        auto t2 = text::normalize(q->text, casing);
        if (t2.empty()) continue;
        if (!seen.emplace(t1, t2, label).second) continue;
        out.push_back({t1, std::move(t2), label, map.map_id, map.corpus_id});
      }
    }
  }
  return out;
}

std::uint64_t negative_count(std::uint64_t related, const Ratio& no_ratio) {
  if (!no_ratio.in_open_unit()) {
    throw Error(ErrorCode::InvalidArgument, "no_ratio must lie in (0, 1), got " + no_ratio.str());
  }
  const unsigned __int128 num = static_cast<unsigned __int128>(related) * no_ratio.num();
  const unsigned __int128 den = no_ratio.den() - no_ratio.num();
  return static_cast<std::uint64_t>((num + den - 1) / den);
}

std::vector<std::string> collect_negative_pool(const ArgumentMap& map) {
  std::unordered_set<std::string_view> relation_ids;
  for (const auto& n : map.nodes) {
    if (n.kind.is_relation()) relation_ids.insert(n.id);
  }
  std::unordered_set<std::string_view> annotated;
  for (const auto& e : map.edges) {
    if (relation_ids.count(e.to)) annotated.insert(e.from);
    if (relation_ids.count(e.from)) annotated.insert(e.to);
  }
  std::vector<std::string> pool;
  for (const auto& n : map.nodes) {
    if (n.kind.is_information() && !annotated.count(n.id)) pool.push_back(n.id);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

NegativePool build_negative_pool(const ArgumentMap& map, Casing casing) {
  std::unordered_map<std::string_view, const AifNode*> by_id;
  for (const auto& n : map.nodes) by_id.emplace(n.id, &n);
  NegativePool pool{map.map_id, map.corpus_id, {}};
  for (const auto& id : collect_negative_pool(map)) {
    auto t = text::normalize(by_id.at(id)->text, casing);
    if (!t.empty()) pool.texts.push_back(std::move(t));
  }
  return pool;
}

TextPairSet unordered_text_pairs(std::span<const LabeledPair> pairs) {
  TextPairSet out;
  for (const auto& p : pairs) out.emplace(std::minmax(p.proposition1, p.proposition2));
  return out;
}

std::vector<LabeledPair> sample_negative_pairs(std::span<const NegativePool> pools,
                                               std::uint64_t count, std::uint64_t seed,
                                               NegativeScope scope, const TextPairSet* exclude) {
  std::vector<LabeledPair> out;
  if (count == 0) return out;

  // Global sorted table of distinct texts.
  std::vector<std::string_view> texts;
  for (const auto& pool : pools) texts.insert(texts.end(), pool.texts.begin(), pool.texts.end());
  std::sort(texts.begin(), texts.end());
  texts.erase(std::unique(texts.begin(), texts.end()), texts.end());
  auto text_id = [&](std::string_view t) {
    return static_cast<std::uint64_t>(std::lower_bound(texts.begin(), texts.end(), t) -
                                      texts.begin());
  };

  // Each block enumerates the pairs of one candidate group.
  struct Block {
    std::vector<std::uint64_t> ids;
    const NegativePool* pool = nullptr;
  };
  std::vector<Block> blocks;
  if (scope == NegativeScope::WithinMap) {
    for (const auto& pool : pools) {
      Block b{{}, &pool};
      for (const auto& t : pool.texts) b.ids.push_back(text_id(t));
      std::sort(b.ids.begin(), b.ids.end());
      b.ids.erase(std::unique(b.ids.begin(), b.ids.end()), b.ids.end());
      if (b.ids.size() >= 2) blocks.push_back(std::move(b));
    }
  } else if (texts.size() >= 2) {
    Block b;
    for (std::uint64_t i = 0; i < texts.size(); ++i) b.ids.push_back(i);
    blocks.push_back(std::move(b));
  }

  std::vector<std::uint64_t> block_end;
  std::uint64_t total = 0;
  for (const auto& b : blocks) block_end.push_back(total += choose2(b.ids.size()));

  const std::string corpus_id = pools.empty() ? std::string() : pools.front().corpus_id;
  CounterRng rng(seed, 0x4E4F);  // "NO"
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  std::unordered_set<std::uint64_t> drawn;
  const std::uint64_t n_texts = texts.size();

  for (std::uint64_t k = 0; k < total && out.size() < count; ++k) {
    const std::uint64_t r = k + rng.below(total - k);
    auto at = [&](std::uint64_t i) {
      auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    const std::uint64_t candidate = at(r);
    swapped[r] = at(k);

    const auto b = static_cast<std::size_t>(
        std::upper_bound(block_end.begin(), block_end.end(), candidate) - block_end.begin());
    const std::uint64_t local = candidate - (b ? block_end[b - 1] : 0);
    const auto [i, j] = unrank_pair(local, blocks[b].ids.size());
    const std::uint64_t x = blocks[b].ids[i];
    const std::uint64_t y = blocks[b].ids[j];
    if (!drawn.insert(x * n_texts + y).second) continue;
    std::string first(texts[x]);
    std::string second(texts[y]);
    if (exclude && exclude->count({first, second})) continue;
    if (rng.next() & 1) std::swap(first, second);
    const std::string map_id = blocks[b].pool ? blocks[b].pool->map_id : std::string();
    out.push_back({std::move(first), std::move(second), RelationLabel::NO, map_id, corpus_id});
  }
  if (out.size() < count) throw InsufficientPool(out.size(), count);
  return out;
}

namespace {

struct MapResult {
  std::optional<std::string> skip_reason;
  std::size_t violations = 0;
  std::vector<LabeledPair> related;
  NegativePool pool;
};

MapResult process_map(const corpus::MapDocument& doc, const std::string& corpus_id,
                      Casing casing) {
  MapResult r;
  ArgumentMap map;
  try {
    map = aif::parse_argument_map(doc.bytes, doc.map_id, corpus_id);
  } catch (const Error& e) {
    r.skip_reason = e.what();
    return r;
  }
  r.violations = aif::validate(map).size();
  r.related = extract_related_pairs(map, casing);
  r.pool = build_negative_pool(map, casing);
  return r;
}

}  // namespace

PairDataset compile_corpus(const corpus::CorpusSnapshot& snapshot, const CompileConfig& config) {
  if (!config.no_ratio.in_open_unit()) {
    throw Error(ErrorCode::InvalidArgument, "no_ratio must lie in (0, 1)");
  }
  const auto& docs = snapshot.maps;
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return docs[a].map_id < docs[b].map_id; });

  std::vector<MapResult> results(docs.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(docs.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      results[k] = process_map(docs[order[k]], snapshot.corpus_id, config.casing);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < order.size();) {
          results[k] = process_map(docs[order[k]], snapshot.corpus_id, config.casing);
        }
      });
    }
  }

  PairDataset ds;
  ds.label_set = standard_labels();
  CompileReport report;
  report.maps_total = docs.size();
  std::vector<NegativePool> pools;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& r = results[k];
    if (r.skip_reason) {
      report.skipped.push_back({docs[order[k]].map_id, *r.skip_reason});
      continue;
    }
    ++report.maps_processed;
    report.violations += r.violations;
    report.negative_pool_size += r.pool.texts.size();
    std::move(r.related.begin(), r.related.end(), std::back_inserter(ds.pairs));
    pools.push_back(std::move(r.pool));
  }
  report.related_pairs = ds.pairs.size();
  if (ds.pairs.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "corpus " + snapshot.corpus_id + " has no related pairs");
  }

  report.negatives_requested = negative_count(ds.pairs.size(), config.no_ratio);
  const TextPairSet related_texts = unordered_text_pairs(ds.pairs);
  auto negatives = sample_negative_pairs(pools, report.negatives_requested, config.seed,
                                         config.negative_scope, &related_texts);
  std::move(negatives.begin(), negatives.end(), std::back_inserter(ds.pairs));

  ds.provenance.known = true;
  ds.provenance.corpus_id = snapshot.corpus_id;
  ds.provenance.content_digest = snapshot.content_digest;
  ds.provenance.config = config;
  ds.provenance.config->threads = 1;
  ds.provenance.report = std::move(report);
  return ds;
}

}  // namespace argrel::compiler
