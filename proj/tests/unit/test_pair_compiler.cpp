#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "argrel/corpus_client.hpp"
#include "argrel/errors.hpp"
#include "argrel/pair_compiler.hpp"
#include "argrel/rng.hpp"
#include "oracles.hpp"
#include "synthetic_corpus.hpp"

namespace argrel::compiler {
namespace {

using aif::parse_argument_map;

constexpr const char* kTriangle = R"({
  "nodes": [
    {"nodeID": "n1", "text": "Taxes are too high", "type": "I"},
    {"nodeID": "n2", "text": "Families struggle to pay their bills", "type": "I"},
    {"nodeID": "n3", "text": "Default Inference", "type": "RA"}
  ],
  "edges": [
    {"edgeID": "e1", "fromID": "n1", "toID": "n3"},
    {"edgeID": "e2", "fromID": "n3", "toID": "n2"}
  ]
})";

std::map<RelationLabel, std::size_t> count_labels(const std::vector<LabeledPair>& pairs) {
  std::map<RelationLabel, std::size_t> out;
  for (const auto& p : pairs) ++out[p.label];
  return out;
}

TEST(ExtractRelated, Triangle) {
  auto pairs = extract_related_pairs(parse_argument_map(kTriangle, "m1", "c"), Casing::Cased);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].proposition1, "Taxes are too high");
  EXPECT_EQ(pairs[0].proposition2, "Families struggle to pay their bills");
  EXPECT_EQ(pairs[0].label, RelationLabel::RA);
  EXPECT_EQ(pairs[0].map_id, "m1");
  EXPECT_EQ(pairs[0].corpus_id, "c");
}

TEST(ExtractRelated, ConflictWithTwoSourcesMatchesOracle) {
  const char* doc = R"({"nodes":[
      {"nodeID":"a","text":"The plan costs billions","type":"I"},
      {"nodeID":"b","text":"Nobody voted for it","type":"I"},
      {"nodeID":"c","text":"The plan is a good idea","type":"I"},
      {"nodeID":"s","text":"Default Conflict","type":"CA"}],
    "edges":[{"edgeID":"1","fromID":"a","toID":"s"},{"edgeID":"2","fromID":"b","toID":"s"},
             {"edgeID":"3","fromID":"s","toID":"c"}]})";
  auto map = parse_argument_map(doc, "m", "c");
  auto pairs = extract_related_pairs(map, Casing::Cased);
  auto paths = testing::brute_force_relation_paths(map);
  ASSERT_EQ(pairs.size(), 2u);
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& p : pairs) {
    EXPECT_EQ(p.label, RelationLabel::CA);
    EXPECT_EQ(p.proposition2, "The plan is a good idea");
  }
}

TEST(ExtractRelated, UndercutYieldsNothing) {
  const char* doc = R"({"nodes":[
      {"nodeID":"a","text":"p","type":"I"},{"nodeID":"b","text":"q","type":"I"},
      {"nodeID":"r","text":"Default Inference","type":"RA"},
      {"nodeID":"u","text":"the inference is weak","type":"I"},
      {"nodeID":"x","text":"Default Conflict","type":"CA"}],
    "edges":[{"edgeID":"1","fromID":"a","toID":"r"},{"edgeID":"2","fromID":"r","toID":"b"},
             {"edgeID":"3","fromID":"u","toID":"x"},{"edgeID":"4","fromID":"x","toID":"r"}]})";
  auto pairs = extract_related_pairs(parse_argument_map(doc, "m", "c"), Casing::Cased);
  auto labels = count_labels(pairs);
  EXPECT_EQ(labels[RelationLabel::RA], 1u);
  EXPECT_EQ(labels[RelationLabel::CA], 0u);
}

TEST(ExtractRelated, FixtureAgreesWithOracle) {
  auto snap = corpus::load_local(std::string(ARGREL_FIXTURE_DIR) + "/minicorpus/mini", "mini");
  std::size_t total = 0;
  for (const auto& doc : snap.maps) {
    auto map = parse_argument_map(doc.bytes, doc.map_id, "mini");
    auto pairs = extract_related_pairs(map, Casing::Cased);
    std::set<std::tuple<std::string, std::string, RelationLabel>> expected;
    std::map<std::string, const aif::AifNode*> by_id;
    for (const auto& n : map.nodes) by_id[n.id] = &n;
    for (const auto& [p, s, q] : testing::brute_force_relation_paths(map)) {
      if (by_id[p]->text.empty() || by_id[q]->text.empty()) continue;
      const auto tag = by_id[s]->kind.tag();
      const auto label = tag == aif::NodeKind::Tag::Inference  ? RelationLabel::RA
                         : tag == aif::NodeKind::Tag::Conflict ? RelationLabel::CA
                                                               : RelationLabel::MA;
      expected.emplace(text::normalize(by_id[p]->text, Casing::Cased),
                       text::normalize(by_id[q]->text, Casing::Cased), label);
    }
    std::set<std::tuple<std::string, std::string, RelationLabel>> got;
    for (const auto& p : pairs) got.emplace(p.proposition1, p.proposition2, p.label);
    EXPECT_EQ(got, expected) << doc.map_id;
    EXPECT_EQ(got.size(), pairs.size()) << "duplicate triple in " << doc.map_id;
    total += pairs.size();
  }
  EXPECT_EQ(total, 27u);
}

TEST(NegativeCount, ValuesAtSixtyFivePercent) {
  const Ratio r(65, 100);
  EXPECT_EQ(negative_count(4337, r), 8055u);
  EXPECT_EQ(negative_count(1189, r), 2209u);
  EXPECT_EQ(negative_count(157, r), 292u);
  EXPECT_EQ(negative_count(283, r), 526u);
  EXPECT_EQ(negative_count(278, r), 517u);
  EXPECT_EQ(negative_count(289, r), 537u);
  EXPECT_EQ(negative_count(0, r), 0u);
  EXPECT_EQ(negative_count(7, r), 13u);
  EXPECT_THROW(negative_count(10, Ratio(1, 1)), Error);
  EXPECT_THROW(negative_count(10, Ratio(0, 1)), Error);
}

TEST(NegativeCount, IsSmallestCountReachingTheRatio) {
  CounterRng rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto related = rng.below(100000);
    const Ratio r(1 + rng.below(99), 100);
    const auto n = negative_count(related, r);
    // n / (related + n) >= r  and  (n - 1) / (related + n - 1) < r
    EXPECT_GE(n * r.den(), r.num() * (related + n));
    if (n > 0) EXPECT_LT((n - 1) * r.den(), r.num() * (related + n - 1));
  }
}

TEST(NegativePoolTest, MatchesOracleOnFixtureAndSynthetic) {
  auto snap = corpus::load_local(std::string(ARGREL_FIXTURE_DIR) + "/minicorpus/mini", "mini");
  testing::CorpusProfile profile;
  profile.maps = 6;
  for (auto& d : testing::generate_maps(profile)) snap.maps.push_back(d);
  for (const auto& doc : snap.maps) {
    auto map = parse_argument_map(doc.bytes, doc.map_id, "c");
    EXPECT_EQ(collect_negative_pool(map), testing::brute_force_pool(map)) << doc.map_id;
  }
}

TEST(NegativePoolTest, UndercutPremiseIsNotPooled) {
  const char* doc = R"({"nodes":[
      {"nodeID":"a","text":"p","type":"I"},{"nodeID":"b","text":"q","type":"I"},
      {"nodeID":"r","text":"Default Inference","type":"RA"},
      {"nodeID":"u","text":"the inference is weak","type":"I"},
      {"nodeID":"x","text":"Default Conflict","type":"CA"},
      {"nodeID":"z","text":"an unrelated remark","type":"I"}],
    "edges":[{"edgeID":"1","fromID":"a","toID":"r"},{"edgeID":"2","fromID":"r","toID":"b"},
             {"edgeID":"3","fromID":"u","toID":"x"},{"edgeID":"4","fromID":"x","toID":"r"}]})";
  EXPECT_EQ(collect_negative_pool(parse_argument_map(doc, "m", "c")),
            std::vector<std::string>{"z"});
}

NegativePool pool_of(std::string map_id, std::size_t n) {
  NegativePool p{std::move(map_id), "c", {}};
  for (std::size_t i = 0; i < n; ++i) p.texts.push_back(p.map_id + " text " + std::to_string(i));
  return p;
}

TEST(SampleNegatives, PoolOfTwo) {
  std::vector<NegativePool> pools{pool_of("m", 2)};
  auto out = sample_negative_pairs(pools, 1, 42, NegativeScope::WithinMap);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(std::minmax(out[0].proposition1, out[0].proposition2),
            std::minmax(std::string("m text 0"), std::string("m text 1")));
  EXPECT_EQ(out[0].label, RelationLabel::NO);
  EXPECT_EQ(out[0].map_id, "m");
}

TEST(SampleNegatives, ExhaustsAllPairsOfFiveExactlyOnce) {
  std::vector<NegativePool> pools{pool_of("m", 5)};
  auto out = sample_negative_pairs(pools, 10, 7, NegativeScope::WithinMap);
  ASSERT_EQ(out.size(), 10u);
  TextPairSet seen;
  for (const auto& p : out) {
    EXPECT_NE(p.proposition1, p.proposition2);
    EXPECT_TRUE(seen.emplace(std::minmax(p.proposition1, p.proposition2)).second);
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(SampleNegatives, InsufficientPoolReportsExactAvailability) {
  std::vector<NegativePool> pools{pool_of("a", 3), pool_of("b", 4), pool_of("c", 1)};
  try {
    sample_negative_pairs(pools, 10, 1, NegativeScope::WithinMap);
    FAIL();
  } catch (const InsufficientPool& e) {
    EXPECT_EQ(e.available(), 9u);
    EXPECT_EQ(e.requested(), 10u);
  }
  EXPECT_EQ(sample_negative_pairs(pools, 9, 1, NegativeScope::WithinMap).size(), 9u);
  // Across the corpus all 8 texts pair up.
  EXPECT_EQ(sample_negative_pairs(pools, 28, 1, NegativeScope::WithinCorpus).size(), 28u);

  TextPairSet exclude{{"a text 0", "a text 1"}};
  try {
    sample_negative_pairs(pools, 9, 1, NegativeScope::WithinMap, &exclude);
    FAIL();
  } catch (const InsufficientPool& e) {
    EXPECT_EQ(e.available(), 8u);
  }
}

TEST(SampleNegatives, DuplicateTextsCollapse) {
  NegativePool p{"m", "c", {"same", "same", "other"}};
  std::vector<NegativePool> pools{p};
  EXPECT_EQ(sample_negative_pairs(pools, 1, 1, NegativeScope::WithinMap).size(), 1u);
  EXPECT_THROW(sample_negative_pairs(pools, 2, 1, NegativeScope::WithinMap), InsufficientPool);
}

TEST(SampleNegatives, SeedDeterminesOutput) {
  std::vector<NegativePool> pools{pool_of("a", 30), pool_of("b", 20)};
  auto x = sample_negative_pairs(pools, 100, 5, NegativeScope::WithinMap);
  auto y = sample_negative_pairs(pools, 100, 5, NegativeScope::WithinMap);
  auto z = sample_negative_pairs(pools, 100, 6, NegativeScope::WithinMap);
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
}

TEST(CompileCorpus, Us2016ProfileCounts) {
  auto snap = testing::generate_snapshot(testing::us2016_profile());
  auto ds = compile_corpus(snap, {});
  auto labels = count_labels(ds.pairs);
  EXPECT_EQ(labels[RelationLabel::RA], 2744u);
  EXPECT_EQ(labels[RelationLabel::CA], 888u);
  EXPECT_EQ(labels[RelationLabel::MA], 705u);
  EXPECT_EQ(labels[RelationLabel::NO], 8055u);
  EXPECT_EQ(ds.pairs.size(), 12392u);
  ASSERT_TRUE(ds.provenance.report);
  EXPECT_EQ(ds.provenance.report->related_pairs, 4337u);
  EXPECT_EQ(ds.provenance.report->negatives_requested, 8055u);
  EXPECT_TRUE(ds.provenance.report->skipped.empty());
  EXPECT_EQ(ds.provenance.content_digest, snap.content_digest);
}

TEST(CompileCorpus, Mm2012ProfileCounts) {
  auto ds = compile_corpus(testing::generate_snapshot(testing::mm2012_profile()), {});
  auto labels = count_labels(ds.pairs);
  EXPECT_EQ(labels[RelationLabel::RA], 833u);
  EXPECT_EQ(labels[RelationLabel::CA], 200u);
  EXPECT_EQ(labels[RelationLabel::MA], 156u);
  EXPECT_EQ(labels[RelationLabel::NO], 2209u);
  EXPECT_EQ(ds.pairs.size(), 3398u);
}

TEST(CompileCorpus, MiniFixture) {
  auto snap = corpus::open_cache(std::string(ARGREL_FIXTURE_DIR) + "/minicorpus", "mini");
  auto ds = compile_corpus(snap, {});
  auto labels = count_labels(ds.pairs);
  EXPECT_EQ(labels[RelationLabel::RA], 13u);
  EXPECT_EQ(labels[RelationLabel::CA], 9u);
  EXPECT_EQ(labels[RelationLabel::MA], 5u);
  EXPECT_EQ(labels[RelationLabel::NO], 51u);
  EXPECT_EQ(ds.provenance.report->maps_processed, 4u);
  for (const auto& p : ds.pairs) {
    EXPECT_EQ(p.proposition1, text::normalize(p.proposition1, Casing::Uncased));
  }
}

TEST(CompileCorpus, TriangleOnlyCorpusHasNoNegatives) {
  corpus::CorpusSnapshot snap;
  snap.corpus_id = "tri";
  snap.maps = {{"1", kTriangle}};
  try {
    compile_corpus(snap, {});
    FAIL();
  } catch (const InsufficientPool& e) {
    EXPECT_EQ(e.available(), 0u);
    EXPECT_EQ(e.requested(), 2u);
  }
}

TEST(CompileCorpus, EmptyCorpusAndSkippedMaps) {
  corpus::CorpusSnapshot snap;
  snap.corpus_id = "none";
  snap.maps = {{"1", R"({"nodes":[],"edges":[]})"}, {"2", "not json"}};
  try {
    compile_corpus(snap, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCorpus);
  }

  testing::CorpusProfile profile;
  auto good = testing::generate_snapshot(profile);
  good.maps.push_back({"zz-broken", "{\"nodes\": 3}"});
  auto ds = compile_corpus(good, {});
  ASSERT_EQ(ds.provenance.report->skipped.size(), 1u);
  EXPECT_EQ(ds.provenance.report->skipped[0].map_id, "zz-broken");
}

TEST(CompileCorpus, NoShareHitsTargetAndNeverRepeatsRelatedPairs) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    CounterRng rng(seed, 77);
    testing::CorpusProfile profile;
    profile.seed = seed;
    profile.maps = 2 + rng.below(10);
    profile.ra = 1 + rng.below(60);
    profile.ca = rng.below(20);
    profile.ma = rng.below(15);
    CompileConfig config;
    config.seed = seed;
    config.no_ratio = Ratio(20 + rng.below(66), 100);
    config.negative_scope = seed % 2 ? NegativeScope::WithinMap : NegativeScope::WithinCorpus;
    auto ds = compile_corpus(testing::generate_snapshot(profile), config);
    const double no = static_cast<double>(count_labels(ds.pairs)[RelationLabel::NO]);
    const double share = no / static_cast<double>(ds.pairs.size());
    EXPECT_GE(share, config.no_ratio.value() - 1e-12);
    EXPECT_LT(share - config.no_ratio.value(), 1.0 / static_cast<double>(ds.pairs.size()));

    std::vector<LabeledPair> related, negatives;
    for (const auto& p : ds.pairs) (p.label == RelationLabel::NO ? negatives : related).push_back(p);
    const auto related_set = unordered_text_pairs(related);
    TextPairSet seen;
    for (const auto& p : negatives) {
      const auto key = std::minmax(p.proposition1, p.proposition2);
      EXPECT_FALSE(related_set.count(key));
      EXPECT_TRUE(seen.emplace(key).second);
    }
  }
}

TEST(CompileCorpus, OutputIndependentOfThreadCountAndRepeatable) {
  auto snap = testing::generate_snapshot(testing::mm2012_profile());
  CompileConfig one;
  CompileConfig many;
  many.threads = 8;
  const auto a = dataset::render_tsv(compile_corpus(snap, one));
  const auto b = dataset::render_tsv(compile_corpus(snap, one));
  const auto c = dataset::render_tsv(compile_corpus(snap, many));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  CompileConfig other_seed;
  other_seed.seed = 43;
  EXPECT_NE(a, dataset::render_tsv(compile_corpus(snap, other_seed)));
}

}  // namespace
}  // namespace argrel::compiler
