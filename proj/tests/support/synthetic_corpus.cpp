#include "synthetic_corpus.hpp"

#include <algorithm>
#include <set>
#include <string_view>

#include <json.hpp>

#include "argrel/rng.hpp"

namespace argrel::testing {
namespace {

using nlohmann::json;

struct Topic {
  std::vector<std::string_view> objects;
  std::vector<std::string_view> facts;
};

const std::vector<Topic>& topics() {
  static const std::vector<Topic> t{
      {{"the banking system", "wall street", "the big banks", "financial regulation",
        "bank bonuses", "the bailout"},
       {"took huge risks with public money", "paid record bonuses last year",
        "were rescued with taxpayer dollars", "lobbied against every reform",
        "crashed the economy in 2008", "still hold enormous power"}},
      {{"health care", "the insurance market", "prescription drugs", "medicare",
        "hospital funding", "mental health services"},
       {"costs families thousands every year", "left millions without coverage",
        "keeps getting more expensive", "is failing rural communities",
        "is run by a few large companies", "has waiting lists of months"}},
      {{"the tax code", "corporate taxes", "the estate tax", "small business taxes",
        "capital gains", "payroll taxes"},
       {"is full of loopholes for the rich", "pushes companies overseas",
        "hurts the middle class most", "has not been simplified in decades",
        "raises less money than promised", "punishes people who save"}},
      {{"public schools", "student debt", "teacher pay", "college tuition", "school funding",
        "early education"},
       {"has doubled in ten years", "leaves graduates broke", "varies wildly between districts",
        "drives good teachers away", "is the key to opportunity", "is falling behind other nations"}},
      {{"the border", "immigration enforcement", "work visas", "refugee admissions",
        "the asylum system", "citizenship applications"},
       {"has been neglected for years", "is overwhelmed by cases",
        "takes years to process anything", "was designed for another century",
        "depends on an outdated computer system", "is underfunded by congress"}},
      {{"climate policy", "coal jobs", "renewable energy", "the power grid", "carbon emissions",
        "fuel standards"},
       {"employs more people every year", "is getting cheaper than coal",
        "needs massive investment", "is changing whole regions",
        "has cut pollution in our cities", "is vulnerable to extreme weather"}},
      {{"trade deals", "manufacturing jobs", "steel tariffs", "the trade deficit",
        "exports to china", "farm exports"},
       {"shipped jobs overseas", "hurt workers in the midwest", "raised prices for consumers",
        "helped farmers sell abroad", "were negotiated in secret", "created winners and losers"}},
      {{"the welfare system", "food stamps", "housing assistance", "unemployment benefits",
        "child care support", "disability payments"},
       {"keeps families out of poverty", "is riddled with fraud", "traps people in dependency",
        "has not kept up with rents", "helps people between jobs",
        "is cheaper than the alternative"}},
  };
  return t;
}

constexpr std::string_view kSubjects[] = {"we", "this country", "the next president", "congress",
                                          "our government", "the states", "washington", "people"};
constexpr std::string_view kClaimVerbs[] = {"should reform", "must fix", "need to rethink",
                                            "have to invest in", "should protect",
                                            "must stand up to", "should cut spending on",
                                            "need to expand"};
constexpr std::string_view kSupportCues[] = {"because", "since", "the evidence shows",
                                             "the fact is", "that is why", "after all"};
constexpr std::string_view kAttackCues[] = {"no,", "that is not true,", "but", "that is wrong,",
                                            "actually", "i disagree,"};
constexpr std::string_view kRephraseCues[] = {"in other words", "so you are saying",
                                              "what he means is", "put simply", "basically",
                                              "to put it another way"};
constexpr std::string_view kFillers[] = {"frankly", "honestly", "look", "today", "right now",
                                         "in my view", "for years", "again"};
constexpr std::string_view kPlaces[] = {"in ohio", "in texas", "in florida", "in michigan",
                                        "in iowa", "in nevada", "in arizona", "in virginia",
                                        "in my state", "across the country", "in our cities",
                                        "in rural areas"};

template <typename C>
std::string_view pick(const C& items, CounterRng& rng) {
  return items[rng.below(std::size(items))];
}

class TextFactory {
 public:
  TextFactory(const Topic& topic, double noise, CounterRng& rng, std::set<std::string>& used)
      : topic_(topic), noise_(noise), rng_(rng), used_(used) {}

  std::string claim(std::string_view object) {
    return unique(maybe_filler() + std::string(pick(kSubjects, rng_)) + " " +
                  std::string(pick(kClaimVerbs, rng_)) + " " + std::string(object) +
                  maybe_place());
  }

  std::string support(std::string_view object) {
    return unique(cue(kSupportCues) + std::string(object) + " " +
                  std::string(pick(topic_.facts, rng_)) + maybe_place());
  }

  std::string attack(std::string_view object) {
    return unique(cue(kAttackCues) + std::string(object) + " never " +
                  std::string(pick(topic_.facts, rng_)) + maybe_place());
  }

  std::string rephrase(std::string_view object) {
    return unique(cue(kRephraseCues) + std::string(pick(kSubjects, rng_)) + " " +
                  std::string(pick(kClaimVerbs, rng_)) + " " + std::string(object) +
                  maybe_place());
  }

  /// Statement with no relation role; sometimes carries a misleading cue.
  std::string unrelated() {
    std::string s;
    if (rng_.unit() < noise_ / 2) {
      const auto bucket = rng_.below(3);
      s = std::string(bucket == 0   ? pick(kSupportCues, rng_)
                      : bucket == 1 ? pick(kAttackCues, rng_)
                                    : pick(kRephraseCues, rng_)) +
          " ";
    }
    const auto& topic = topics()[rng_.below(topics().size())];
    if (rng_.unit() < 0.5) {
      s += std::string(pick(topic.objects, rng_)) + " " + std::string(pick(topic.facts, rng_));
    } else {
      s += std::string(pick(kSubjects, rng_)) + " " + std::string(pick(kClaimVerbs, rng_)) + " " +
           std::string(pick(topic.objects, rng_));
    }
    return unique(maybe_filler() + s + maybe_place());
  }

  std::string_view object() { return pick(topic_.objects, rng_); }

 private:
  template <typename C>
  std::string cue(const C& cues) {
    if (rng_.unit() < noise_) return maybe_filler();
    return std::string(pick(cues, rng_)) + " ";
  }

  std::string maybe_filler() {
    return rng_.unit() < 0.3 ? std::string(pick(kFillers, rng_)) + " " : std::string();
  }

  std::string maybe_place() {
    return rng_.unit() < 0.6 ? " " + std::string(pick(kPlaces, rng_)) : std::string();
  }

  std::string unique(std::string s) {
    std::string candidate = s;
    for (int n = 2; used_.count(candidate); ++n) {
      candidate = s + " " + std::string(pick(kPlaces, rng_));
      if (n > 4) candidate += " number " + std::to_string(used_.size() + n);
    }
    used_.insert(candidate);
    return candidate;
  }

  const Topic& topic_;
  double noise_;
  CounterRng& rng_;
  std::set<std::string>& used_;
};

class MapBuilder {
 public:
  std::string add(std::string text, std::string_view type) {
    const std::string id = std::to_string(next_id_++);
    nodes_.push_back({{"nodeID", id}, {"text", std::move(text)}, {"type", type}});
    return id;
  }
  void link(const std::string& from, const std::string& to) {
    edges_.push_back({{"edgeID", std::to_string(next_id_++)}, {"fromID", from}, {"toID", to}});
  }
  std::string dump() const {
    json doc{{"nodes", nodes_}, {"edges", edges_}, {"locutions", json::array()}};
    return doc.dump(1) + "\n";
  }

 private:
  int next_id_ = 1;
  json nodes_ = json::array();
  json edges_ = json::array();
};

}  // namespace

CorpusProfile us2016_profile() {
  CorpusProfile p;
  p.corpus_id = "US2016";
  p.maps = 120;
  p.ra = 2744;
  p.ca = 888;
  p.ma = 705;
  p.seed = 2016;
  return p;
}

CorpusProfile mm2012_profile() {
  CorpusProfile p;
  p.corpus_id = "mm2012";
  p.maps = 30;
  p.ra = 833;
  p.ca = 200;
  p.ma = 156;
  p.seed = 2012;
  return p;
}

std::vector<corpus::MapDocument> generate_maps(const CorpusProfile& profile) {
  CounterRng rng(profile.seed, 0x5359);
  std::vector<corpus::MapDocument> docs;
  std::set<std::string> used;
  const std::size_t maps = std::max<std::size_t>(1, profile.maps);

  auto share = [&](std::size_t total, std::size_t m) {
    return total / maps + (m < total % maps ? 1 : 0);
  };

  for (std::size_t m = 0; m < maps; ++m) {
    const Topic& topic = topics()[m % topics().size()];
    TextFactory texts(topic, profile.cue_noise, rng, used);
    MapBuilder b;
    std::size_t ra = share(profile.ra, m);
    const std::size_t ca = share(profile.ca, m);
    const std::size_t ma = share(profile.ma, m);
    std::vector<std::pair<std::string, std::string>> claims;  // (id, object)

    auto new_claim = [&] {
      auto object = std::string(texts.object());
      auto id = b.add(texts.claim(object), "I");
      auto loc = b.add("Speaker: " + std::string(object), "L");
      auto ya = b.add("Asserting", "YA");
      b.link(loc, ya);
      b.link(ya, id);
      claims.emplace_back(id, object);
      return claims.back();
    };

    // Inference: one premise per node, except a two-premise node now and then.
    std::string last_ra;
    while (ra > 0) {
      auto [cid, object] = new_claim();
      const std::string s = b.add("Default Inference", "RA");
      const std::size_t premises = (ra >= 2 && rng.unit() < 0.15) ? 2 : 1;
      for (std::size_t k = 0; k < premises; ++k) b.link(b.add(texts.support(object), "I"), s);
      b.link(s, cid);
      ra -= premises;
      last_ra = s;
    }
    if (claims.empty() && ca + ma > 0) new_claim();
    // Conflicts attack existing claims.
    for (std::size_t k = 0; k < ca; ++k) {
      const auto& [cid, object] = claims[rng.below(claims.size())];
      const std::string s = b.add("Default Conflict", "CA");
      b.link(b.add(texts.attack(object), "I"), s);
      b.link(s, cid);
    }
    for (std::size_t k = 0; k < ma; ++k) {
      const auto& [cid, object] = claims[rng.below(claims.size())];
      const std::string s = b.add("Default Rephrase", "MA");
      b.link(b.add(texts.rephrase(object), "I"), s);
      b.link(s, cid);
    }
    // An undercutter: its premise is annotated, but it yields no I-to-I pair.
    if (!last_ra.empty()) {
      const std::string s = b.add("Default Inference", "RA");
      b.link(b.add(texts.support(claims.front().second), "I"), s);
      b.link(s, last_ra);
    }
    // Unannotated propositions for the NO pool: room for NO ratios up to 0.9.
    const std::size_t related = share(profile.ra, m) + ca + ma;
    const std::size_t need = 9 * related + 6;
    std::size_t pool = 2;
    while (pool * (pool - 1) / 2 < need) ++pool;
    for (std::size_t k = 0; k < pool; ++k) b.add(texts.unrelated(), "I");

    docs.push_back({profile.corpus_id + "-" + std::to_string(1000 + m), b.dump()});
  }
  return docs;
}

corpus::CorpusSnapshot generate_snapshot(const CorpusProfile& profile) {
  corpus::CorpusSnapshot snap;
  snap.corpus_id = profile.corpus_id;
  snap.maps = generate_maps(profile);
  std::sort(snap.maps.begin(), snap.maps.end(),
            [](const auto& a, const auto& b) { return a.map_id < b.map_id; });
  snap.content_digest = corpus::snapshot_digest(snap.maps);
  snap.retrieved_at = std::chrono::system_clock::now();
  return snap;
}

}  // namespace argrel::testing
