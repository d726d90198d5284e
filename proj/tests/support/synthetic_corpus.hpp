#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "argrel/corpus_client.hpp"

namespace argrel::testing {

/// Shape of a generated AIF corpus. Relation counts are exact: compiling the
/// result yields precisely ra/ca/ma related pairs.
struct CorpusProfile {
  std::string corpus_id = "synthetic";
  std::size_t maps = 10;
  std::size_t ra = 40;
  std::size_t ca = 12;
  std::size_t ma = 10;
  /// Probability that a surface cue word is dropped from, or added to, a
  /// proposition; keeps the task from being trivially separable.
  double cue_noise = 0.25;
  std::uint64_t seed = 1;
};

CorpusProfile us2016_profile();
CorpusProfile mm2012_profile();

/// Deterministic AIFdb-style JSON documents, ids "<corpus>-<n>".
std::vector<corpus::MapDocument> generate_maps(const CorpusProfile& profile);

corpus::CorpusSnapshot generate_snapshot(const CorpusProfile& profile);

}  // namespace argrel::testing
