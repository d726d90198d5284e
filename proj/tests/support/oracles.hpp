#pragma once

// Reference computations written independently of the library code paths
// they check: straight loops over raw inputs, no shared helpers.

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "argrel/aif_graph.hpp"
#include "argrel/labels.hpp"

namespace argrel::testing {

struct OracleScores {
  std::vector<std::vector<unsigned long long>> confusion;  // [pred][gold]
  std::vector<double> f1;
  double macro_f1 = 0.0;
  std::vector<std::vector<double>> error_shares;  // [pred][gold]
};

OracleScores brute_force_scores(const std::vector<RelationLabel>& golds,
                                const std::vector<RelationLabel>& preds, const LabelSet& labels);

/// Every (source I-node id, relation id, target I-node id) reachable by a
/// pair of edges, no dedup, no text handling.
std::set<std::tuple<std::string, std::string, std::string>> brute_force_relation_paths(
    const aif::ArgumentMap& map);

/// All I-node ids minus those sharing an edge with an RA/CA/MA node.
std::vector<std::string> brute_force_pool(const aif::ArgumentMap& map);

}  // namespace argrel::testing
