#pragma once

#include "idgnn/graph.hpp"
#include "idgnn/nn/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace idgnn::expr {

/// Outcome of the random d-regular differentiation experiment.
///
/// `fractions[K]` is (distinct closed-walk signatures up to length K) /
/// graph_count. `unique_fractions[K]` counts instead the graphs whose
/// signature no other graph in the pool shares. The WL baseline uses the
/// same "unique" notion, so it is 0 when every WL hash coincides.
struct ExperimentReport {
  Index n = 0;
  Index d = 0;
  Index graph_count = 0;
  std::vector<Index> k_list;
  std::uint64_t seed = 0;
  std::map<Index, double> fractions;
  std::map<Index, double> unique_fractions;
  double wl_distinguished_fraction = 0.0;
  Index wl_distinct_hashes = 0;
  bool wl_all_equal = false;
  Index num_regen_for_nonisomorphism = 0;
  std::uint64_t pairing_restarts = 0;
  /// Exact isomorphism checks run while building the pool (pairs whose
  /// signatures could not already tell them apart).
  Index isomorphism_checks = 0;
  std::optional<std::string> timestamp;

  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
};

/// Builds a pool of `graph_count` pairwise non-isomorphic random d-regular
/// graphs (graph attempt i uses derive_seed(seed, i)) and measures how many
/// the closed-walk signatures tell apart for each K. A duplicate is
/// regenerated; more than 10·graph_count + 100 regenerations throws
/// CapabilityError.
ExperimentReport run_regular_experiment(Index n, Index d, Index graph_count, const std::vector<Index>& k_list,
                                        std::uint64_t seed);

/// One CSV row per report mirroring the differentiation table: a setting
/// label followed by one column per K.
std::string reports_to_csv(const std::vector<ExperimentReport>& reports);

/// True iff every node embedding produced by `model` on g (constant unit
/// features) agrees with every other within 1e-9 absolute. id_full models
/// embed each node through its own ego net. Throws InputError unless g is
/// regular.
bool certify_gnn_blindness(const Graph& g, const nn::Model& model);

/// Per-node embeddings as used by certify_gnn_blindness.
nn::Matrix node_embeddings(const Graph& g, const nn::Model& model);

}  // namespace idgnn::expr
