#include "idgnn/expressiveness.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/generators.hpp"
#include "idgnn/nn/forward.hpp"
#include "idgnn/parallel.hpp"
#include "idgnn/random.hpp"
#include "idgnn/walk_counts.hpp"
#include "idgnn/wl.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

namespace idgnn::expr {

namespace {

template <class Key>
std::pair<double, double> distinct_and_unique(const std::vector<Key>& keys) {
  std::map<Key, Index> counts;
  for (const auto& k : keys) ++counts[k];
  Index unique = 0;
  for (const auto& [k, c] : counts) {
    if (c == 1) ++unique;
  }
  const double total = static_cast<double>(keys.size());
  return {static_cast<double>(counts.size()) / total, static_cast<double>(unique) / total};
}

}  // namespace

ExperimentReport run_regular_experiment(Index n, Index d, Index graph_count, const std::vector<Index>& k_list,
                                        std::uint64_t seed) {
  if (graph_count < 1) throw InputError("graph_count must be >= 1");
  if (k_list.empty()) throw InputError("k_list must not be empty");
  for (Index k : k_list) {
    if (k < 1) throw InputError("every K must be >= 1");
  }
  synth::GeneratorSpec spec{synth::Family::d_regular, n, 0, d, 0.0, seed};
  spec.validate();

  ExperimentReport r;
  r.n = n;
  r.d = d;
  r.graph_count = graph_count;
  r.k_list = k_list;
  r.seed = seed;

  // Signatures at the largest K separate most pairs; only pairs they cannot
  // separate need the exact isomorphism search.
  const Index k_filter = std::max<Index>(*std::max_element(k_list.begin(), k_list.end()), 3);
  std::vector<Graph> pool;
  std::unordered_map<std::string, std::vector<std::size_t>> by_signature;
  const Index budget = 10 * graph_count + 100;
  std::uint64_t attempt = 0;
  while (static_cast<Index>(pool.size()) < graph_count) {
    std::uint64_t restarts = 0;
    Graph g = synth::gen_d_regular(n, d, derive_seed(seed, attempt++), &restarts);
    r.pairing_restarts += restarts;
    const std::string sig = analytic::graph_signature(g, k_filter);
    bool duplicate = false;
    auto& bucket = by_signature[sig];
    for (std::size_t idx : bucket) {
      ++r.isomorphism_checks;
      if (wl::are_isomorphic(pool[idx], g)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      if (++r.num_regen_for_nonisomorphism > budget) {
        throw CapabilityError("could not collect " + std::to_string(graph_count) +
                              " non-isomorphic graphs within the regeneration budget");
      }
      continue;
    }
    bucket.push_back(pool.size());
    pool.push_back(std::move(g));
  }

  std::vector<std::uint64_t> wl_hashes(pool.size());
  std::vector<std::map<Index, std::string>> sigs(pool.size());
  parallel_for(pool.size(), [&](std::size_t i) {
    wl_hashes[i] = wl::wl_graph_hash(pool[i]);
    for (Index k : k_list) sigs[i][k] = analytic::graph_signature(pool[i], k);
  });

  for (Index k : k_list) {
    std::vector<std::string> keys;
    keys.reserve(pool.size());
    for (const auto& s : sigs) keys.push_back(s.at(k));
    const auto [distinct, unique] = distinct_and_unique(keys);
    r.fractions[k] = distinct;
    r.unique_fractions[k] = unique;
  }
  const auto [wl_distinct, wl_unique] = distinct_and_unique(wl_hashes);
  r.wl_distinguished_fraction = wl_unique;
  r.wl_distinct_hashes = static_cast<Index>(std::lround(wl_distinct * static_cast<double>(pool.size())));
  r.wl_all_equal = r.wl_distinct_hashes == 1;
  return r;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json fr = nlohmann::json::object();
  nlohmann::json ufr = nlohmann::json::object();
  for (const auto& [k, v] : fractions) fr[std::to_string(k)] = v;
  for (const auto& [k, v] : unique_fractions) ufr[std::to_string(k)] = v;
  return {
      {"settings",
       {{"n", n},
        {"d", d},
        {"graph_count", graph_count},
        {"k_list", k_list},
        {"seed", seed},
        {"rng", std::string(Rng::kName)},
        {"graph_generator", "configuration model, restart on collision"},
        {"signature", "sorted multiset of closed-walk count rows"},
        {"wl_hash", "fnv1a64 over per-round sorted (signature, count)"}}},
      {"fractions", fr},
      {"unique_fractions", ufr},
      {"wl_distinguished_fraction", wl_distinguished_fraction},
      {"wl_distinct_hashes", wl_distinct_hashes},
      {"wl_all_equal", wl_all_equal},
      {"num_regen_for_nonisomorphism", num_regen_for_nonisomorphism},
      {"pairing_restarts", pairing_restarts},
      {"isomorphism_checks", isomorphism_checks},
      {"timestamp", timestamp ? nlohmann::json(*timestamp) : nlohmann::json(nullptr)},
  };
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  ExperimentReport r;
  const auto& s = j.at("settings");
  r.n = s.at("n").get<Index>();
  r.d = s.at("d").get<Index>();
  r.graph_count = s.at("graph_count").get<Index>();
  r.k_list = s.at("k_list").get<std::vector<Index>>();
  r.seed = s.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("fractions").items()) r.fractions[std::stoll(k)] = v.get<double>();
  for (const auto& [k, v] : j.at("unique_fractions").items()) r.unique_fractions[std::stoll(k)] = v.get<double>();
  r.wl_distinguished_fraction = j.at("wl_distinguished_fraction").get<double>();
  r.wl_distinct_hashes = j.at("wl_distinct_hashes").get<Index>();
  r.wl_all_equal = j.at("wl_all_equal").get<bool>();
  r.num_regen_for_nonisomorphism = j.at("num_regen_for_nonisomorphism").get<Index>();
  r.pairing_restarts = j.at("pairing_restarts").get<std::uint64_t>();
  r.isomorphism_checks = j.value("isomorphism_checks", Index{0});
  if (j.contains("timestamp") && j["timestamp"].is_string()) r.timestamp = j["timestamp"].get<std::string>();
  return r;
}

std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
  std::set<Index> all_k;
  for (const auto& r : reports) all_k.insert(r.k_list.begin(), r.k_list.end());
  std::string out = "setting";
  for (Index k : all_k) out += ",Layer=" + std::to_string(k);
  out += ",1-WL\n";
  char buf[32];
  for (const auto& r : reports) {
    out += "n=" + std::to_string(r.n) + " d=" + std::to_string(r.d) + " " + std::to_string(r.graph_count) + " graphs";
    for (Index k : all_k) {
      out += ',';
      if (auto it = r.fractions.find(k); it != r.fractions.end()) {
        std::snprintf(buf, sizeof buf, "%.2f", it->second);
        out += buf;
      }
    }
    std::snprintf(buf, sizeof buf, ",%.2f\n", r.wl_distinguished_fraction);
    out += buf;
  }
  return out;
}

nn::Matrix node_embeddings(const Graph& g, const nn::Model& model) {
  const auto& c = model.config;
  const Graph plain = g.with_node_features(std::nullopt).with_edge_features(std::nullopt);
  if (c.variant != nn::Variant::id_full) {
    return nn::forward_plain(model, plain, nn::Matrix::Ones(g.num_nodes(), c.input_dim));
  }
  nn::Matrix out(g.num_nodes(), c.hidden_dim);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const EgoNet ego = extract_ego(plain, v, c.num_layers);
    out.row(v) = nn::forward_id_full(model, ego, nn::Matrix::Ones(ego.subgraph.num_nodes(), c.input_dim));
  }
  return out;
}

bool certify_gnn_blindness(const Graph& g, const nn::Model& model) {
  if (g.num_nodes() == 0) throw InputError("certify_gnn_blindness: empty graph");
  const auto deg = g.degrees();
  if (std::any_of(deg.begin(), deg.end(), [&](Index x) { return x != deg.front(); })) {
    throw InputError("certify_gnn_blindness: graph is not regular");
  }
  const nn::Matrix h = node_embeddings(g, model);
  const double spread = (h.colwise().maxCoeff() - h.colwise().minCoeff()).maxCoeff();
  return spread <= 1e-9;
}

}  // namespace idgnn::expr
