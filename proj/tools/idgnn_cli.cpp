#include "idgnn/errors.hpp"
#include "idgnn/expressiveness.hpp"
#include "idgnn/generators.hpp"
#include "idgnn/graph_io.hpp"
#include "idgnn/io.hpp"
#include "idgnn/nn/checkpoint.hpp"
#include "idgnn/nn/model.hpp"
#include "idgnn/random.hpp"
#include "idgnn/tasks.hpp"
#include "idgnn/training.hpp"
#include "idgnn/walk_counts.hpp"
#include "idgnn/wl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace idgnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCapability = 3;
constexpr int kExitNumeric = 4;

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw InputError("not an integer list: " + text);
    }
    if (used != item.size()) throw InputError("not an integer list: " + text);
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw InputError("empty list: " + text);
  return out;
}

json input_digest(const fs::path& p) {
  return {{"path", p.string()}, {"fnv1a64", io::hex64(io::fnv1a64(io::read_file(p)))}};
}

struct Manifest {
  std::string subcommand;
  json flags = json::object();
  json seeds = json::object();
  json inputs = json::array();
  json outputs = json::array();

  void write(const fs::path& path) const {
    const json j = {{"tool", "idgnn"},      {"version", IDGNN_VERSION}, {"rng", Rng::kName},
                    {"subcommand", subcommand}, {"flags", flags},       {"seeds", seeds},
                    {"inputs", inputs},     {"outputs", outputs}};
    io::write_file_atomic(path, j.dump(2) + "\n");
  }
};

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

std::string csv_path_for(const fs::path& report) {
  fs::path p = report;
  p.replace_extension(".csv");
  return p.string();
}

// ---- generate

struct GenerateArgs {
  std::string family;
  Index n = 0;
  Index n_max = 0;
  Index k = -1;
  Index d = -1;
  Index m = -1;
  double p = -1.0;
  Index count = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  synth::GeneratorSpec spec;
  spec.family = synth::family_from_string(a.family);
  spec.num_nodes = a.n;
  spec.num_nodes_max = a.n_max;
  spec.seed = a.seed;
  switch (spec.family) {
    case synth::Family::d_regular:
      if (a.d < 0) throw InputError("d-regular needs --d");
      spec.degree_param = a.d;
      spec.prob = 0.0;
      break;
    case synth::Family::small_world:
      if (a.k < 0) throw InputError("small-world needs --k");
      spec.degree_param = a.k;
      spec.prob = a.p < 0 ? 0.2 : a.p;
      break;
    case synth::Family::scale_free:
      if (a.m < 0) throw InputError("scale-free needs --m");
      spec.degree_param = a.m;
      spec.prob = a.p < 0 ? 0.5 : a.p;
      break;
  }
  if (a.count < 1) throw InputError("--count must be >= 1");
  spec.validate();
  const Dataset data = synth::gen_dataset(spec, a.count, a.seed);
  io::write_file_atomic(a.out, dataset_to_jsonl(data));

  Manifest m{"generate"};
  m.flags = {{"family", synth::to_string(spec.family)}, {"n", a.n},       {"n_max", a.n_max},
             {"degree_param", spec.degree_param},        {"p", spec.prob}, {"count", a.count}};
  m.seeds = {{"seed", a.seed}};
  m.outputs = {a.out};
  m.write(manifest_path(a.out));
  return kExitOk;
}

// ---- features

int run_features(const std::string& data_path, Index k, const std::string& out) {
  if (k < 1) throw InputError("--k must be >= 1");
  Dataset data = read_dataset(fs::path(data_path));
  for (auto& rec : data) {
    const Graph& g = rec.graph;
    const auto counts = analytic::walk_count_features(g, k);
    const Index base = g.node_features() ? g.node_features()->cols() : 0;
    FeatureMatrix x(g.num_nodes(), base + k);
    if (base > 0) x.leftCols(base) = *g.node_features();
    x.rightCols(k) = counts.cast<double>();
    rec.graph = g.with_node_features(std::move(x));
  }
  io::write_file_atomic(out, dataset_to_jsonl(data));
  Manifest m{"features"};
  m.flags = {{"k", k}};
  m.inputs.push_back(input_digest(data_path));
  m.outputs = {out};
  m.write(manifest_path(out));
  return kExitOk;
}

// ---- wl

int run_wl_hash(const std::string& path) {
  const Dataset data = read_dataset(fs::path(path));
  for (const auto& rec : data) std::cout << io::hex64(wl::wl_graph_hash(rec.graph)) << "\n";
  return kExitOk;
}

int run_wl_compare(const std::string& a_path, const std::string& b_path) {
  const Graph a = read_graph_file(a_path);
  const Graph b = read_graph_file(b_path);
  const auto ha = wl::wl_graph_hash(a);
  const auto hb = wl::wl_graph_hash(b);
  std::cout << "hash_a " << io::hex64(ha) << "\nhash_b " << io::hex64(hb) << "\n";
  if (wl::are_isomorphic(a, b)) {
    std::cout << "isomorphic\n";
  } else if (ha == hb) {
    std::cout << "WL-indistinguishable, NOT isomorphic\n";
  } else {
    std::cout << "WL-distinguishable, NOT isomorphic\n";
  }
  return kExitOk;
}

int run_wl_dedupe(const std::string& path, const std::string& out) {
  const Dataset data = read_dataset(fs::path(path));
  Dataset kept;
  std::vector<std::uint64_t> hashes;
  for (const auto& rec : data) {
    const auto h = wl::wl_graph_hash(rec.graph);
    bool dup = false;
    for (std::size_t i = 0; i < kept.size() && !dup; ++i) {
      dup = hashes[i] == h && wl::are_isomorphic(kept[i].graph, rec.graph);
    }
    if (!dup) {
      kept.push_back(rec);
      hashes.push_back(h);
    }
  }
  io::write_file_atomic(out, dataset_to_jsonl(kept));
  std::cout << "kept " << kept.size() << " of " << data.size() << "\n";
  Manifest m{"wl dedupe"};
  m.inputs.push_back(input_digest(path));
  m.outputs = {out};
  m.write(manifest_path(out));
  return kExitOk;
}

// ---- expressiveness

int run_expressiveness(const std::string& n_list, const std::string& d_list, Index count, const std::string& k_list,
                       std::uint64_t seed, const std::string& out, std::string csv) {
  const auto ns = parse_index_list(n_list);
  const auto ds = parse_index_list(d_list);
  const auto ks = parse_index_list(k_list);
  if (ns.size() != ds.size()) throw InputError("--n and --d lists must have equal length");
  std::vector<expr::ExperimentReport> reports;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    reports.push_back(expr::run_regular_experiment(ns[i], ds[i], count, ks, seed));
  }
  json j = json::array();
  for (const auto& r : reports) j.push_back(r.to_json());
  const json doc = reports.size() == 1 ? j[0] : json{{"settings", j}};
  if (csv.empty()) csv = csv_path_for(out);
  io::write_file_atomic(out, doc.dump(2) + "\n");
  io::write_file_atomic(csv, expr::reports_to_csv(reports));
  std::cout << expr::reports_to_csv(reports);

  Manifest m{"expressiveness"};
  m.flags = {{"n", ns}, {"d", ds}, {"count", count}, {"k", ks}};
  m.seeds = {{"seed", seed}};
  m.outputs = {out, csv};
  m.write(manifest_path(out));
  return kExitOk;
}

// ---- train / eval

struct TrainArgs {
  std::string data;
  std::string task = "node-cc";
  std::string flavor = "sage";
  std::string variant = "plain";
  std::string aggregation = "max";
  Index layers = 0;
  Index hidden = 32;
  Index epochs = 200;
  double lr = 0.01;
  std::uint64_t seed = 0;
  Index fast_k = 10;
  Index pairs_per_graph = 24;
  double val_fraction = 0.2;
  Index batch_graphs = 0;
  std::string out_dir;
};

struct TaskSetup {
  task::TaskKind kind;
  Index pairs_per_graph;
  std::uint64_t task_seed;
  std::uint64_t split_seed;
  double val_fraction;

  json to_json() const {
    return {{"task", task::to_string(kind)},
            {"pairs_per_graph", pairs_per_graph},
            {"task_seed", task_seed},
            {"split_seed", split_seed},
            {"val_fraction", val_fraction}};
  }
  static TaskSetup from_json(const json& j) {
    return {task::task_kind_from_string(j.at("task").get<std::string>()), j.at("pairs_per_graph").get<Index>(),
            j.at("task_seed").get<std::uint64_t>(), j.at("split_seed").get<std::uint64_t>(),
            j.at("val_fraction").get<double>()};
  }
};

task::LabeledTask build_task(const Dataset& data, const TaskSetup& s) {
  switch (s.kind) {
    case task::TaskKind::node_cc: return task::make_node_cc_task(data);
    case task::TaskKind::edge_spd: return task::make_spd_task(data, s.pairs_per_graph, s.task_seed);
    case task::TaskKind::graph_cc: return task::make_graph_cc_task(data);
  }
  throw InputError("unknown task");
}

Index feature_width(const Dataset& data) {
  if (data.empty()) throw InputError("dataset is empty");
  const auto& f = data.front().graph.node_features();
  return f ? f->cols() : 1;
}

int run_train(const TrainArgs& a) {
  const Dataset data = read_dataset(fs::path(a.data));
  TaskSetup setup{task::task_kind_from_string(a.task), a.pairs_per_graph, derive_seed(a.seed, 1),
                  derive_seed(a.seed, 2), a.val_fraction};
  const auto labeled = build_task(data, setup);
  for (const auto& w : labeled.warnings) std::cerr << "warning: " << w << "\n";
  const auto [train_split, val_split] = task::split(labeled, 1.0 - a.val_fraction, setup.split_seed);

  nn::ModelConfig cfg;
  cfg.flavor = nn::flavor_from_string(a.flavor);
  cfg.variant = nn::variant_from_string(a.variant);
  cfg.aggregation = nn::aggregation_from_string(a.aggregation);
  cfg.task_level = task::task_level(setup.kind);
  cfg.num_layers = a.layers > 0 ? a.layers : (setup.kind == task::TaskKind::edge_spd ? 5 : 3);
  cfg.hidden_dim = a.hidden;
  cfg.input_dim = feature_width(data);
  cfg.output_dim = labeled.spec.num_classes;
  cfg.fast_k = a.fast_k;
  cfg.seed = a.seed;
  cfg.validate();

  nn::Model model = nn::init_model(cfg);
  task::TrainOptions opt;
  opt.epochs = a.epochs;
  opt.lr = a.lr;
  opt.seed = a.seed;
  opt.graphs_per_batch = a.batch_graphs;
  const task::TrainReport report = task::train(model, train_split, val_split, opt);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const fs::path ckpt = dir / "model.ckpt";
  const fs::path report_path = dir / "report.json";
  json report_json = report.to_json();
  report_json["setup"] = setup.to_json();
  report_json["data_digest"] = io::hex64(io::fnv1a64(io::read_file(a.data)));
  nn::save_checkpoint(ckpt, model, setup.to_json());
  io::write_file_atomic(report_path, report_json.dump(2) + "\n");
  std::printf("wiring %s\ntrain_accuracy %.4f\nval_accuracy %.4f\n", report.wiring.c_str(),
              report.final_train_accuracy, report.final_val_accuracy);

  Manifest m{"train"};
  m.flags = {{"task", a.task},         {"flavor", a.flavor},   {"variant", a.variant},
             {"aggregation", a.aggregation}, {"layers", cfg.num_layers}, {"hidden", a.hidden},
             {"epochs", a.epochs},     {"lr", a.lr},           {"fast_k", a.fast_k},
             {"pairs_per_graph", a.pairs_per_graph}, {"val_fraction", a.val_fraction},
             {"batch_graphs", a.batch_graphs}};
  m.seeds = {{"seed", a.seed}, {"task_seed", setup.task_seed}, {"split_seed", setup.split_seed}};
  m.inputs.push_back(input_digest(a.data));
  m.outputs = {ckpt.string(), report_path.string()};
  m.write(dir / "manifest.json");
  return kExitOk;
}

int run_eval(const std::string& ckpt_path, const std::string& data_path, const std::string& which,
             const std::string& out) {
  const auto loaded = nn::load_checkpoint(ckpt_path);
  const TaskSetup setup = TaskSetup::from_json(loaded.extra);
  const Dataset data = read_dataset(fs::path(data_path));
  const auto labeled = build_task(data, setup);
  double acc = 0.0;
  if (which == "all") {
    acc = task::evaluate(loaded.model, labeled);
  } else {
    const auto [tr, va] = task::split(labeled, 1.0 - setup.val_fraction, setup.split_seed);
    acc = task::evaluate(loaded.model, which == "train" ? tr : va);
  }
  std::printf("accuracy %.4f\n", acc);
  if (!out.empty()) {
    const json j = {{"checkpoint", ckpt_path}, {"split", which}, {"accuracy", acc}, {"setup", setup.to_json()}};
    io::write_file_atomic(out, j.dump(2) + "\n");
    Manifest m{"eval"};
    m.flags = {{"split", which}};
    m.inputs = {input_digest(ckpt_path), input_digest(data_path)};
    m.outputs = {out};
    m.write(manifest_path(out));
  }
  return kExitOk;
}

// ---- report

int run_report(const std::vector<std::string>& paths, const std::string& out) {
  std::string csv = "model,flavor,variant,task,seed,accuracy\n";
  for (const auto& p : paths) {
    const json j = json::parse(io::read_file(p), nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed report " + p, 1);
    const auto r = task::TrainReport::from_json(j);
    const auto cfg = nn::config_from_json(r.config);
    char acc[32];
    std::snprintf(acc, sizeof acc, "%.4f", r.final_val_accuracy);
    csv += nn::to_string(cfg.flavor) + "-" + nn::to_string(cfg.variant) + "," + nn::to_string(cfg.flavor) + "," +
           nn::to_string(cfg.variant) + "," + r.task.at("kind").get<std::string>() + "," +
           std::to_string(cfg.seed) + "," + acc + "\n";
  }
  if (out.empty()) {
    std::cout << csv;
    return kExitOk;
  }
  io::write_file_atomic(out, csv);
  Manifest m{"report"};
  for (const auto& p : paths) m.inputs.push_back(input_digest(p));
  m.outputs = {out};
  m.write(manifest_path(out));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity-aware GNN toolkit"};
  app.set_version_flag("--version", IDGNN_VERSION);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic graph dataset (JSONL)");
  generate->add_option("--family", gen.family, "d-regular | small-world | scale-free")->required();
  generate->add_option("--n", gen.n, "Nodes per graph (minimum when --n-max is set)")->required();
  generate->add_option("--n-max", gen.n_max, "Maximum nodes per graph");
  generate->add_option("--k", gen.k, "Small-world ring degree");
  generate->add_option("--d", gen.d, "Regular degree");
  generate->add_option("--m", gen.m, "Scale-free edges per new node");
  generate->add_option("--p", gen.p, "Rewiring or triad probability");
  generate->add_option("--count", gen.count, "Number of graphs");
  generate->add_option("--seed", gen.seed);
  generate->add_option("--out", gen.out)->required();

  std::string feat_data, feat_out;
  Index feat_k = 0;
  auto* features = app.add_subcommand("features", "Append closed-walk count columns to node features");
  features->add_option("--data", feat_data)->required();
  features->add_option("--k", feat_k)->required();
  features->add_option("--out", feat_out)->required();

  auto* wl_cmd = app.add_subcommand("wl", "1-WL hashing, comparison and dedupe");
  wl_cmd->require_subcommand(1);
  std::string wl_hash_path, wl_a, wl_b, wl_dd_data, wl_dd_out;
  auto* wl_hash = wl_cmd->add_subcommand("hash", "Print the WL hash of every graph in a file");
  wl_hash->add_option("file", wl_hash_path)->required();
  auto* wl_compare = wl_cmd->add_subcommand("compare", "Compare two graph files");
  wl_compare->add_option("a", wl_a)->required();
  wl_compare->add_option("b", wl_b)->required();
  auto* wl_dedupe = wl_cmd->add_subcommand("dedupe", "Drop graphs isomorphic to an earlier one");
  wl_dedupe->add_option("--data", wl_dd_data)->required();
  wl_dedupe->add_option("--out", wl_dd_out)->required();

  std::string ex_n, ex_d, ex_k = "3,4,5,6", ex_out, ex_csv;
  Index ex_count = 100;
  std::uint64_t ex_seed = 0;
  auto* expressiveness = app.add_subcommand("expressiveness", "Distinguishability of random regular graphs");
  expressiveness->add_option("--n", ex_n, "Node count, or comma list")->required();
  expressiveness->add_option("--d", ex_d, "Degree, or comma list")->required();
  expressiveness->add_option("--count", ex_count);
  expressiveness->add_option("--k,--k-list", ex_k);
  expressiveness->add_option("--seed", ex_seed);
  expressiveness->add_option("--out", ex_out)->required();
  expressiveness->add_option("--csv", ex_csv, "Table path (default: --out with .csv)");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a synthetic task");
  train_cmd->add_option("--data", tr.data)->required();
  train_cmd->add_option("--task", tr.task, "node-cc | edge-spd | graph-cc");
  train_cmd->add_option("--flavor", tr.flavor, "gcn | sage | gin");
  train_cmd->add_option("--variant", tr.variant, "plain | id-full | id-fast");
  train_cmd->add_option("--aggregation", tr.aggregation, "sum | mean | max");
  train_cmd->add_option("--layers", tr.layers, "Default 3, or 5 for edge-spd");
  train_cmd->add_option("--hidden", tr.hidden);
  train_cmd->add_option("--epochs", tr.epochs);
  train_cmd->add_option("--lr", tr.lr);
  train_cmd->add_option("--seed", tr.seed);
  train_cmd->add_option("--fast-k", tr.fast_k);
  train_cmd->add_option("--pairs-per-graph", tr.pairs_per_graph);
  train_cmd->add_option("--val-fraction", tr.val_fraction);
  train_cmd->add_option("--batch-graphs", tr.batch_graphs, "Graphs per minibatch, 0 for full batch");
  train_cmd->add_option("--out-dir", tr.out_dir)->required();

  std::string ev_ckpt, ev_data, ev_split = "val", ev_out;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", ev_ckpt)->required();
  eval_cmd->add_option("--data", ev_data)->required();
  eval_cmd->add_option("--split", ev_split)->check(CLI::IsMember({"train", "val", "all"}));
  eval_cmd->add_option("--out", ev_out);

  std::vector<std::string> rep_paths;
  std::string rep_out;
  auto* report_cmd = app.add_subcommand("report", "Collect training reports into a CSV");
  report_cmd->add_option("reports", rep_paths)->required();
  report_cmd->add_option("--out", rep_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*features) return run_features(feat_data, feat_k, feat_out);
    if (*wl_hash) return run_wl_hash(wl_hash_path);
    if (*wl_compare) return run_wl_compare(wl_a, wl_b);
    if (*wl_dedupe) return run_wl_dedupe(wl_dd_data, wl_dd_out);
    if (*expressiveness) return run_expressiveness(ex_n, ex_d, ex_count, ex_k, ex_seed, ex_out, ex_csv);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_eval(ev_ckpt, ev_data, ev_split, ev_out);
    if (*report_cmd) return run_report(rep_paths, rep_out);
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
