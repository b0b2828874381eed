#include <doctest.h>

#include "fixture.hpp"
#include "idgnn/graph_io.hpp"
#include "idgnn/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace idgnn;

namespace {

const fs::path kWork = fs::temp_directory_path() / "idgnn_cli_test";

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const fs::path log = kWork / "stdout.txt";
  const std::string cmd = std::string(IDGNN_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, io::read_file(log)};
}

std::string p(const std::string& name) { return (kWork / name).string(); }

void write(const std::string& name, const std::string& text) { io::write_file_atomic(kWork / name, text); }

struct Fresh {
  Fresh() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fresh, "generate") {
  auto r = cli("generate --family small-world --n 40 --k 4 --p 0.2 --count 64 --seed 1 --out " + p("d.jsonl"));
  REQUIRE(r.code == 0);
  const std::string first = io::read_file(p("d.jsonl"));
  CHECK(std::count(first.begin(), first.end(), '\n') == 64);
  const std::string manifest = io::read_file(p("d.jsonl.manifest.json"));
  REQUIRE(cli("generate --family small-world --n 40 --k 4 --p 0.2 --count 64 --seed 1 --out " + p("d.jsonl")).code == 0);
  CHECK(io::read_file(p("d.jsonl")) == first);
  CHECK(io::read_file(p("d.jsonl.manifest.json")) == manifest);
  const auto m = nlohmann::json::parse(manifest);
  CHECK(m["seeds"]["seed"] == 1);
  CHECK(m["subcommand"] == "generate");

  r = cli("generate --family d-regular --n 5 --d 3 --out " + p("bad.jsonl"));
  CHECK(r.code == 2);
  CHECK(r.out.find("odd") != std::string::npos);
  CHECK(cli("generate --family nope --n 5 --out " + p("bad.jsonl")).code == 2);
  CHECK(cli("generate --bogus").code == 2);
  CHECK_FALSE(fs::exists(p("bad.jsonl")));
}

TEST_CASE_FIXTURE(Fresh, "features") {
  REQUIRE(cli("generate --family small-world --n 12 --k 2 --p 0 --count 3 --seed 1 --out " + p("ring.jsonl")).code == 0);
  REQUIRE(cli("features --data " + p("ring.jsonl") + " --k 3 --out " + p("f.jsonl")).code == 0);
  const Dataset d = read_dataset(fs::path(p("f.jsonl")));
  REQUIRE(d.size() == 3);
  for (const auto& rec : d) {
    const auto& x = *rec.graph.node_features();
    REQUIRE(x.cols() == 3);
    CHECK(x.col(2).isZero());
    for (NodeId v = 0; v < x.rows(); ++v) CHECK(x(v, 1) == rec.graph.degree(v));
  }

  write("broken.jsonl", "{\"num_nodes\": 2, \"edges\": [[0, 1]]}\n{\"num_nodes\": 2, \"edges\": [[0,\n");
  const auto r = cli("features --data " + p("broken.jsonl") + " --k 3 --out " + p("x.jsonl"));
  CHECK(r.code == 2);
  CHECK(r.out.find("line 2") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "wl") {
  write("a.json", graph_to_json(fixture::two_triangles()).dump());
  write("b.json", graph_to_json(fixture::c6()).dump());
  const Graph g = fixture::random_graph(4);
  write("g.json", graph_to_json(g).dump());
  write("h.json", graph_to_json(g.relabeled(fixture::random_perm(g.num_nodes(), 1))).dump());
  auto r = cli("wl compare " + p("a.json") + " " + p("b.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("WL-indistinguishable, NOT isomorphic") != std::string::npos);
  r = cli("wl compare " + p("g.json") + " " + p("h.json"));
  CHECK(r.out.find("\nisomorphic") != std::string::npos);

  Dataset dup{{g, std::nullopt, std::nullopt},
              {g.relabeled(fixture::random_perm(g.num_nodes(), 2)), std::nullopt, std::nullopt},
              {fixture::c6(), std::nullopt, std::nullopt}};
  write("dup.jsonl", dataset_to_jsonl(dup));
  REQUIRE(cli("wl dedupe --data " + p("dup.jsonl") + " --out " + p("dd.jsonl")).code == 0);
  CHECK(read_dataset(fs::path(p("dd.jsonl"))).size() == 2);
  r = cli("wl hash " + p("dup.jsonl"));
  std::istringstream lines(r.out);
  std::string h1, h2, h3;
  lines >> h1 >> h2 >> h3;
  CHECK(h1 == h2);
  CHECK(h1 != h3);
}

TEST_CASE_FIXTURE(Fresh, "expressiveness") {
  const std::string args = "expressiveness --n 12,16 --d 3,3 --count 6 --k 3,4,5,6 --seed 7 --out " + p("r.json");
  REQUIRE(cli(args).code == 0);
  const std::string csv = io::read_file(p("r.csv"));
  CHECK(csv.rfind("setting,Layer=3,Layer=4,Layer=5,Layer=6,1-WL\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const std::string report = io::read_file(p("r.json"));
  REQUIRE(cli(args).code == 0);
  CHECK(io::read_file(p("r.json")) == report);
  CHECK(cli("expressiveness --n 4 --d 3 --count 2 --out " + p("x.json")).code == 3);
}

TEST_CASE_FIXTURE(Fresh, "train eval report") {
  REQUIRE(cli("generate --family small-world --n 16 --n-max 20 --k 4 --p 0.3 --count 10 --seed 2 --out " + p("d.jsonl")).code == 0);
  CHECK(cli("train --data " + p("missing.jsonl") + " --out-dir " + p("m")).code == 2);
  CHECK(cli("train --data " + p("d.jsonl") + " --variant sideways --out-dir " + p("m")).code == 2);

  const std::string args = "train --data " + p("d.jsonl") +
                           " --task edge-spd --variant id-full --epochs 3 --hidden 8 --pairs-per-graph 5 --seed 4 --out-dir ";
  REQUIRE(cli(args + p("m1")).code == 0);
  REQUIRE(cli(args + p("m2")).code == 0);
  const auto rep = nlohmann::json::parse(io::read_file(p("m1/report.json")));
  CHECK(rep["wiring"] == "conditional");
  CHECK(rep["config"]["num_layers"] == 5);
  CHECK(io::read_file(p("m1/report.json")) == io::read_file(p("m2/report.json")));
  CHECK(io::read_file(p("m1/model.ckpt")) == io::read_file(p("m2/model.ckpt")));

  auto r = cli("eval --checkpoint " + p("m1/model.ckpt") + " --data " + p("d.jsonl") + " --out " + p("e.json"));
  REQUIRE(r.code == 0);
  const auto ev = nlohmann::json::parse(io::read_file(p("e.json")));
  CHECK(ev["accuracy"].get<double>() == doctest::Approx(rep["final_val_accuracy"].get<double>()).epsilon(1e-12));

  REQUIRE(cli("train --data " + p("d.jsonl") + " --task node-cc --variant plain --epochs 2 --seed 9 --out-dir " + p("m3")).code == 0);
  REQUIRE(cli("report " + p("m1/report.json") + " " + p("m3/report.json") + " --out " + p("s.csv")).code == 0);
  const std::string csv = io::read_file(p("s.csv"));
  CHECK(csv.rfind("model,flavor,variant,task,seed,accuracy\n", 0) == 0);
  CHECK(csv.find(",sage,id_full,edge_spd,4,") != std::string::npos);
  CHECK(csv.find(",sage,plain,node_cc,9,") != std::string::npos);
}
