#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cesaro/errors.hpp"
#include "cesaro/io.hpp"

using namespace cesaro;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("cesaro_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string file(const std::string& name) const {
    return (dir / name).string();
  }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string("'") + CESARO_CLI_PATH + "' " + args +
                    " >/dev/null 2>/dev/null";
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

io::Json jload(const std::string& path) { return io::Json::parse(slurp(path)); }

}  // namespace

TEST_CASE("tree spec parsing: strict field validation") {
  CHECK_THROWS_AS(io::parse_tree_spec(io::Json::parse("[1,2]")),
                  MalformedSpec);
  CHECK_THROWS_AS(io::parse_tree_spec(io::Json::parse("{\"kind\":\"ring\"}")),
                  MalformedSpec);
  CHECK_THROWS_AS(
      io::parse_tree_spec(io::Json::parse("{\"kind\":\"path\"}")),
      MalformedSpec);
  CHECK_THROWS_AS(io::parse_tree_spec(io::Json::parse(
                      "{\"kind\":\"kary_root\",\"truncate_depth\":4}")),
                  MalformedSpec);
  CHECK_THROWS_AS(io::parse_tree_spec(io::Json::parse(
                      "{\"kind\":\"explicit\",\"edges\":[[0]]}")),
                  MalformedSpec);

  TreeGenSpec k = io::parse_tree_spec(io::Json::parse(
      "{\"kind\":\"kary_root\",\"k\":3,\"truncate_depth\":5}"));
  CHECK(build_tree(k).vertex_count == 16);

  TreeGenSpec e = io::parse_tree_spec(io::Json::parse(
      "{\"kind\":\"explicit\",\"edges\":[[0,4],[4,2]]}"));
  RootedTree t = build_tree(e);
  CHECK(t.vertex_count == 3);
  CHECK(t.truncation_depth == 2);
}

TEST_CASE("vector and grid parsing") {
  auto v = io::parse_vector(io::Json::parse("[[1.0,0.5],2.25,[0,-1]]"));
  REQUIRE(v.size() == 3);
  CHECK(v[0] == Complex{1.0, 0.5});
  CHECK(v[1] == Complex{2.25, 0.0});
  CHECK(v[2] == Complex{0.0, -1.0});
  CHECK_THROWS_AS(io::parse_vector(io::Json::parse("{\"a\":1}")),
                  MalformedSpec);

  std::istringstream grid("# sample points\n0.5\n\n0.8,0.3\n  3.5 , -0.25\n");
  auto g = io::parse_lambda_grid(grid);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == Complex{0.5, 0.0});
  CHECK(g[1] == Complex{0.8, 0.3});
  CHECK(g[2] == Complex{3.5, -0.25});

  std::istringstream bad("0.5;0.2\n");
  CHECK_THROWS_AS(io::parse_lambda_grid(bad), MalformedSpec);
}

TEST_CASE("cli: tree stats with depth override") {
  TempDir tmp;
  io::write_file(tmp.file("path.json"),
                 "{\"kind\":\"path\",\"truncate_depth\":64}\n");
  CHECK(run_cli("tree-stats --spec '" + tmp.file("path.json") + "' --out '" +
                tmp.file("stats.json") + "'") == 0);
  io::Json j = jload(tmp.file("stats.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["vertex_count"] == 65);
  CHECK(j["metrics"]["width"] == 1);
  CHECK(j["metrics"]["branching_index"] == 0);
  CHECK(j["m_alpha"]["1"]["values"].size() == 65);

  CHECK(run_cli("tree-stats --spec '" + tmp.file("path.json") +
                "' --depth 10 --out '" + tmp.file("stats10.json") + "'") == 0);
  CHECK(jload(tmp.file("stats10.json"))["vertex_count"] == 11);
}

TEST_CASE("cli: norm command emits certificates and checks the envelope") {
  TempDir tmp;
  io::write_file(tmp.file("path.json"),
                 "{\"kind\":\"path\",\"truncate_depth\":64}\n");
  io::write_file(tmp.file("wide.json"),
                 "{\"kind\":\"widening\",\"truncate_depth\":16}\n");
  CHECK(run_cli("norm --spec '" + tmp.file("path.json") + "' --out '" +
                tmp.file("norm.json") + "'") == 0);
  io::Json j = jload(tmp.file("norm.json"));
  CHECK(j["section_norm"].get<double>() ==
        doctest::Approx(1.599038173070).epsilon(1e-6));
  CHECK(j["envelope"]["ok"] == true);
  CHECK(j["envelope"]["upper"] == 2.0);
  CHECK(j["lower_certificates"].size() >= 4);

  CHECK(run_cli("norm --spec '" + tmp.file("wide.json") + "'") == 2);
}

TEST_CASE("cli: apply and adjoint move vectors through files") {
  TempDir tmp;
  io::write_file(tmp.file("k2.json"),
                 "{\"kind\":\"kary_root\",\"k\":2,\"truncate_depth\":2}\n");
  io::write_file(tmp.file("e0.json"), "[[1,0],[0,0],[0,0],[0,0],[0,0]]\n");
  CHECK(run_cli("apply --spec '" + tmp.file("k2.json") + "' --vec '" +
                tmp.file("e0.json") + "' --out '" + tmp.file("out.json") +
                "'") == 0);
  io::Json j = jload(tmp.file("out.json"));
  CHECK(j["operation"] == "apply");
  CHECK(j["vector"][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["vector"][1][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["vector"][3][0].get<double>() == doctest::Approx(1.0 / 3.0));

  io::write_file(tmp.file("e4.json"), "[[0,0],[0,0],[0,0],[0,0],[1,0]]\n");
  CHECK(run_cli("adjoint --spec '" + tmp.file("k2.json") + "' --vec '" +
                tmp.file("e4.json") + "' --format csv --out '" +
                tmp.file("out.csv") + "'") == 0);
  std::string csv = slurp(tmp.file("out.csv"));
  CHECK(csv.rfind("id,re,im\n", 0) == 0);
  CHECK(csv.find("\n1,0,0\n") != std::string::npos);

  // Vector length must match the tree.
  io::write_file(tmp.file("short.json"), "[[1,0]]\n");
  CHECK(run_cli("apply --spec '" + tmp.file("k2.json") + "' --vec '" +
                tmp.file("short.json") + "'") == 2);
}

TEST_CASE("cli: spectral commands") {
  TempDir tmp;
  io::write_file(tmp.file("path.json"),
                 "{\"kind\":\"path\",\"truncate_depth\":64}\n");
  io::write_file(tmp.file("k2.json"),
                 "{\"kind\":\"kary_root\",\"k\":2,\"truncate_depth\":64}\n");

  CHECK(run_cli("eigvec --spec '" + tmp.file("path.json") +
                "' --lambda 0.5 --out '" + tmp.file("ev.json") + "'") == 0);
  io::Json ev = jload(tmp.file("ev.json"));
  CHECK(ev["residual"].get<double>() <= 1e-12);
  CHECK(ev["lambda"][0].get<double>() == 0.5);

  CHECK(run_cli("hypo --spec '" + tmp.file("k2.json") + "' --out '" +
                tmp.file("hypo.json") + "'") == 0);
  io::Json hy = jload(tmp.file("hypo.json"));
  CHECK(hy["k_T"] == 1);
  CHECK(hy["closed_form"].get<double>() ==
        doctest::Approx(-0.210131866303547).epsilon(1e-9));

  CHECK(run_cli("pointspec --spec '" + tmp.file("path.json") +
                "' --seed 1 --rows 20 --format csv --out '" +
                tmp.file("fs.csv") + "'") == 0);
  std::string fs_csv = slurp(tmp.file("fs.csv"));
  CHECK(fs_csv.find("\n2,3,3,1,14\n") != std::string::npos);

  io::write_file(tmp.file("grid.csv"), "0.5\n3.5\n1.0,1.02\n");
  CHECK(run_cli("pointspec --spec '" + tmp.file("path.json") + "' --grid '" +
                tmp.file("grid.csv") + "' --format csv --out '" +
                tmp.file("pts.csv") + "'") == 0);
  std::string pts = slurp(tmp.file("pts.csv"));
  CHECK(pts.find("inside-disc") != std::string::npos);
  CHECK(pts.find("outside-disc") != std::string::npos);
  CHECK(pts.find("boundary-ring") != std::string::npos);

  CHECK(run_cli("decomp --spec '" + tmp.file("k2.json") + "' --out '" +
                tmp.file("dec.json") + "'") == 0);
  CHECK(jload(tmp.file("dec.json"))["block_pattern_exact"] == true);
}

TEST_CASE("cli: exit codes separate failure classes") {
  TempDir tmp;
  io::write_file(tmp.file("bad.json"), "{\"kind\":\n");
  io::write_file(tmp.file("path.json"),
                 "{\"kind\":\"path\",\"truncate_depth\":64}\n");
  CHECK(run_cli("tree-stats --spec '" + tmp.file("missing.json") + "'") == 3);
  CHECK(run_cli("tree-stats --spec '" + tmp.file("bad.json") + "'") == 2);
  CHECK(run_cli("pointspec --spec '" + tmp.file("path.json") + "'") == 2);
  CHECK(run_cli("eigvec --spec '" + tmp.file("path.json") +
                "' --lambda 2.5") == 2);
  CHECK(run_cli("norm --spec '" + tmp.file("path.json") +
                "' --max-iters 2") == 4);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: identical invocations produce byte-identical output") {
  TempDir tmp;
  io::write_file(tmp.file("k3.json"),
                 "{\"kind\":\"kary_root\",\"k\":3,\"truncate_depth\":32}\n");
  std::string base = "norm --spec '" + tmp.file("k3.json") + "' --out '";
  CHECK(run_cli(base + tmp.file("a.json") + "'") == 0);
  CHECK(run_cli(base + tmp.file("b.json") + "'") == 0);
  CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));

  std::string demo = "demo-unbounded --series-cap 1000 --format csv --out '";
  CHECK(run_cli(demo + tmp.file("d1.csv") + "'") == 0);
  CHECK(run_cli(demo + tmp.file("d2.csv") + "'") == 0);
  CHECK(slurp(tmp.file("d1.csv")) == slurp(tmp.file("d2.csv")));
}

TEST_CASE("cli: demo table and consolidated verification") {
  TempDir tmp;
  CHECK(run_cli("demo-unbounded --series-cap 1000 --out '" +
                tmp.file("demo.json") + "'") == 0);
  io::Json demo = jload(tmp.file("demo.json"));
  REQUIRE(demo["rows"].size() == 4);  // N = 1, 10, 100, 1000
  CHECK(demo["rows"][0]["S"].get<double>() ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(demo["rows"][2]["S"].get<double>() ==
        doctest::Approx(39.004168738).epsilon(1e-6));
  CHECK(demo["strictly_increasing"] == true);

  CHECK(run_cli("reproduce --out '" + tmp.file("rep.json") + "'") == 0);
  io::Json rep = jload(tmp.file("rep.json"));
  CHECK(rep["all_pass"] == true);
  CHECK(rep["rows"].size() >= 8);
  for (const auto& row : rep["rows"]) CHECK(row["pass"] == true);
}
