#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "hmls/mesh.hpp"
#include "hmls/mesh_io.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace hmls;
using namespace hmls::testing;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
  static int counter = 0;
  const std::string log = dir.file("cli_log_" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(HMLS_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = read_text(log);
  return result;
}

bool exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("help exits 0 and lists the subcommands") {
  TempDir dir;
  const RunResult r = run_cli(dir, "--help");
  CHECK(r.exit_code == 0);
  for (const char* name : {"filter", "noise", "metrics", "surface-demo"})
    CHECK(r.output.find(name) != std::string::npos);
}

TEST_CASE("filter --help documents the defaults") {
  TempDir dir;
  const RunResult r = run_cli(dir, "filter --help");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("1000") != std::string::npos);   // gamma
  CHECK(r.output.find("100") != std::string::npos);    // neighbor cap
  CHECK(r.output.find("0.001") != std::string::npos);  // eta
}

TEST_CASE("filtering a noise-free plane is the identity away from the boundary") {
  TempDir dir;
  const TriMesh plane = make_plane_grid(14, 14, 1.0);
  const double le = average_edge_length(plane);
  const std::string in = dir.file("plane.obj");
  const std::string out = dir.file("plane_f.obj");
  save_mesh(plane, in);
  const RunResult r = run_cli(dir, "filter " + in + " " + out + " --iters 1 --sigma-s 0.05");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("iter 1/1") != std::string::npos);
  const TriMesh filtered = load_mesh(out);
  REQUIRE(filtered.faces == plane.faces);
  const double safety = 2.0 * le + 1e-9;
  for (int i = 0; i < plane.vertex_count(); ++i) {
    const Vec3& p = plane.vertices[i];
    CHECK(std::abs(filtered.vertices[i].z) <= 1e-12 * le);
    if (std::min({p.x, p.y, 14.0 - p.x, 14.0 - p.y}) > safety)
      CHECK(distance(filtered.vertices[i], p) <= 1e-12 * le);
  }
}

TEST_CASE("missing input exits nonzero and writes nothing") {
  TempDir dir;
  const std::string out = dir.file("never.obj");
  const RunResult r = run_cli(dir, "filter " + dir.file("absent.obj") + " " + out +
                                       " --sigma-s 0.1");
  CHECK(r.exit_code == 2);
  CHECK(!exists(out));
}

TEST_CASE("usage errors exit with code 1") {
  TempDir dir;
  const TriMesh mesh = make_icosphere(1);
  const std::string in = dir.file("m.obj");
  save_mesh(mesh, in);
  SUBCASE("negative noise magnitude") {
    const RunResult r = run_cli(dir, "noise " + in + " " + dir.file("o.obj") +
                                         " --mag -1 --seed 3");
    CHECK(r.exit_code == 1);
  }
  SUBCASE("seed is mandatory") {
    const RunResult r = run_cli(dir, "noise " + in + " " + dir.file("o.obj") + " --mag 0.1");
    CHECK(r.exit_code == 1);
  }
  SUBCASE("unknown subcommand") {
    CHECK(run_cli(dir, "frobnicate x y").exit_code == 1);
  }
  SUBCASE("filter without a kernel width") {
    const RunResult r = run_cli(dir, "filter " + in + " " + dir.file("o.obj"));
    CHECK(r.exit_code == 1);
  }
}

TEST_CASE("noise is deterministic per seed") {
  TempDir dir;
  const std::string in = dir.file("m.obj");
  save_mesh(make_icosphere(2), in);
  const std::string a = dir.file("a.obj");
  const std::string b = dir.file("b.obj");
  const std::string c = dir.file("c.obj");
  REQUIRE(run_cli(dir, "noise " + in + " " + a + " --model uniform-normal --mag 0.1 --seed 7").exit_code == 0);
  REQUIRE(run_cli(dir, "noise " + in + " " + b + " --model uniform-normal --mag 0.1 --seed 7").exit_code == 0);
  REQUIRE(run_cli(dir, "noise " + in + " " + c + " --model uniform-normal --mag 0.1 --seed 8").exit_code == 0);
  CHECK(read_text(a) == read_text(b));  // byte-identical
  CHECK(read_text(a) != read_text(c));
}

TEST_CASE("metrics writes the JSON schema") {
  TempDir dir;
  const std::string in = dir.file("m.obj");
  save_mesh(make_icosphere(2), in);
  const std::string report = dir.file("r.json");
  const RunResult r = run_cli(dir, "metrics " + in + " " + in + " --report " + report);
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(read_text(report));
  CHECK(j.at("mean").get<double>() == 0.0);
  CHECK(j.at("max").get<double>() == 0.0);
  CHECK(j.at("rms").get<double>() == 0.0);
  CHECK(j.at("count").get<int>() == make_icosphere(2).vertex_count());
  CHECK(!j.contains("per_vertex"));

  const RunResult rv = run_cli(dir, "metrics " + in + " " + in + " --report " + report +
                                        " --per-vertex");
  REQUIRE(rv.exit_code == 0);
  const nlohmann::json jv = nlohmann::json::parse(read_text(report));
  CHECK(jv.at("per_vertex").size() == jv.at("count").get<std::size_t>());
}

TEST_CASE("metrics writes a colored PLY of the signed distances") {
  TempDir dir;
  const TriMesh mesh = make_icosphere(2);
  TriMesh inflated = mesh;
  for (auto& p : inflated.vertices) p *= 1.05;
  const std::string a = dir.file("noisy.obj");
  const std::string b = dir.file("filtered.obj");
  save_mesh(inflated, a);
  save_mesh(mesh, b);
  const std::string ply = dir.file("colors.ply");
  const RunResult r = run_cli(dir, "metrics " + a + " " + b + " --signed-colors " + ply);
  REQUIRE(r.exit_code == 0);
  std::vector<Rgb> colors;
  const TriMesh colored = load_mesh(ply, MeshFormat::PlyAscii, &colors);
  CHECK(colored.vertex_count() == mesh.vertex_count());
  REQUIRE(colors.size() == static_cast<std::size_t>(mesh.vertex_count()));
  // every query vertex is outside the target: purple-ish (red and blue, no pure green)
  for (const Rgb& c : colors) CHECK(c[2] > c[1]);
}

TEST_CASE("metrics writes a curvature-colored PLY") {
  TempDir dir;
  const std::string in = dir.file("m.obj");
  save_mesh(make_icosphere(2), in);
  const std::string ply = dir.file("curv.ply");
  const RunResult r = run_cli(dir, "metrics " + in + " " + in + " --curvature-colors " + ply);
  REQUIRE(r.exit_code == 0);
  CHECK(exists(ply));
  std::vector<Rgb> colors;
  load_mesh(ply, MeshFormat::PlyAscii, &colors);
  CHECK(!colors.empty());
}

TEST_CASE("surface demo emits a loadable OBJ grid") {
  TempDir dir;
  const std::string out = dir.file("torus.obj");
  const RunResult r = run_cli(dir, "surface-demo --out " + out +
                                       " --grid-major 48 --grid-minor 24 --mu 1.25");
  REQUIRE(r.exit_code == 0);
  const TriMesh mesh = load_mesh(out);
  CHECK(mesh.vertex_count() == 48 * 24);
  validate(mesh);

  SUBCASE("mu = 0 emits the B-spline variant") {
    const std::string out0 = dir.file("torus0.obj");
    CHECK(run_cli(dir, "surface-demo --out " + out0 +
                           " --grid-major 24 --grid-minor 12 --mu 0").exit_code == 0);
    CHECK(exists(out0));
  }
  SUBCASE("zero grid resolution is a usage error") {
    CHECK(run_cli(dir, "surface-demo --out " + out + " --grid-major 0").exit_code == 1);
  }
}

TEST_CASE("filter accepts the full flag set") {
  TempDir dir;
  const std::string in = dir.file("s.obj");
  save_mesh(make_icosphere(2), in);
  const std::string out = dir.file("s_f.obj");
  const RunResult r = run_cli(
      dir, "filter " + in + " " + out +
               " --radius 2 --sigma-s 0.25 --iters 2 --constraint centroid"
               " -m 50 --gamma 500 --eta 0.002 --c-floor 0.001 --threads 2");
  REQUIRE(r.exit_code == 0);
  const TriMesh filtered = load_mesh(out);
  CHECK(filtered.faces == make_icosphere(2).faces);
}

TEST_CASE("filter output is byte-identical across thread counts and runs") {
  TempDir dir;
  const std::string in = dir.file("noisy.obj");
  {
    const TriMesh mesh = make_icosphere(3);
    std::string noisy = dir.file("base.obj");
    save_mesh(mesh, noisy);
    REQUIRE(run_cli(dir, "noise " + noisy + " " + in + " --mag 0.3 --seed 11").exit_code == 0);
  }
  const std::string flags = " --sigma-s 0.25 --iters 3";
  const std::string t1 = dir.file("t1.obj");
  const std::string t1b = dir.file("t1b.obj");
  const std::string t4 = dir.file("t4.obj");
  REQUIRE(run_cli(dir, "filter " + in + " " + t1 + flags + " --threads 1").exit_code == 0);
  REQUIRE(run_cli(dir, "filter " + in + " " + t1b + flags + " --threads 1").exit_code == 0);
  REQUIRE(run_cli(dir, "filter " + in + " " + t4 + flags + " --threads 4").exit_code == 0);
  CHECK(read_text(t1) == read_text(t1b));
  CHECK(read_text(t1) == read_text(t4));
}
