#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hmls/errors.hpp"
#include "hmls/mesh.hpp"
#include "hmls/mesh_io.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace hmls;
using namespace hmls::testing;

TEST_CASE("average edge length: equilateral triangle of side 2") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {2, 0, 0}, {1, std::sqrt(3.0), 0}};
  m.faces = {{0, 1, 2}};
  CHECK(average_edge_length(m) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("average edge length: 3-4-5 right triangle") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {3, 0, 0}, {0, 4, 0}};
  m.faces = {{0, 1, 2}};
  CHECK(average_edge_length(m) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("average edge length: shared edges counted once") {
  // two triangles sharing an edge: 5 unique edges, not 6
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.faces = {{0, 1, 2}, {1, 3, 2}};
  CHECK(unique_edges(m).size() == 5);
}

TEST_CASE("average edge length: icosphere matches brute-force edge summation") {
  const TriMesh m = make_icosphere(3);
  double sum = 0.0;
  std::size_t count = 0;
  // independent enumeration from scratch
  std::vector<std::pair<int, int>> seen;
  for (const auto& t : m.faces)
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(t[k], t[(k + 1) % 3]);
      const int b = std::max(t[k], t[(k + 1) % 3]);
      seen.emplace_back(a, b);
    }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (const auto& [a, b] : seen) {
    sum += distance(m.vertices[a], m.vertices[b]);
    ++count;
  }
  CHECK(average_edge_length(m) == doctest::Approx(sum / count).epsilon(1e-12));
}

TEST_CASE("average edge length: mesh without edges throws") {
  TriMesh m;
  m.vertices = {{0, 0, 0}};
  CHECK_THROWS_AS(average_edge_length(m), MeshError);
}

TEST_CASE("validate rejects bad faces") {
  TriMesh m = make_single_triangle();
  SUBCASE("out of range index") {
    m.faces.push_back({0, 1, 7});
    CHECK_THROWS_AS(validate(m), MeshError);
  }
  SUBCASE("repeated index within a face") {
    m.faces.push_back({0, 1, 1});
    CHECK_THROWS_AS(validate(m), MeshError);
  }
}

TEST_CASE("adjacency: single triangle") {
  const Adjacency adj = build_adjacency(make_single_triangle());
  for (int i = 0; i < 3; ++i) {
    CHECK(adj.vertex_ring[i].size() == 2);
    CHECK(adj.vertex_faces[i].size() == 1);
  }
}

TEST_CASE("adjacency: closed tetrahedron") {
  const Adjacency adj = build_adjacency(make_tetrahedron());
  for (int i = 0; i < 4; ++i) {
    CHECK(adj.vertex_ring[i].size() == 3);
    CHECK(adj.vertex_faces[i].size() == 3);
  }
}

TEST_CASE("adjacency: hub of a 6-fan") {
  const Adjacency adj = build_adjacency(make_triangle_fan(6));
  CHECK(adj.vertex_ring[0].size() == 6);
  CHECK(adj.vertex_faces[0].size() == 6);
}

TEST_CASE("adjacency is invariant under face reordering") {
  const TriMesh m = make_icosphere(1);
  TriMesh shuffled = m;
  std::reverse(shuffled.faces.begin(), shuffled.faces.end());
  const Adjacency a = build_adjacency(m);
  const Adjacency b = build_adjacency(shuffled);
  CHECK(a.vertex_ring == b.vertex_ring);
  // face ids differ after reordering, but the incident COUNTS must match
  for (int i = 0; i < m.vertex_count(); ++i)
    CHECK(a.vertex_faces[i].size() == b.vertex_faces[i].size());
}

TEST_CASE("edge set is symmetric by construction") {
  const TriMesh m = make_icosphere(2);
  const auto edges = unique_edges(m);
  for (const auto& e : edges) CHECK(e[0] < e[1]);
  // no duplicates
  auto copy = edges;
  std::sort(copy.begin(), copy.end());
  CHECK(std::adjacent_find(copy.begin(), copy.end()) == copy.end());
}

TEST_CASE("OFF: minimal valid file") {
  TempDir dir;
  const std::string path = dir.file("tri.off");
  write_text(path, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  const TriMesh m = load_mesh(path);
  CHECK(m.vertex_count() == 3);
  CHECK(m.face_count() == 1);
}

TEST_CASE("OBJ: quad face splits into two triangles") {
  TempDir dir;
  const std::string path = dir.file("quad.obj");
  write_text(path, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  const TriMesh m = load_mesh(path);
  CHECK(m.face_count() == 2);
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.faces[1] == std::array<int, 3>{0, 2, 3});
}

TEST_CASE("OBJ: face index 0 is rejected") {
  TempDir dir;
  const std::string path = dir.file("bad.obj");
  write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n");
  CHECK_THROWS_AS(load_mesh(path), IoError);
}

TEST_CASE("OBJ: negative indices resolve relative to the running count") {
  TempDir dir;
  const std::string path = dir.file("rel.obj");
  write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
  const TriMesh m = load_mesh(path);
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("OBJ: texture and normal records are ignored") {
  TempDir dir;
  const std::string path = dir.file("tex.obj");
  write_text(path,
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n"
             "f 1/1/1 2/1/1 3/1/1\n");
  const TriMesh m = load_mesh(path);
  CHECK(m.face_count() == 1);
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("parse failures carry the line number") {
  TempDir dir;
  const std::string path = dir.file("bad.off");
  write_text(path, "OFF\n3 1 0\n0 0 0\n1 0 nope\n0 1 0\n3 0 1 2\n");
  try {
    load_mesh(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":4:") != std::string::npos);
  }
}

TEST_CASE("out-of-range face index is rejected per format") {
  TempDir dir;
  SUBCASE("off") {
    const std::string path = dir.file("range.off");
    write_text(path, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n");
    CHECK_THROWS_AS(load_mesh(path), IoError);
  }
  SUBCASE("obj") {
    const std::string path = dir.file("range.obj");
    write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    CHECK_THROWS_AS(load_mesh(path), IoError);
  }
}

TEST_CASE("empty mesh is rejected") {
  TempDir dir;
  const std::string path = dir.file("empty.off");
  write_text(path, "OFF\n0 0 0\n");
  CHECK_THROWS_AS(load_mesh(path), IoError);
}

TEST_CASE("missing file is rejected") {
  CHECK_THROWS_AS(load_mesh("/nonexistent/path/mesh.obj"), IoError);
}

static void check_same_mesh(const TriMesh& a, const TriMesh& b, double tol) {
  REQUIRE(a.vertex_count() == b.vertex_count());
  REQUIRE(a.faces == b.faces);
  for (int i = 0; i < a.vertex_count(); ++i) {
    const double scale = std::max(1.0, norm(a.vertices[i]));
    CHECK(distance(a.vertices[i], b.vertices[i]) <= tol * scale);
  }
}

TEST_CASE("round trip: unit tetrahedron through every format") {
  TempDir dir;
  TriMesh m = make_tetrahedron();
  // irrational coordinates exercise the shortest round-trip formatting
  for (auto& p : m.vertices) p *= std::sqrt(2.0) / 3.0;
  for (const char* name : {"t.obj", "t.off", "t.ply"}) {
    const std::string path = dir.file(name);
    save_mesh(m, path);
    check_same_mesh(m, load_mesh(path), 0.0);  // exact
  }
}

TEST_CASE("save -> load -> save is byte-identical") {
  TempDir dir;
  const TriMesh m = make_icosphere(2, 0.7312);
  for (const char* name : {"s.obj", "s.off", "s.ply"}) {
    const std::string first = dir.file(std::string("a_") + name);
    const std::string second = dir.file(std::string("b_") + name);
    save_mesh(m, first);
    save_mesh(load_mesh(first), second);
    CHECK(read_text(first) == read_text(second));
  }
}

TEST_CASE("round trip: 35k-vertex mesh keeps its connectivity hash") {
  TempDir dir;
  const TriMesh m = make_icosphere(6);  // 40962 vertices
  REQUIRE(m.vertex_count() >= 35000);
  const std::string path = dir.file("big.obj");
  save_mesh(m, path);
  CHECK(connectivity_hash(load_mesh(path)) == connectivity_hash(m));
}

TEST_CASE("colors: rejected on formats without color support") {
  TempDir dir;
  const TriMesh m = make_single_triangle();
  const std::vector<Rgb> colors(3, Rgb{255, 0, 0});
  CHECK_THROWS_AS(save_mesh(m, dir.file("c.off"), MeshFormat::Off, &colors), ParamError);
  CHECK_THROWS_AS(save_mesh(m, dir.file("c.obj"), MeshFormat::Obj, &colors), ParamError);
}

TEST_CASE("colors: PLY writes and reads per-vertex RGB") {
  TempDir dir;
  const TriMesh m = make_tetrahedron();
  const std::vector<Rgb> colors = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {250, 251, 252}};
  const std::string path = dir.file("c.ply");
  save_mesh(m, path, MeshFormat::PlyAscii, &colors);
  std::vector<Rgb> loaded;
  const TriMesh back = load_mesh(path, MeshFormat::PlyAscii, &loaded);
  check_same_mesh(m, back, 0.0);
  CHECK(loaded == colors);
}

TEST_CASE("colors: size mismatch is rejected") {
  TempDir dir;
  const TriMesh m = make_tetrahedron();
  const std::vector<Rgb> colors(2, Rgb{0, 0, 0});
  CHECK_THROWS_AS(save_mesh(m, dir.file("c.ply"), MeshFormat::PlyAscii, &colors),
                  ParamError);
}

TEST_CASE("OFF: counts may share the header line") {
  TempDir dir;
  const std::string path = dir.file("inline.off");
  write_text(path, "OFF 3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  const TriMesh m = load_mesh(path);
  CHECK(m.vertex_count() == 3);
  CHECK(m.face_count() == 1);
}

TEST_CASE("PLY: extra vertex properties are skipped positionally") {
  TempDir dir;
  const std::string path = dir.file("extra.ply");
  write_text(path,
             "ply\nformat ascii 1.0\n"
             "element vertex 3\n"
             "property float nx\nproperty float x\nproperty float y\n"
             "property float z\nproperty float quality\n"
             "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
             "9 0 0 0 0.5\n9 1 0 0 0.5\n9 0 1 0 0.5\n"
             "3 0 1 2\n");
  const TriMesh m = load_mesh(path);
  CHECK(m.vertex_count() == 3);
  CHECK(m.vertices[1] == Vec3{1, 0, 0});
}

TEST_CASE("binary PLY is rejected") {
  TempDir dir;
  const std::string path = dir.file("bin.ply");
  write_text(path, "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n");
  CHECK_THROWS_AS(load_mesh(path), IoError);
}

TEST_CASE("connectivity hash distinguishes different connectivity") {
  CHECK(connectivity_hash(make_tetrahedron()) != connectivity_hash(make_single_triangle()));
}

TEST_CASE("unwritable path is rejected") {
  CHECK_THROWS_AS(save_mesh(make_single_triangle(), "/nonexistent/dir/out.obj"), IoError);
}
