#include "hmls/mesh_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string_view>

#include "hmls/errors.hpp"

namespace hmls {

namespace {

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw IoError(path + ":" + std::to_string(line) + ": " + msg);
}

struct LineReader {
  std::string path;
  std::vector<std::string> lines;
  std::size_t next = 0;

  explicit LineReader(const std::string& p) : path(p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }

  // splits the next non-empty, non-comment line into whitespace tokens
  bool next_tokens(std::vector<std::string_view>& out, std::size_t* lineno,
                   char comment = '#') {
    while (next < lines.size()) {
      std::string_view s = lines[next];
      ++next;
      const auto hash = s.find(comment);
      if (hash != std::string_view::npos) s = s.substr(0, hash);
      out.clear();
      std::size_t i = 0;
      while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
      }
      if (!out.empty()) {
        if (lineno) *lineno = next;  // 1-based
        return true;
      }
    }
    return false;
  }
};

double parse_double(std::string_view tok, const std::string& path, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(path, line, "expected a number, got '" + std::string(tok) + "'");
  return v;
}

long parse_int(std::string_view tok, const std::string& path, std::size_t line) {
  long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(path, line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

void fan_triangulate(TriMesh& mesh, const std::vector<int>& poly) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k)
    mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
}

// ---- OBJ ----

TriMesh load_obj(const std::string& path) {
  LineReader reader(path);
  TriMesh mesh;
  std::vector<std::string_view> tok;
  std::size_t line = 0;
  struct PendingFace { std::vector<int> poly; std::size_t line; };
  std::vector<PendingFace> pending;
  while (reader.next_tokens(tok, &line)) {
    if (tok[0] == "v") {
      if (tok.size() < 4) fail(path, line, "vertex record needs 3 coordinates");
      mesh.vertices.push_back({parse_double(tok[1], path, line),
                               parse_double(tok[2], path, line),
                               parse_double(tok[3], path, line)});
    } else if (tok[0] == "f") {
      if (tok.size() < 4) fail(path, line, "face record needs at least 3 vertices");
      PendingFace face;
      face.line = line;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        std::string_view ref = tok[k];
        const auto slash = ref.find('/');
        if (slash != std::string_view::npos) ref = ref.substr(0, slash);
        const long idx = parse_int(ref, path, line);
        if (idx == 0) fail(path, line, "OBJ face index 0 (indices are 1-based)");
        // negative indices count back from the vertices declared so far
        const long resolved = idx > 0 ? idx - 1 : static_cast<long>(mesh.vertices.size()) + idx;
        face.poly.push_back(static_cast<int>(resolved));
      }
      pending.push_back(std::move(face));
    }
    // vt/vn/vp/usemtl/mtllib/o/g/s records are ignored
  }
  for (const auto& face : pending) {
    for (int idx : face.poly)
      if (idx < 0 || idx >= mesh.vertex_count())
        fail(path, face.line, "face index out of range");
    fan_triangulate(mesh, face.poly);
  }
  return mesh;
}

// ---- OFF ----

TriMesh load_off(const std::string& path) {
  LineReader reader(path);
  std::vector<std::string_view> tok;
  std::size_t line = 0;
  if (!reader.next_tokens(tok, &line)) fail(path, 1, "empty file");
  if (tok[0] != "OFF") fail(path, line, "missing OFF header");
  tok.erase(tok.begin());
  if (tok.empty() && !reader.next_tokens(tok, &line)) fail(path, line, "missing element counts");
  if (tok.size() < 3) fail(path, line, "expected 'nv nf ne' counts");
  const long nv = parse_int(tok[0], path, line);
  const long nf = parse_int(tok[1], path, line);
  if (nv < 0 || nf < 0) fail(path, line, "negative element count");
  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!reader.next_tokens(tok, &line)) fail(path, reader.lines.size(), "unexpected end of file in vertex list");
    if (tok.size() < 3) fail(path, line, "vertex line needs 3 coordinates");
    mesh.vertices.push_back({parse_double(tok[0], path, line),
                             parse_double(tok[1], path, line),
                             parse_double(tok[2], path, line)});
  }
  for (long f = 0; f < nf; ++f) {
    if (!reader.next_tokens(tok, &line)) fail(path, reader.lines.size(), "unexpected end of file in face list");
    const long k = parse_int(tok[0], path, line);
    if (k < 3) fail(path, line, "face with fewer than 3 vertices");
    if (static_cast<long>(tok.size()) < 1 + k) fail(path, line, "face line shorter than its vertex count");
    std::vector<int> poly;
    for (long j = 0; j < k; ++j) {
      const long idx = parse_int(tok[1 + j], path, line);
      if (idx < 0 || idx >= nv) fail(path, line, "face index out of range");
      poly.push_back(static_cast<int>(idx));
    }
    fan_triangulate(mesh, poly);
  }
  return mesh;
}

// ---- ASCII PLY ----

struct PlyProperty {
  std::string name;
  std::string type;
  bool is_list = false;
};

struct PlyElement {
  std::string name;
  long count = 0;
  std::vector<PlyProperty> properties;
};

TriMesh load_ply(const std::string& path, std::vector<Rgb>* colors) {
  LineReader reader(path);
  std::vector<std::string_view> tok;
  std::size_t line = 0;
  if (!reader.next_tokens(tok, &line) || tok[0] != "ply") fail(path, line ? line : 1, "missing ply magic");
  std::vector<PlyElement> elements;
  bool saw_format = false;
  while (true) {
    if (!reader.next_tokens(tok, &line)) fail(path, reader.lines.size(), "unexpected end of header");
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii")
        fail(path, line, "only ASCII PLY is supported");
      saw_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() < 3) fail(path, line, "malformed element line");
      elements.push_back({std::string(tok[1]), parse_int(tok[2], path, line), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) fail(path, line, "property before any element");
      PlyProperty prop;
      if (tok.size() >= 5 && tok[1] == "list") {
        prop.is_list = true;
        prop.type = std::string(tok[3]);
        prop.name = std::string(tok[4]);
      } else if (tok.size() >= 3) {
        prop.type = std::string(tok[1]);
        prop.name = std::string(tok[2]);
      } else {
        fail(path, line, "malformed property line");
      }
      elements.back().properties.push_back(std::move(prop));
    } else if (tok[0] == "end_header") {
      break;
    } else {
      fail(path, line, "unrecognized header line '" + std::string(tok[0]) + "'");
    }
  }
  if (!saw_format) fail(path, line, "missing format line");

  TriMesh mesh;
  bool has_colors = false;
  for (const auto& element : elements) {
    if (element.name == "vertex") {
      int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
      for (std::size_t p = 0; p < element.properties.size(); ++p) {
        const auto& prop = element.properties[p];
        if (prop.is_list) fail(path, line, "list property on vertex element is not supported");
        if (prop.name == "x") ix = static_cast<int>(p);
        if (prop.name == "y") iy = static_cast<int>(p);
        if (prop.name == "z") iz = static_cast<int>(p);
        if (prop.name == "red") ir = static_cast<int>(p);
        if (prop.name == "green") ig = static_cast<int>(p);
        if (prop.name == "blue") ib = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0) fail(path, line, "vertex element lacks x/y/z");
      has_colors = ir >= 0 && ig >= 0 && ib >= 0;
      mesh.vertices.reserve(element.count);
      if (colors && has_colors) colors->reserve(element.count);
      for (long i = 0; i < element.count; ++i) {
        if (!reader.next_tokens(tok, &line)) fail(path, reader.lines.size(), "unexpected end of vertex data");
        if (tok.size() < element.properties.size()) fail(path, line, "vertex line shorter than its property list");
        mesh.vertices.push_back({parse_double(tok[ix], path, line),
                                 parse_double(tok[iy], path, line),
                                 parse_double(tok[iz], path, line)});
        if (colors && has_colors) {
          auto channel = [&](int p) {
            const long v = parse_int(tok[p], path, line);
            if (v < 0 || v > 255) fail(path, line, "color channel out of range");
            return static_cast<unsigned char>(v);
          };
          colors->push_back({channel(ir), channel(ig), channel(ib)});
        }
      }
    } else if (element.name == "face") {
      int list_at = -1;
      for (std::size_t p = 0; p < element.properties.size(); ++p) {
        const auto& prop = element.properties[p];
        if (prop.is_list && (prop.name == "vertex_indices" || prop.name == "vertex_index"))
          list_at = static_cast<int>(p);
      }
      if (list_at != 0) fail(path, line, "face element must start with a vertex_indices list");
      for (long f = 0; f < element.count; ++f) {
        if (!reader.next_tokens(tok, &line)) fail(path, reader.lines.size(), "unexpected end of face data");
        const long k = parse_int(tok[0], path, line);
        if (k < 3) fail(path, line, "face with fewer than 3 vertices");
        if (static_cast<long>(tok.size()) < 1 + k) fail(path, line, "face line shorter than its vertex count");
        std::vector<int> poly;
        for (long j = 0; j < k; ++j) {
          const long idx = parse_int(tok[1 + j], path, line);
          if (idx < 0 || idx >= mesh.vertex_count()) fail(path, line, "face index out of range");
          poly.push_back(static_cast<int>(idx));
        }
        fan_triangulate(mesh, poly);
      }
    } else {
      // unknown element: skip its data lines
      for (long i = 0; i < element.count; ++i)
        if (!reader.next_tokens(tok, &line)) fail(path, reader.lines.size(), "unexpected end of file");
    }
  }
  return mesh;
}

// ---- writers ----

void append_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_int(std::string& out, long v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path);
}

void append_vertex(std::string& out, const Vec3& p, char sep = ' ') {
  append_double(out, p.x);
  out.push_back(sep);
  append_double(out, p.y);
  out.push_back(sep);
  append_double(out, p.z);
}

std::string write_obj(const TriMesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 32 + mesh.faces.size() * 16);
  for (const auto& p : mesh.vertices) {
    out += "v ";
    append_vertex(out, p);
    out.push_back('\n');
  }
  for (const auto& t : mesh.faces) {
    out += "f ";
    append_int(out, t[0] + 1);
    out.push_back(' ');
    append_int(out, t[1] + 1);
    out.push_back(' ');
    append_int(out, t[2] + 1);
    out.push_back('\n');
  }
  return out;
}

std::string write_off(const TriMesh& mesh) {
  std::string out = "OFF\n";
  append_int(out, mesh.vertex_count());
  out.push_back(' ');
  append_int(out, mesh.face_count());
  out += " 0\n";
  for (const auto& p : mesh.vertices) {
    append_vertex(out, p);
    out.push_back('\n');
  }
  for (const auto& t : mesh.faces) {
    out += "3 ";
    append_int(out, t[0]);
    out.push_back(' ');
    append_int(out, t[1]);
    out.push_back(' ');
    append_int(out, t[2]);
    out.push_back('\n');
  }
  return out;
}

std::string write_ply(const TriMesh& mesh, const std::vector<Rgb>* colors) {
  std::string out = "ply\nformat ascii 1.0\nelement vertex ";
  append_int(out, mesh.vertex_count());
  out += "\nproperty double x\nproperty double y\nproperty double z\n";
  if (colors)
    out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "element face ";
  append_int(out, mesh.face_count());
  out += "\nproperty list uchar int vertex_indices\nend_header\n";
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    append_vertex(out, mesh.vertices[i]);
    if (colors) {
      const auto& c = (*colors)[i];
      for (int k = 0; k < 3; ++k) {
        out.push_back(' ');
        append_int(out, c[k]);
      }
    }
    out.push_back('\n');
  }
  for (const auto& t : mesh.faces) {
    out += "3 ";
    append_int(out, t[0]);
    out.push_back(' ');
    append_int(out, t[1]);
    out.push_back(' ');
    append_int(out, t[2]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace

MeshFormat format_from_path(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "obj") return MeshFormat::Obj;
  if (ext == "off") return MeshFormat::Off;
  if (ext == "ply") return MeshFormat::PlyAscii;
  throw IoError("cannot infer mesh format from '" + path + "' (expected .obj/.off/.ply)");
}

TriMesh load_mesh(const std::string& path, MeshFormat format, std::vector<Rgb>* colors) {
  if (colors) colors->clear();
  TriMesh mesh;
  switch (format) {
    case MeshFormat::Obj: mesh = load_obj(path); break;
    case MeshFormat::Off: mesh = load_off(path); break;
    case MeshFormat::PlyAscii: mesh = load_ply(path, colors); break;
  }
  if (mesh.vertices.empty()) throw IoError(path + ": empty mesh");
  validate(mesh);
  return mesh;
}

TriMesh load_mesh(const std::string& path) {
  return load_mesh(path, format_from_path(path));
}

void save_mesh(const TriMesh& mesh, const std::string& path, MeshFormat format,
               const std::vector<Rgb>* colors) {
  if (colors && format != MeshFormat::PlyAscii)
    throw ParamError("per-vertex colors are only supported by ASCII PLY output");
  if (colors && colors->size() != mesh.vertices.size())
    throw ParamError("color array size does not match vertex count");
  switch (format) {
    case MeshFormat::Obj: write_file(path, write_obj(mesh)); break;
    case MeshFormat::Off: write_file(path, write_off(mesh)); break;
    case MeshFormat::PlyAscii: write_file(path, write_ply(mesh, colors)); break;
  }
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
  save_mesh(mesh, path, format_from_path(path));
}

}  // namespace hmls
