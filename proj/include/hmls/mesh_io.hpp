#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hmls/mesh.hpp"

namespace hmls {

enum class MeshFormat { Obj, Off, PlyAscii };

/// Picks the format from the file extension (.obj/.off/.ply).
MeshFormat format_from_path(const std::string& path);

/// Parses a mesh file. Non-triangle polygons are fan-triangulated, vertex
/// order is preserved. Failures carry the offending line number.
/// PLY vertex colors, when present, are returned through `colors`.
TriMesh load_mesh(const std::string& path, MeshFormat format,
                  std::vector<Rgb>* colors = nullptr);
TriMesh load_mesh(const std::string& path);

/// Writes the mesh. Serialization is deterministic: doubles are printed with
/// shortest round-trip precision, so save -> load -> save is byte-identical.
/// Colors are supported by ASCII PLY only.
void save_mesh(const TriMesh& mesh, const std::string& path, MeshFormat format,
               const std::vector<Rgb>* colors = nullptr);
void save_mesh(const TriMesh& mesh, const std::string& path);

}  // namespace hmls
