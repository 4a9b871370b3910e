#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>

#include "fcfv/mesh.hpp"

namespace fcfv {

/// Native format:
///   {"dim": 2,
///    "nodes": [[x, y], ...],
///    "elements": [{"kind": "triangle", "nodes": [0, 1, 2]}, ...],
///    "boundary": [{"nodes": [0, 1], "tag": "dirichlet"}, ...]}
/// Indices are 0-based. Coordinates are written with round-trip precision.
[[nodiscard]] Mesh read_mesh_json(std::istream& in);
void write_mesh_json(const Mesh& mesh, std::ostream& out);

/// Gmsh physical tag -> boundary tag.
using GmshTagMap = std::map<int, BoundaryTag>;

/// Gmsh 2.2 ASCII reader ($Nodes and $Elements only). Elements of the top
/// dimension become mesh elements, one dimension lower become boundary faces
/// tagged through `tags` (unmapped tags default to dirichlet). Elements with
/// negative orientation are reordered.
[[nodiscard]] Mesh read_gmsh(std::istream& in, const GmshTagMap& tags = {});

/// Dispatches on the extension: ".msh" -> Gmsh, anything else -> JSON.
[[nodiscard]] Mesh read_mesh(const std::filesystem::path& path, const GmshTagMap& tags = {});
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace fcfv
