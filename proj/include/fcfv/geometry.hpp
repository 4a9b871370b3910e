#pragma once

#include <vector>

#include "fcfv/mesh.hpp"

namespace fcfv {

struct FaceGeometry {
    double area = 0.0;   // |Gamma_{e,j}|
    Vec3 normal{};       // outward unit normal
    Vec3 centroid{};     // vertex mean
};

struct ElementGeometry {
    double volume = 0.0;  // |Omega_e|
    Vec3 centroid{};      // volume-weighted centroid of the simplex decomposition
    std::vector<FaceGeometry> faces;  // in local face order
};

/// A triangle (2D) or tetrahedron (3D) of an element decomposition.
struct Simplex {
    std::array<Vec3, 4> vertices{};
    double volume = 0.0;  // signed
};

/// Signed measure of a simplex given by its first dim+1 vertices.
[[nodiscard]] double simplex_volume(int dim, const std::array<Vec3, 4>& v);

/// Simplices covering an element: simplices map to themselves, other kinds
/// are split about the vertex mean (2D: one triangle per edge; 3D: one tet
/// per face triangle, quadrilateral faces fanned about their vertex mean).
[[nodiscard]] std::vector<Simplex> simplex_decomposition(const Mesh& mesh, int element);

/// Vector area of a face: the edge vector rotated clockwise in 2D, half the
/// sum of consecutive cross products about the vertex mean in 3D. For planar
/// faces this is |Gamma| n exactly; for warped quadrilaterals it is the
/// quantity whose sum over a closed element vanishes.
[[nodiscard]] Vec3 vector_area(const Mesh& mesh, const std::vector<int>& face_nodes);

[[nodiscard]] double signed_element_volume(const Mesh& mesh, int element);

/// Per-element measures in local face order. Throws GeometryError if an
/// element volume is below 1e-14 h^dim (h = characteristic size).
[[nodiscard]] std::vector<ElementGeometry> element_geometry(const Mesh& mesh, const FaceConnectivity& conn);

/// Maximum over elements of the largest distance between two element nodes.
[[nodiscard]] double characteristic_size(const Mesh& mesh);

}  // namespace fcfv
