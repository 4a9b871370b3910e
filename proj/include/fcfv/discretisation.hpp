#pragma once

#include <functional>
#include <vector>

#include "fcfv/geometry.hpp"
#include "fcfv/mesh.hpp"

namespace fcfv {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Everything the solvers need from a mesh.
struct Discretisation {
    int dim = 2;
    FaceConnectivity conn;
    std::vector<ElementGeometry> geom;
    std::vector<Vec3> face_centroid;  // vertex mean of every global face
    double h = 0.0;                   // characteristic size
};

[[nodiscard]] Discretisation discretise(const Mesh& mesh);

/// Same stabilisation on every face.
[[nodiscard]] std::vector<double> uniform_tau(const FaceConnectivity& conn, double tau);

/// Unknown faces of the global problem, in ascending face index within each
/// group: interior faces first, then (if included) Neumann faces.
struct TraceNumbering {
    std::vector<int> face_to_dof;  // -1 for eliminated faces
    std::vector<int> dof_to_face;

    [[nodiscard]] int size() const { return static_cast<int>(dof_to_face.size()); }
    [[nodiscard]] int dof(int face) const { return face_to_dof[static_cast<std::size_t>(face)]; }
};

[[nodiscard]] TraceNumbering number_traces(const FaceConnectivity& conn, bool include_neumann);

}  // namespace fcfv
