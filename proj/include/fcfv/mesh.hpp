#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fcfv/types.hpp"

namespace fcfv {

struct Element {
    ElementKind kind;
    std::vector<int> nodes;
};

struct BoundaryFace {
    std::vector<int> nodes;
    BoundaryTag tag = BoundaryTag::dirichlet;
};

/// Unstructured mesh of one spatial dimension. Element node orderings follow
/// local_faces(); boundary faces carry the boundary-condition tag.
struct Mesh {
    int dim = 2;
    std::vector<Vec3> nodes;
    std::vector<Element> elements;
    std::vector<BoundaryFace> boundary;

    [[nodiscard]] std::size_t num_nodes() const { return nodes.size(); }
    [[nodiscard]] std::size_t num_elements() const { return elements.size(); }

    /// Throws MeshError on out-of-range indices, wrong node counts or element
    /// kinds that do not match dim.
    void validate() const;

    friend bool operator==(const Mesh&, const Mesh&);
};

bool operator==(const Element& a, const Element& b);
bool operator==(const BoundaryFace& a, const BoundaryFace& b);

enum class FaceKind : std::uint8_t { interior, dirichlet, neumann };

/// (element, local face) pair.
struct FaceSide {
    int element = -1;
    int local = -1;
};

/// Selector for the per-element face index sets.
enum class FaceSet {
    all,            // A_e
    dirichlet,      // D_e
    neumann,        // N_e
    non_dirichlet,  // B_e = A_e \ D_e
    interior,       // M_e
    non_neumann,    // A_e \ N_e
};

/// Deduplicated face list (the mesh skeleton plus the boundary) with
/// element/face incidence.
struct FaceConnectivity {
    /// Node list of each face, ordered as seen from its first incident element.
    std::vector<std::vector<int>> faces;
    std::vector<FaceKind> kind;
    /// Incident element sides; the second entry has element == -1 on boundary faces.
    std::vector<std::array<FaceSide, 2>> face_elements;
    /// Global face index of every local face of every element.
    std::vector<std::vector<int>> element_faces;

    [[nodiscard]] std::size_t num_faces() const { return faces.size(); }
    [[nodiscard]] bool is_boundary(int face) const { return kind[face] != FaceKind::interior; }
    [[nodiscard]] int num_incident(int face) const { return face_elements[face][1].element < 0 ? 1 : 2; }
    [[nodiscard]] std::size_t count(FaceKind k) const;

    /// Local face indices of element e that belong to the requested set.
    [[nodiscard]] std::vector<int> local_set(int e, FaceSet set) const;
    [[nodiscard]] bool in_set(FaceKind k, FaceSet set) const;
};

/// Structured mesh of the unit square/cube with n cells per axis.
/// Simplices and prisms/pyramids come from splitting every quad/hex:
/// 2 triangles per quad (diagonal 0-2), 24 tetrahedra per hex (one per
/// triangle of the 4-way split of every face about its centroid, joined to
/// the cell centroid), 2 prisms per hex (base diagonal 0-2, extruded in z),
/// 6 pyramids per hex (one per face, apex at the cell centroid).
/// All boundary faces are tagged dirichlet.
[[nodiscard]] Mesh generate_cartesian(int dim, int n, ElementKind kind);

/// Faces whose node set appears in exactly one element, in element order.
[[nodiscard]] std::vector<BoundaryFace> find_boundary_faces(const Mesh& mesh, BoundaryTag tag = BoundaryTag::dirichlet);

using BoundarySelector = std::function<BoundaryTag(const Vec3& face_centroid)>;

/// Re-tags every boundary face from the selector evaluated at its vertex mean.
[[nodiscard]] Mesh tag_boundary(Mesh mesh, const BoundarySelector& selector);

/// Selector tagging faces on {x_axis = value} as neumann, other faces dirichlet.
[[nodiscard]] BoundarySelector neumann_on_plane(int axis, double value, double tol = 1e-10);

/// Builds the face list. Faces with one incident element take the tag of the
/// matching mesh.boundary entry, or dirichlet when there is none.
/// Throws MeshError when a face is shared by more than two elements or a
/// boundary entry does not match a face of exactly one element.
[[nodiscard]] FaceConnectivity extract_faces(const Mesh& mesh);

/// All element edges (node pairs, deduplicated) and their minimum length.
[[nodiscard]] double min_edge_length(const Mesh& mesh);

/// Nodes lying on some boundary face.
[[nodiscard]] std::vector<bool> boundary_node_mask(const Mesh& mesh);

/// Moves every interior node by a random vector with independent components
/// uniform in [-fraction*l_min, fraction*l_min]. Uses a 64-bit Mersenne
/// Twister and a fixed 53-bit mantissa mapping, so results are identical on
/// every platform for a given seed.
[[nodiscard]] Mesh perturb(const Mesh& mesh, double fraction, std::uint64_t seed);

/// Splits every quadrilateral into two triangles along the 0-2 diagonal, or
/// along 1-3 when the 0-2 split leaves a triangle with non-positive area.
/// On an unperturbed grid this reproduces generate_cartesian(2, n, triangle).
[[nodiscard]] Mesh split_quadrilaterals(const Mesh& mesh);

/// Root beta > 1 of (h/s) beta^N - beta + 1 - h/s = 0, i.e. the growth factor
/// for which N layers starting at height h/s span the unit interval.
/// Returns 1 for s == 1. Throws MeshError if no root is bracketed.
[[nodiscard]] double solve_stretch_factor(double h, double s, int n_layers);

/// Layer coordinates y_0 = 0, y_k = y_{k-1} + (h/s) beta^{k-1}, scaled to
/// [lo, hi]; the last coordinate is exactly hi.
[[nodiscard]] std::vector<double> stretched_layers(double s, int n_layers, double lo = 0.0, double hi = 1.0);

/// Remaps the vertical (last) coordinate of a mesh with uniform layers so the
/// first layer has height h/s and heights grow geometrically. Nodes between
/// layers (centroid points) are interpolated linearly within their layer.
[[nodiscard]] Mesh stretch(const Mesh& mesh, double s);

/// Centres of n concentric layers of spheres of radius rho packed inside a
/// ball of radius R with a minimum gap delta. Throws MeshError if two
/// spheres would overlap.
[[nodiscard]] std::vector<Vec3> generate_sphere_cluster_centres(int n, double R, double rho, double delta);

}  // namespace fcfv
