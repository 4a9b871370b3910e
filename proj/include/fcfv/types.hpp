#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fcfv {

/// Spatial point or vector. 2D data keeps the third component at zero.
using Vec3 = std::array<double, 3>;

inline constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline constexpr Vec3& operator+=(Vec3& a, const Vec3& b)
{
    a[0] += b[0];
    a[1] += b[1];
    a[2] += b[2];
    return a;
}

inline constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Row-major dim x dim tensor, stored 3x3 with unused entries zero.
using Tensor3 = std::array<std::array<double, 3>, 3>;

inline constexpr Tensor3 outer(const Vec3& a, const Vec3& b)
{
    Tensor3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = a[i] * b[j];
    return t;
}

/// Row vector times tensor: (n . T)_j = sum_i n_i T_ij.
inline constexpr Vec3 dot(const Vec3& n, const Tensor3& t)
{
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[j] += n[i] * t[i][j];
    return r;
}

enum class ElementKind { triangle, quadrilateral, tetrahedron, hexahedron, prism, pyramid };

enum class BoundaryTag { dirichlet, neumann };

[[nodiscard]] std::string_view to_string(ElementKind kind);
[[nodiscard]] std::string_view to_string(BoundaryTag tag);
[[nodiscard]] ElementKind parse_element_kind(std::string_view name);
[[nodiscard]] BoundaryTag parse_boundary_tag(std::string_view name);

[[nodiscard]] int element_dim(ElementKind kind);
[[nodiscard]] int element_node_count(ElementKind kind);

/// Local faces of an element kind, each listed so that the right-hand rule
/// (counter-clockwise seen from outside) gives the outward normal. In 2D a
/// face is an edge (a, b) of a counter-clockwise polygon.
///
///   triangle      0-1-2 ccw          edges (0,1) (1,2) (2,0)
///   quadrilateral 0-1-2-3 ccw        edges (0,1) (1,2) (2,3) (3,0)
///   tetrahedron   positive volume    faces (1,2,3) (0,3,2) (0,1,3) (0,2,1)
///   hexahedron    0-3 bottom ccw, 4-7 above them
///                 faces (0,3,2,1) (4,5,6,7) (0,1,5,4) (1,2,6,5) (2,3,7,6) (3,0,4,7)
///   prism         0-2 bottom ccw, 3-5 above them
///                 faces (0,2,1) (3,4,5) (0,1,4,3) (1,2,5,4) (2,0,3,5)
///   pyramid       0-3 base ccw seen from the apex side, apex 4
///                 faces (0,3,2,1) (0,1,4) (1,2,4) (2,3,4) (3,0,4)
[[nodiscard]] const std::vector<std::vector<int>>& local_faces(ElementKind kind);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fcfv
