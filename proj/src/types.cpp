#include "fcfv/types.hpp"

#include <string>

namespace fcfv {

std::string_view to_string(ElementKind kind)
{
    switch (kind) {
        case ElementKind::triangle: return "triangle";
        case ElementKind::quadrilateral: return "quadrilateral";
        case ElementKind::tetrahedron: return "tetrahedron";
        case ElementKind::hexahedron: return "hexahedron";
        case ElementKind::prism: return "prism";
        case ElementKind::pyramid: return "pyramid";
    }
    return "unknown";
}

std::string_view to_string(BoundaryTag tag)
{
    return tag == BoundaryTag::dirichlet ? "dirichlet" : "neumann";
}

ElementKind parse_element_kind(std::string_view name)
{
    if (name == "triangle" || name == "tri") return ElementKind::triangle;
    if (name == "quadrilateral" || name == "quad") return ElementKind::quadrilateral;
    if (name == "tetrahedron" || name == "tet") return ElementKind::tetrahedron;
    if (name == "hexahedron" || name == "hex") return ElementKind::hexahedron;
    if (name == "prism" || name == "wedge") return ElementKind::prism;
    if (name == "pyramid" || name == "pyr") return ElementKind::pyramid;
    throw ParseError("unknown element kind '" + std::string(name) + "'");
}

BoundaryTag parse_boundary_tag(std::string_view name)
{
    if (name == "dirichlet") return BoundaryTag::dirichlet;
    if (name == "neumann") return BoundaryTag::neumann;
    throw ParseError("unknown boundary tag '" + std::string(name) + "'");
}

int element_dim(ElementKind kind)
{
    return (kind == ElementKind::triangle || kind == ElementKind::quadrilateral) ? 2 : 3;
}

int element_node_count(ElementKind kind)
{
    switch (kind) {
        case ElementKind::triangle: return 3;
        case ElementKind::quadrilateral: return 4;
        case ElementKind::tetrahedron: return 4;
        case ElementKind::hexahedron: return 8;
        case ElementKind::prism: return 6;
        case ElementKind::pyramid: return 5;
    }
    return 0;
}

const std::vector<std::vector<int>>& local_faces(ElementKind kind)
{
    static const std::vector<std::vector<int>> tri{{0, 1}, {1, 2}, {2, 0}};
    static const std::vector<std::vector<int>> quad{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    static const std::vector<std::vector<int>> tet{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    static const std::vector<std::vector<int>> hex{{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                                   {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    static const std::vector<std::vector<int>> prism{{0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
    static const std::vector<std::vector<int>> pyramid{{0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    switch (kind) {
        case ElementKind::triangle: return tri;
        case ElementKind::quadrilateral: return quad;
        case ElementKind::tetrahedron: return tet;
        case ElementKind::hexahedron: return hex;
        case ElementKind::prism: return prism;
        case ElementKind::pyramid: return pyramid;
    }
    return tri;
}

}  // namespace fcfv
