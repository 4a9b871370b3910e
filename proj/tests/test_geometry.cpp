#include <cmath>

#include <gtest/gtest.h>

#include "fcfv/geometry.hpp"
#include "test_support.hpp"

using namespace fcfv;

namespace {

const ElementKind all_kinds[] = {ElementKind::triangle,    ElementKind::quadrilateral, ElementKind::tetrahedron,
                                 ElementKind::hexahedron,  ElementKind::prism,         ElementKind::pyramid};

Mesh family(ElementKind k, int n) { return generate_cartesian(element_dim(k), n, k); }

Vec3 closure(const ElementGeometry& g)
{
    Vec3 s{};
    for (const auto& f : g.faces) s += f.area * f.normal;
    return s;
}

}  // namespace

TEST(Geometry, UnitSquare)
{
    const auto m = testing_support::unit_square();
    const auto g = element_geometry(m, extract_faces(m));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g[0].volume, 1.0, 1e-15);
    const Vec3 expected[] = {{0, -1, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}};
    for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(g[0].faces[j].area, 1.0, 1e-15);
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(g[0].faces[j].normal[c], expected[j][c], 1e-15);
    }
    EXPECT_NEAR(g[0].centroid[0], 0.5, 1e-15);
    EXPECT_NEAR(g[0].centroid[1], 0.5, 1e-15);
}

TEST(Geometry, ReferenceTetrahedron)
{
    Mesh m;
    m.dim = 3;
    m.nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.elements = {{ElementKind::tetrahedron, {0, 1, 2, 3}}};
    const auto g = element_geometry(m, extract_faces(m));
    EXPECT_NEAR(g[0].volume, 1.0 / 6.0, 1e-15);
    // local face 0 is (1,2,3), the oblique one
    const double r = 1.0 / std::sqrt(3.0);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(g[0].faces[0].normal[c], r, 1e-15);
    EXPECT_NEAR(g[0].faces[0].area, std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_NEAR(g[0].faces[0].centroid[0], 1.0 / 3.0, 1e-15);
}

TEST(Geometry, UnitNormalsAndClosureOnAllKinds)
{
    for (auto k : all_kinds) {
        const auto m = perturb(family(k, 3), 0.3, 21);
        const auto g = element_geometry(m, extract_faces(m));
        for (const auto& eg : g) {
            EXPECT_GT(eg.volume, 0.0);
            for (const auto& f : eg.faces) {
                EXPECT_GT(f.area, 0.0);
                EXPECT_NEAR(norm(f.normal), 1.0, 1e-12);
            }
            EXPECT_LT(norm(closure(eg)), 1e-12) << to_string(k);
        }
    }
}

TEST(Geometry, PerturbedHexClosure)
{
    auto m = generate_cartesian(3, 1, ElementKind::hexahedron);
    for (auto& x : m.nodes)
        for (auto& c : x) c += 0.15 * std::sin(7.0 * c + x[0]);
    const auto g = element_geometry(m, extract_faces(m));
    EXPECT_LT(norm(closure(g[0])), 1e-12);
}

TEST(Geometry, InteriorFacesSeenFromBothSides)
{
    for (auto k : all_kinds) {
        const auto m = perturb(family(k, 2), 0.25, 3);
        const auto conn = extract_faces(m);
        const auto g = element_geometry(m, conn);
        for (std::size_t f = 0; f < conn.num_faces(); ++f) {
            if (conn.is_boundary(static_cast<int>(f))) continue;
            const auto& a = conn.face_elements[f][0];
            const auto& b = conn.face_elements[f][1];
            const auto& fa = g[a.element].faces[a.local];
            const auto& fb = g[b.element].faces[b.local];
            EXPECT_NEAR(fa.area, fb.area, 1e-12);
            // faces of perturbed hexes and prisms are warped; their vector areas still cancel
            EXPECT_LT(norm(fa.area * fa.normal + fb.area * fb.normal), 1e-12) << to_string(k);
        }
    }
}

TEST(Geometry, PlanarFacesHaveAntiparallelNormals)
{
    for (auto k : all_kinds) {
        const auto m = family(k, 2);
        const auto conn = extract_faces(m);
        const auto g = element_geometry(m, conn);
        for (std::size_t f = 0; f < conn.num_faces(); ++f) {
            if (conn.is_boundary(static_cast<int>(f))) continue;
            const auto& a = conn.face_elements[f][0];
            const auto& b = conn.face_elements[f][1];
            EXPECT_LT(norm(g[a.element].faces[a.local].normal + g[b.element].faces[b.local].normal), 1e-12);
        }
    }
}

TEST(Geometry, TranslationInvariance)
{
    for (auto k : all_kinds) {
        const auto m = perturb(family(k, 2), 0.2, 8);
        auto t = m;
        const Vec3 shift{3.25, -1.5, element_dim(k) == 3 ? 0.75 : 0.0};
        for (auto& x : t.nodes) x = x + shift;
        const auto conn = extract_faces(m);
        const auto g = element_geometry(m, conn);
        const auto gt = element_geometry(t, conn);
        for (std::size_t e = 0; e < g.size(); ++e) {
            EXPECT_NEAR(g[e].volume, gt[e].volume, 1e-12);
            for (std::size_t j = 0; j < g[e].faces.size(); ++j) {
                EXPECT_NEAR(g[e].faces[j].area, gt[e].faces[j].area, 1e-12);
                EXPECT_LT(norm(g[e].faces[j].normal - gt[e].faces[j].normal), 1e-12);
            }
        }
    }
}

TEST(Geometry, HexEqualsItsTetSubdivision)
{
    auto hex = generate_cartesian(3, 1, ElementKind::hexahedron);
    for (auto& x : hex.nodes) x = x + Vec3{0.1 * x[1], 0.05 * x[2] * x[0], 0.2 * x[0] * x[1]};
    double tets = 0.0;
    for (const auto& s : simplex_decomposition(hex, 0)) tets += s.volume;
    EXPECT_EQ(simplex_decomposition(hex, 0).size(), 24u);
    EXPECT_NEAR(element_geometry(hex, extract_faces(hex))[0].volume, tets, 1e-12);
    EXPECT_NEAR(signed_element_volume(hex, 0), tets, 1e-12);
}

TEST(Geometry, DegenerateElementIsNamed)
{
    Mesh m;
    m.dim = 2;
    m.nodes = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
    m.elements = {{ElementKind::triangle, {0, 1, 3}}, {ElementKind::triangle, {0, 1, 2}}};
    try {
        (void)element_geometry(m, extract_faces(m));
        FAIL() << "expected GeometryError";
    } catch (const GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("element 1"), std::string::npos) << e.what();
    }
}

TEST(Geometry, InvertedElementRejected)
{
    Mesh m;
    m.dim = 2;
    m.nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.elements = {{ElementKind::triangle, {0, 2, 1}}};
    EXPECT_THROW((void)element_geometry(m, extract_faces(m)), GeometryError);
}

TEST(CharacteristicSize, Examples)
{
    for (int n : {1, 4, 7}) EXPECT_NEAR(characteristic_size(generate_cartesian(2, n, ElementKind::quadrilateral)), std::sqrt(2.0) / n, 1e-15);
    EXPECT_NEAR(characteristic_size(generate_cartesian(2, 1, ElementKind::triangle)), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(characteristic_size(generate_cartesian(3, 1, ElementKind::hexahedron)), std::sqrt(3.0), 1e-15);
}
