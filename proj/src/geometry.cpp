#include "fcfv/geometry.hpp"

#include <algorithm>
#include <string>

namespace fcfv {

namespace {

const Vec3& node(const Mesh& mesh, int v) { return mesh.nodes[static_cast<std::size_t>(v)]; }

Vec3 mean_of(const Mesh& mesh, const std::vector<int>& nodes)
{
    Vec3 c{};
    for (int v : nodes) c += node(mesh, v);
    return (1.0 / static_cast<double>(nodes.size())) * c;
}

bool is_simplex(ElementKind k) { return k == ElementKind::triangle || k == ElementKind::tetrahedron; }

}  // namespace

double simplex_volume(int dim, const std::array<Vec3, 4>& v)
{
    const Vec3 a = v[1] - v[0];
    const Vec3 b = v[2] - v[0];
    if (dim == 2) return 0.5 * (a[0] * b[1] - a[1] * b[0]);
    return dot(a, cross(b, v[3] - v[0])) / 6.0;
}

std::vector<Simplex> simplex_decomposition(const Mesh& mesh, int element)
{
    const auto& el = mesh.elements[static_cast<std::size_t>(element)];
    const int dim = mesh.dim;
    std::vector<Simplex> out;
    auto push = [&](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
        Simplex s;
        s.vertices = {a, b, c, d};
        s.volume = simplex_volume(dim, s.vertices);
        out.push_back(s);
    };

    if (is_simplex(el.kind)) {
        const Vec3 zero{};
        push(node(mesh, el.nodes[0]), node(mesh, el.nodes[1]), node(mesh, el.nodes[2]),
             dim == 3 ? node(mesh, el.nodes[3]) : zero);
        return out;
    }

    const Vec3 centre = mean_of(mesh, el.nodes);
    for (const auto& lf : local_faces(el.kind)) {
        std::vector<int> f;
        f.reserve(lf.size());
        for (int i : lf) f.push_back(el.nodes[static_cast<std::size_t>(i)]);
        if (dim == 2) {
            push(centre, node(mesh, f[0]), node(mesh, f[1]), Vec3{});
        } else if (f.size() == 3) {
            push(centre, node(mesh, f[0]), node(mesh, f[1]), node(mesh, f[2]));
        } else {
            const Vec3 m = mean_of(mesh, f);
            for (std::size_t q = 0; q < f.size(); ++q)
                push(centre, node(mesh, f[q]), node(mesh, f[(q + 1) % f.size()]), m);
        }
    }
    return out;
}

Vec3 vector_area(const Mesh& mesh, const std::vector<int>& f)
{
    if (mesh.dim == 2) {
        const Vec3 d = node(mesh, f[1]) - node(mesh, f[0]);
        return {d[1], -d[0], 0.0};
    }
    if (f.size() == 3) return 0.5 * cross(node(mesh, f[1]) - node(mesh, f[0]), node(mesh, f[2]) - node(mesh, f[0]));
    const Vec3 m = mean_of(mesh, f);
    Vec3 a{};
    for (std::size_t q = 0; q < f.size(); ++q)
        a += cross(node(mesh, f[q]) - m, node(mesh, f[(q + 1) % f.size()]) - m);
    return 0.5 * a;
}

double signed_element_volume(const Mesh& mesh, int element)
{
    double v = 0.0;
    for (const auto& s : simplex_decomposition(mesh, element)) v += s.volume;
    return v;
}

std::vector<ElementGeometry> element_geometry(const Mesh& mesh, const FaceConnectivity& conn)
{
    if (conn.element_faces.size() != mesh.elements.size())
        throw GeometryError("element_geometry: connectivity does not match the mesh");
    const double h = characteristic_size(mesh);
    const double min_volume = 1e-14 * (mesh.dim == 2 ? h * h : h * h * h);

    std::vector<ElementGeometry> geom(mesh.elements.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& el = mesh.elements[e];
        auto& g = geom[e];
        Vec3 weighted{};
        for (const auto& s : simplex_decomposition(mesh, static_cast<int>(e))) {
            g.volume += s.volume;
            Vec3 c{};
            const int nv = mesh.dim + 1;
            for (int q = 0; q < nv; ++q) c += s.vertices[static_cast<std::size_t>(q)];
            weighted += (s.volume / nv) * c;
        }
        if (!(g.volume > min_volume))
            throw GeometryError("element " + std::to_string(e) + " (" + std::string(to_string(el.kind)) +
                                ") is degenerate or inverted: volume " + std::to_string(g.volume));
        g.centroid = (1.0 / g.volume) * weighted;

        const auto& lfs = local_faces(el.kind);
        g.faces.resize(lfs.size());
        for (std::size_t j = 0; j < lfs.size(); ++j) {
            std::vector<int> f;
            for (int i : lfs[j]) f.push_back(el.nodes[static_cast<std::size_t>(i)]);
            const Vec3 va = vector_area(mesh, f);
            auto& fg = g.faces[j];
            fg.area = norm(va);
            if (!(fg.area > 0.0))
                throw GeometryError("element " + std::to_string(e) + ": face " + std::to_string(j) + " has zero area");
            fg.normal = (1.0 / fg.area) * va;
            fg.centroid = mean_of(mesh, f);
        }
    }
    return geom;
}

double characteristic_size(const Mesh& mesh)
{
    double h = 0.0;
    for (const auto& el : mesh.elements)
        for (std::size_t a = 0; a < el.nodes.size(); ++a)
            for (std::size_t b = a + 1; b < el.nodes.size(); ++b)
                h = std::max(h, norm(node(mesh, el.nodes[a]) - node(mesh, el.nodes[b])));
    return h;
}

}  // namespace fcfv
