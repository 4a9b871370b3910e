#include "fcfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

namespace fcfv {

namespace {

using FaceKey = std::array<int, 4>;

FaceKey make_key(const std::vector<int>& nodes)
{
    FaceKey key{-1, -1, -1, -1};
    std::copy(nodes.begin(), nodes.end(), key.begin());
    std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(nodes.size()));
    return key;
}

struct FaceKeyHash {
    std::size_t operator()(const FaceKey& k) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (int v : k) {
            h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
            h *= 1099511628211ull;
        }
        return h;
    }
};

std::vector<int> element_face_nodes(const Element& el, const std::vector<int>& local)
{
    std::vector<int> out;
    out.reserve(local.size());
    for (int i : local) out.push_back(el.nodes[static_cast<std::size_t>(i)]);
    return out;
}

Vec3 vertex_mean(const Mesh& mesh, const std::vector<int>& nodes)
{
    Vec3 c{};
    for (int v : nodes) c += mesh.nodes[static_cast<std::size_t>(v)];
    return (1.0 / static_cast<double>(nodes.size())) * c;
}

}  // namespace

bool operator==(const Element& a, const Element& b) { return a.kind == b.kind && a.nodes == b.nodes; }
bool operator==(const BoundaryFace& a, const BoundaryFace& b) { return a.tag == b.tag && a.nodes == b.nodes; }
bool operator==(const Mesh& a, const Mesh& b)
{
    return a.dim == b.dim && a.nodes == b.nodes && a.elements == b.elements && a.boundary == b.boundary;
}

void Mesh::validate() const
{
    if (dim != 2 && dim != 3) throw MeshError("mesh dimension must be 2 or 3, got " + std::to_string(dim));
    const auto n = static_cast<int>(nodes.size());
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto& el = elements[e];
        if (element_dim(el.kind) != dim)
            throw MeshError("element " + std::to_string(e) + ": kind " + std::string(to_string(el.kind)) +
                            " does not match mesh dimension " + std::to_string(dim));
        if (static_cast<int>(el.nodes.size()) != element_node_count(el.kind))
            throw MeshError("element " + std::to_string(e) + ": expected " +
                            std::to_string(element_node_count(el.kind)) + " nodes, got " +
                            std::to_string(el.nodes.size()));
        for (int v : el.nodes)
            if (v < 0 || v >= n)
                throw MeshError("element " + std::to_string(e) + ": node index " + std::to_string(v) +
                                " out of range [0, " + std::to_string(n) + ")");
    }
    for (std::size_t b = 0; b < boundary.size(); ++b) {
        const auto& bf = boundary[b];
        const std::size_t want = dim == 2 ? 2 : 3;
        if (bf.nodes.size() < want || bf.nodes.size() > 4 || (dim == 2 && bf.nodes.size() != 2))
            throw MeshError("boundary face " + std::to_string(b) + ": bad node count " +
                            std::to_string(bf.nodes.size()));
        for (int v : bf.nodes)
            if (v < 0 || v >= n)
                throw MeshError("boundary face " + std::to_string(b) + ": node index " + std::to_string(v) +
                                " out of range");
    }
}

std::size_t FaceConnectivity::count(FaceKind k) const
{
    return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), k));
}

bool FaceConnectivity::in_set(FaceKind k, FaceSet set) const
{
    switch (set) {
        case FaceSet::all: return true;
        case FaceSet::dirichlet: return k == FaceKind::dirichlet;
        case FaceSet::neumann: return k == FaceKind::neumann;
        case FaceSet::non_dirichlet: return k != FaceKind::dirichlet;
        case FaceSet::interior: return k == FaceKind::interior;
        case FaceSet::non_neumann: return k != FaceKind::neumann;
    }
    return false;
}

std::vector<int> FaceConnectivity::local_set(int e, FaceSet set) const
{
    std::vector<int> out;
    const auto& ef = element_faces[static_cast<std::size_t>(e)];
    for (std::size_t j = 0; j < ef.size(); ++j)
        if (in_set(kind[static_cast<std::size_t>(ef[j])], set)) out.push_back(static_cast<int>(j));
    return out;
}

std::vector<BoundaryFace> find_boundary_faces(const Mesh& mesh, BoundaryTag tag)
{
    std::unordered_map<FaceKey, std::pair<int, int>, FaceKeyHash> seen;  // key -> (first position, count)
    std::vector<std::vector<int>> ordered;
    for (const auto& el : mesh.elements) {
        for (const auto& local : local_faces(el.kind)) {
            auto nodes = element_face_nodes(el, local);
            auto [it, inserted] = seen.try_emplace(make_key(nodes), static_cast<int>(ordered.size()), 0);
            if (inserted) ordered.push_back(std::move(nodes));
            ++it->second.second;
        }
    }
    std::vector<int> counts(ordered.size());
    for (const auto& [key, v] : seen) counts[static_cast<std::size_t>(v.first)] = v.second;
    std::vector<BoundaryFace> out;
    for (std::size_t f = 0; f < ordered.size(); ++f)
        if (counts[f] == 1) out.push_back({ordered[f], tag});
    return out;
}

Mesh split_quadrilaterals(const Mesh& mesh)
{
    if (mesh.dim != 2) throw MeshError("split_quadrilaterals: mesh must be 2D");
    Mesh out;
    out.dim = 2;
    out.nodes = mesh.nodes;
    out.elements.reserve(2 * mesh.elements.size());
    auto area = [&](int a, int b, int c) {
        const Vec3& p = mesh.nodes[a];
        const Vec3& q = mesh.nodes[b];
        const Vec3& r = mesh.nodes[c];
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    };
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& el = mesh.elements[e];
        if (el.kind != ElementKind::quadrilateral)
            throw MeshError("split_quadrilaterals: element " + std::to_string(e) + " is a " +
                            std::string(to_string(el.kind)));
        const auto& v = el.nodes;
        if (area(v[0], v[1], v[2]) > 0.0 && area(v[0], v[2], v[3]) > 0.0) {
            out.elements.push_back({ElementKind::triangle, {v[0], v[1], v[2]}});
            out.elements.push_back({ElementKind::triangle, {v[0], v[2], v[3]}});
        } else {
            out.elements.push_back({ElementKind::triangle, {v[0], v[1], v[3]}});
            out.elements.push_back({ElementKind::triangle, {v[1], v[2], v[3]}});
        }
    }
    std::unordered_map<FaceKey, BoundaryTag, FaceKeyHash> tags;
    for (const auto& b : mesh.boundary) tags.emplace(make_key(b.nodes), b.tag);
    out.boundary = find_boundary_faces(out);
    for (auto& b : out.boundary)
        if (const auto it = tags.find(make_key(b.nodes)); it != tags.end()) b.tag = it->second;
    return out;
}

Mesh generate_cartesian(int dim, int n, ElementKind kind)
{
    if (n < 1) throw MeshError("generate_cartesian: n must be >= 1");
    if (dim != 2 && dim != 3) throw MeshError("generate_cartesian: dim must be 2 or 3");
    if (element_dim(kind) != dim)
        throw MeshError("generate_cartesian: element kind " + std::string(to_string(kind)) +
                        " is not valid in " + std::to_string(dim) + "D");

    Mesh mesh;
    mesh.dim = dim;
    const int np = n + 1;
    const double dx = 1.0 / n;

    if (dim == 2) {
        mesh.nodes.reserve(static_cast<std::size_t>(np * np));
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < np; ++i) mesh.nodes.push_back({i * dx, j * dx, 0.0});
        auto id = [np](int i, int j) { return i + np * j; };
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int v0 = id(i, j), v1 = id(i + 1, j), v2 = id(i + 1, j + 1), v3 = id(i, j + 1);
                mesh.elements.push_back({ElementKind::quadrilateral, {v0, v1, v2, v3}});
            }
        }
        mesh.boundary = find_boundary_faces(mesh);
        return kind == ElementKind::triangle ? split_quadrilaterals(mesh) : mesh;
    }

    mesh.nodes.reserve(static_cast<std::size_t>(np * np * np));
    for (int k = 0; k < np; ++k)
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < np; ++i) mesh.nodes.push_back({i * dx, j * dx, k * dx});
    auto id = [np](int i, int j, int k) { return i + np * (j + np * k); };

    std::unordered_map<FaceKey, int, FaceKeyHash> face_centre_node;
    const auto& hex_faces = local_faces(ElementKind::hexahedron);

    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::array<int, 8> v{id(i, j, k),         id(i + 1, j, k),     id(i + 1, j + 1, k),
                                           id(i, j + 1, k),     id(i, j, k + 1),     id(i + 1, j, k + 1),
                                           id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)};
                switch (kind) {
                    case ElementKind::hexahedron:
                        mesh.elements.push_back({kind, {v.begin(), v.end()}});
                        break;
                    case ElementKind::prism:
                        mesh.elements.push_back({kind, {v[0], v[1], v[2], v[4], v[5], v[6]}});
                        mesh.elements.push_back({kind, {v[0], v[2], v[3], v[4], v[6], v[7]}});
                        break;
                    case ElementKind::pyramid:
                    case ElementKind::tetrahedron: {
                        const int centre = static_cast<int>(mesh.nodes.size());
                        mesh.nodes.push_back({(i + 0.5) * dx, (j + 0.5) * dx, (k + 0.5) * dx});
                        for (const auto& lf : hex_faces) {
                            const std::array<int, 4> f{v[static_cast<std::size_t>(lf[0])], v[static_cast<std::size_t>(lf[1])],
                                                       v[static_cast<std::size_t>(lf[2])], v[static_cast<std::size_t>(lf[3])]};
                            if (kind == ElementKind::pyramid) {
                                mesh.elements.push_back({kind, {f[0], f[3], f[2], f[1], centre}});
                                continue;
                            }
                            const auto key = make_key({f.begin(), f.end()});
                            auto [it, inserted] = face_centre_node.try_emplace(key, static_cast<int>(mesh.nodes.size()));
                            if (inserted) {
                                Vec3 m{};
                                for (int q : f) m += mesh.nodes[static_cast<std::size_t>(q)];
                                mesh.nodes.push_back(0.25 * m);
                            }
                            const int mid = it->second;
                            for (int q = 0; q < 4; ++q)
                                mesh.elements.push_back({kind, {centre, f[static_cast<std::size_t>(q)],
                                                                f[static_cast<std::size_t>((q + 1) % 4)], mid}});
                        }
                        break;
                    }
                    default:
                        break;
                }
            }
        }
    }
    mesh.boundary = find_boundary_faces(mesh);
    return mesh;
}

Mesh tag_boundary(Mesh mesh, const BoundarySelector& selector)
{
    if (mesh.boundary.empty()) mesh.boundary = find_boundary_faces(mesh);
    for (auto& bf : mesh.boundary) bf.tag = selector(vertex_mean(mesh, bf.nodes));
    return mesh;
}

BoundarySelector neumann_on_plane(int axis, double value, double tol)
{
    return [axis, value, tol](const Vec3& c) {
        return std::abs(c[static_cast<std::size_t>(axis)] - value) <= tol ? BoundaryTag::neumann : BoundaryTag::dirichlet;
    };
}

FaceConnectivity extract_faces(const Mesh& mesh)
{
    FaceConnectivity conn;
    std::unordered_map<FaceKey, int, FaceKeyHash> index;
    index.reserve(mesh.elements.size() * 4);
    conn.element_faces.resize(mesh.elements.size());

    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& el = mesh.elements[e];
        const auto& lfs = local_faces(el.kind);
        auto& ef = conn.element_faces[e];
        ef.reserve(lfs.size());
        for (std::size_t l = 0; l < lfs.size(); ++l) {
            auto nodes = element_face_nodes(el, lfs[l]);
            auto [it, inserted] = index.try_emplace(make_key(nodes), static_cast<int>(conn.faces.size()));
            const int f = it->second;
            const FaceSide side{static_cast<int>(e), static_cast<int>(l)};
            if (inserted) {
                conn.faces.push_back(std::move(nodes));
                conn.face_elements.push_back({side, FaceSide{}});
            } else if (conn.face_elements[static_cast<std::size_t>(f)][1].element < 0) {
                conn.face_elements[static_cast<std::size_t>(f)][1] = side;
            } else {
                throw MeshError("malformed mesh: face of element " + std::to_string(e) +
                                " is shared by more than two elements");
            }
            ef.push_back(f);
        }
    }

    conn.kind.resize(conn.faces.size(), FaceKind::interior);
    for (std::size_t f = 0; f < conn.faces.size(); ++f)
        if (conn.face_elements[f][1].element < 0) conn.kind[f] = FaceKind::dirichlet;

    for (std::size_t b = 0; b < mesh.boundary.size(); ++b) {
        const auto it = index.find(make_key(mesh.boundary[b].nodes));
        if (it == index.end())
            throw MeshError("boundary face " + std::to_string(b) + " is not a face of any element");
        const auto f = static_cast<std::size_t>(it->second);
        if (conn.face_elements[f][1].element >= 0)
            throw MeshError("boundary face " + std::to_string(b) + " is shared by two elements");
        conn.kind[f] = mesh.boundary[b].tag == BoundaryTag::neumann ? FaceKind::neumann : FaceKind::dirichlet;
    }
    return conn;
}

double min_edge_length(const Mesh& mesh)
{
    double lmin = std::numeric_limits<double>::infinity();
    for (const auto& el : mesh.elements) {
        for (const auto& lf : local_faces(el.kind)) {
            const std::size_t m = lf.size();
            const std::size_t pairs = mesh.dim == 2 ? 1 : m;
            for (std::size_t q = 0; q < pairs; ++q) {
                const auto a = static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(lf[q])]);
                const auto b = static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(lf[(q + 1) % m])]);
                lmin = std::min(lmin, norm(mesh.nodes[a] - mesh.nodes[b]));
            }
        }
    }
    return lmin;
}

std::vector<bool> boundary_node_mask(const Mesh& mesh)
{
    std::vector<bool> mask(mesh.nodes.size(), false);
    const auto faces = mesh.boundary.empty() ? find_boundary_faces(mesh) : mesh.boundary;
    for (const auto& bf : faces)
        for (int v : bf.nodes) mask[static_cast<std::size_t>(v)] = true;
    return mask;
}

Mesh perturb(const Mesh& mesh, double fraction, std::uint64_t seed)
{
    Mesh out = mesh;
    if (fraction == 0.0) return out;
    if (fraction < 0.0) throw MeshError("perturb: fraction must be non-negative");
    const double amplitude = fraction * min_edge_length(mesh);
    const auto on_boundary = boundary_node_mask(mesh);
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (std::size_t v = 0; v < out.nodes.size(); ++v) {
        if (on_boundary[v]) continue;
        for (int c = 0; c < mesh.dim; ++c)
            out.nodes[v][static_cast<std::size_t>(c)] += amplitude * (2.0 * uniform() - 1.0);
    }
    return out;
}

double solve_stretch_factor(double h, double s, int n_layers)
{
    if (!(s >= 1.0) || n_layers < 2 || !(h > 0.0))
        throw MeshError("solve_stretch_factor: need s >= 1, N_y >= 2 and h > 0");
    if (s == 1.0) return 1.0;

    const double a = h / s;
    const double nl = static_cast<double>(n_layers);
    // Residual written in terms of d = beta - 1 to avoid cancellation near beta = 1.
    auto residual = [a, nl](double beta) {
        const double d = beta - 1.0;
        return a * std::expm1(nl * std::log1p(d)) - d;
    };
    auto derivative = [a, nl](double beta) { return a * nl * std::pow(beta, nl - 1.0) - 1.0; };

    double lo = 1.0 + 1e-12;
    double hi = s * nl;
    if (!(residual(lo) < 0.0) || !(residual(hi) > 0.0))
        throw MeshError("solve_stretch_factor: no bracketing root for h=" + std::to_string(h) +
                        ", s=" + std::to_string(s) + ", N_y=" + std::to_string(n_layers));
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    double beta = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
        const double g = residual(beta);
        if (std::abs(g) < 1e-15) break;
        const double next = beta - g / derivative(beta);
        if (!(next > 1.0) || std::abs(residual(next)) >= std::abs(g)) break;
        beta = next;
    }
    return beta;
}

std::vector<double> stretched_layers(double s, int n_layers, double lo, double hi)
{
    const double h = 1.0 / n_layers;
    const double beta = solve_stretch_factor(h, s, n_layers);
    std::vector<double> y(static_cast<std::size_t>(n_layers) + 1, 0.0);
    double inc = h / s;
    for (int k = 1; k <= n_layers; ++k) {
        y[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(k) - 1] + inc;
        inc *= beta;
    }
    if (std::abs(y.back() - 1.0) > 1e-10)
        throw MeshError("stretched_layers: layers end at " + std::to_string(y.back()) + " instead of 1");
    for (auto& v : y) v = lo + (hi - lo) * v;
    y.back() = hi;
    return y;
}

Mesh stretch(const Mesh& mesh, double s)
{
    if (s == 1.0) return mesh;
    const auto axis = static_cast<std::size_t>(mesh.dim - 1);
    std::vector<double> levels;
    levels.reserve(mesh.nodes.size());
    for (const auto& x : mesh.nodes) levels.push_back(x[axis]);
    std::sort(levels.begin(), levels.end());
    const double lo = levels.front(), hi = levels.back();
    const double eps = 1e-10 * (hi - lo);
    levels.erase(std::unique(levels.begin(), levels.end(), [eps](double a, double b) { return b - a <= eps; }),
                 levels.end());
    const int n_layers = static_cast<int>(levels.size()) - 1;
    if (n_layers < 2) throw MeshError("stretch: mesh needs at least two layers");
    const double spacing = (hi - lo) / n_layers;
    for (std::size_t k = 0; k < levels.size(); ++k)
        if (std::abs(levels[k] - (lo + spacing * static_cast<double>(k))) > 1e-8 * (hi - lo))
            throw MeshError("stretch: vertical node coordinates are not uniformly layered");

    const auto target = stretched_layers(s, n_layers, lo, hi);
    Mesh out = mesh;
    for (auto& x : out.nodes) {
        const double t = (x[axis] - lo) / spacing;
        auto k = static_cast<int>(std::floor(t + 1e-9));
        k = std::clamp(k, 0, n_layers - 1);
        const double frac = t - k;
        const auto ku = static_cast<std::size_t>(k);
        if (std::abs(frac) <= 1e-9)
            x[axis] = target[ku];
        else if (std::abs(frac - 1.0) <= 1e-9)
            x[axis] = target[ku + 1];
        else
            x[axis] = target[ku] + frac * (target[ku + 1] - target[ku]);
    }
    return out;
}

std::vector<Vec3> generate_sphere_cluster_centres(int n, double R, double rho, double delta)
{
    if (n < 1 || !(rho > 0.0) || !(rho < R) || !(delta >= 0.0))
        throw MeshError("sphere cluster: need n >= 1, 0 < rho < R, delta >= 0");
    const double d = 2.0 * rho + delta;
    const double pi = std::numbers::pi;
    std::vector<Vec3> centres;
    for (int i = 1; i <= n; ++i) {
        const double Ri = i * (R - rho) / n;
        centres.push_back({0.0, 0.0, -Ri});
        const auto arcs = static_cast<int>(std::floor(pi * Ri / d));
        for (int j = 1; j <= arcs; ++j) {
            const double polar = j * d / Ri;
            const double r = Ri * std::sin(polar);
            const double z = -Ri * std::cos(polar);
            // Equally spaced points of [0, 2pi] with the repeated endpoint dropped.
            const int count = static_cast<int>(std::floor(2.0 * pi * r / d)) - 1;
            for (int k = 0; k < count; ++k) {
                const double phi = 2.0 * pi * k / count;
                centres.push_back({r * std::cos(phi), r * std::sin(phi), z});
            }
        }
    }
    const double min_allowed = 2.0 * rho * (1.0 - 1e-12);
    for (std::size_t a = 0; a < centres.size(); ++a)
        for (std::size_t b = a + 1; b < centres.size(); ++b)
            if (norm(centres[a] - centres[b]) < min_allowed)
                throw MeshError("sphere cluster: spheres " + std::to_string(a) + " and " + std::to_string(b) +
                                " overlap");
    return centres;
}

}  // namespace fcfv
