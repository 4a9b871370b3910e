#include "fcfv/mesh_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include "json.hpp"

#include "fcfv/geometry.hpp"

namespace fcfv {

using nlohmann::json;

namespace {

std::string record(std::string_view array, std::size_t i) { return std::string(array) + "[" + std::to_string(i) + "]"; }

std::vector<int> read_indices(const json& j, const std::string& where, std::size_t n_nodes)
{
    if (!j.is_array()) throw ParseError(where + ": 'nodes' must be an array of integers");
    std::vector<int> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ParseError(where + ": node indices must be integers");
        const auto idx = v.get<long long>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= n_nodes)
            throw ParseError(where + ": node index " + std::to_string(idx) + " out of range [0, " +
                             std::to_string(n_nodes) + ")");
        out.push_back(static_cast<int>(idx));
    }
    return out;
}

// Reverses the orientation of an element in place.
void flip(Element& el)
{
    auto& n = el.nodes;
    switch (el.kind) {
        case ElementKind::triangle:
        case ElementKind::tetrahedron: std::swap(n[1], n[2]); break;
        case ElementKind::quadrilateral:
        case ElementKind::pyramid: std::swap(n[1], n[3]); break;
        case ElementKind::hexahedron:
            std::swap(n[1], n[3]);
            std::swap(n[5], n[7]);
            break;
        case ElementKind::prism:
            std::swap(n[1], n[2]);
            std::swap(n[4], n[5]);
            break;
    }
}

}  // namespace

Mesh read_mesh_json(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("mesh JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("mesh JSON: top level must be an object");
    for (const char* key : {"dim", "nodes", "elements"})
        if (!doc.contains(key)) throw ParseError(std::string("mesh JSON: missing key '") + key + "'");

    Mesh mesh;
    if (!doc["dim"].is_number_integer()) throw ParseError("mesh JSON: 'dim' must be an integer");
    mesh.dim = doc["dim"].get<int>();
    if (mesh.dim != 2 && mesh.dim != 3) throw ParseError("mesh JSON: 'dim' must be 2 or 3");

    const auto& nodes = doc["nodes"];
    if (!nodes.is_array()) throw ParseError("mesh JSON: 'nodes' must be an array");
    mesh.nodes.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& p = nodes[i];
        if (!p.is_array() || p.size() != static_cast<std::size_t>(mesh.dim))
            throw ParseError(record("nodes", i) + ": expected " + std::to_string(mesh.dim) + " coordinates");
        Vec3 x{};
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (!p[c].is_number()) throw ParseError(record("nodes", i) + ": coordinates must be numbers");
            x[c] = p[c].get<double>();
        }
        mesh.nodes.push_back(x);
    }

    const auto& elements = doc["elements"];
    if (!elements.is_array()) throw ParseError("mesh JSON: 'elements' must be an array");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto& e = elements[i];
        const auto where = record("elements", i);
        if (!e.is_object() || !e.contains("kind") || !e.contains("nodes"))
            throw ParseError(where + ": expected {\"kind\", \"nodes\"}");
        Element el;
        try {
            el.kind = parse_element_kind(e["kind"].get<std::string>());
        } catch (const std::exception& ex) {
            throw ParseError(where + ": " + ex.what());
        }
        el.nodes = read_indices(e["nodes"], where, mesh.nodes.size());
        if (static_cast<int>(el.nodes.size()) != element_node_count(el.kind))
            throw ParseError(where + ": " + std::string(to_string(el.kind)) + " needs " +
                             std::to_string(element_node_count(el.kind)) + " nodes");
        mesh.elements.push_back(std::move(el));
    }

    if (doc.contains("boundary")) {
        const auto& boundary = doc["boundary"];
        if (!boundary.is_array()) throw ParseError("mesh JSON: 'boundary' must be an array");
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            const auto& b = boundary[i];
            const auto where = record("boundary", i);
            if (!b.is_object() || !b.contains("nodes")) throw ParseError(where + ": expected {\"nodes\", \"tag\"}");
            BoundaryFace bf;
            bf.nodes = read_indices(b["nodes"], where, mesh.nodes.size());
            try {
                bf.tag = b.contains("tag") ? parse_boundary_tag(b["tag"].get<std::string>()) : BoundaryTag::dirichlet;
            } catch (const std::exception& ex) {
                throw ParseError(where + ": " + ex.what());
            }
            mesh.boundary.push_back(std::move(bf));
        }
    }
    try {
        mesh.validate();
    } catch (const MeshError& e) {
        throw ParseError(std::string("mesh JSON: ") + e.what());
    }
    return mesh;
}

void write_mesh_json(const Mesh& mesh, std::ostream& out)
{
    json doc;
    doc["dim"] = mesh.dim;
    json nodes = json::array();
    for (const auto& x : mesh.nodes) {
        json p = json::array();
        for (int c = 0; c < mesh.dim; ++c) p.push_back(x[static_cast<std::size_t>(c)]);
        nodes.push_back(std::move(p));
    }
    doc["nodes"] = std::move(nodes);
    json elements = json::array();
    for (const auto& el : mesh.elements)
        elements.push_back({{"kind", std::string(to_string(el.kind))}, {"nodes", el.nodes}});
    doc["elements"] = std::move(elements);
    json boundary = json::array();
    for (const auto& bf : mesh.boundary)
        boundary.push_back({{"nodes", bf.nodes}, {"tag", std::string(to_string(bf.tag))}});
    doc["boundary"] = std::move(boundary);
    out << doc.dump() << '\n';
}

Mesh read_gmsh(std::istream& in, const GmshTagMap& tags)
{
    std::string line;
    std::size_t lineno = 0;
    auto next = [&](const char* what) -> std::string& {
        if (!std::getline(in, line)) throw ParseError(std::string("gmsh: unexpected end of file reading ") + what);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto fail = [&](const std::string& msg) { return ParseError("gmsh line " + std::to_string(lineno) + ": " + msg); };

    std::unordered_map<long long, int> node_index;
    std::vector<Vec3> nodes;
    struct RawElement {
        int type;
        int physical;
        std::vector<long long> nodes;
        std::size_t line;
    };
    std::vector<RawElement> raw;
    bool saw_nodes = false, saw_elements = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "$MeshFormat") {
            std::istringstream ls(next("$MeshFormat"));
            double version = 0;
            int filetype = -1;
            ls >> version >> filetype;
            if (version < 2.0 || version >= 3.0) throw fail("only format version 2.x is supported");
            if (filetype != 0) throw fail("only ASCII files are supported");
            while (next("$EndMeshFormat") != "$EndMeshFormat") {}
        } else if (line == "$Nodes") {
            std::istringstream cs(next("$Nodes"));
            long long count = -1;
            if (!(cs >> count) || count < 0) throw fail("bad node count");
            nodes.reserve(static_cast<std::size_t>(count));
            for (long long i = 0; i < count; ++i) {
                std::istringstream ls(next("$Nodes"));
                long long id;
                Vec3 x{};
                if (!(ls >> id >> x[0] >> x[1] >> x[2])) throw fail("bad node record");
                node_index[id] = static_cast<int>(nodes.size());
                nodes.push_back(x);
            }
            if (next("$EndNodes") != "$EndNodes") throw fail("expected $EndNodes");
            saw_nodes = true;
        } else if (line == "$Elements") {
            std::istringstream cs(next("$Elements"));
            long long count = -1;
            if (!(cs >> count) || count < 0) throw fail("bad element count");
            for (long long i = 0; i < count; ++i) {
                std::istringstream ls(next("$Elements"));
                long long id;
                int type, ntags;
                if (!(ls >> id >> type >> ntags)) throw fail("bad element record");
                int physical = 0;
                for (int t = 0; t < ntags; ++t) {
                    int tag;
                    if (!(ls >> tag)) throw fail("bad element tags");
                    if (t == 0) physical = tag;
                }
                RawElement r{type, physical, {}, lineno};
                long long v;
                while (ls >> v) r.nodes.push_back(v);
                raw.push_back(std::move(r));
            }
            if (next("$EndElements") != "$EndElements") throw fail("expected $EndElements");
            saw_elements = true;
        } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
            const std::string end = "$End" + line.substr(1);
            while (next(end.c_str()) != end) {}
        }
    }
    if (!saw_nodes || !saw_elements) throw ParseError("gmsh: missing $Nodes or $Elements block");

    struct TypeInfo {
        int dim;
        int count;
        ElementKind kind;
    };
    auto info = [](int type) -> std::optional<TypeInfo> {
        switch (type) {
            case 1: return TypeInfo{1, 2, ElementKind::triangle};
            case 2: return TypeInfo{2, 3, ElementKind::triangle};
            case 3: return TypeInfo{2, 4, ElementKind::quadrilateral};
            case 4: return TypeInfo{3, 4, ElementKind::tetrahedron};
            case 5: return TypeInfo{3, 8, ElementKind::hexahedron};
            case 6: return TypeInfo{3, 6, ElementKind::prism};
            case 7: return TypeInfo{3, 5, ElementKind::pyramid};
            default: return std::nullopt;
        }
    };

    int dim = 0;
    for (const auto& r : raw)
        if (auto ti = info(r.type)) dim = std::max(dim, ti->dim);
    if (dim < 2) throw ParseError("gmsh: no 2D or 3D elements found");

    Mesh mesh;
    mesh.dim = dim;
    mesh.nodes = std::move(nodes);
    for (const auto& r : raw) {
        const auto ti = info(r.type);
        if (!ti || ti->dim < dim - 1) continue;
        if (static_cast<int>(r.nodes.size()) != ti->count)
            throw ParseError("gmsh line " + std::to_string(r.line) + ": element of type " + std::to_string(r.type) +
                             " needs " + std::to_string(ti->count) + " nodes");
        std::vector<int> ids;
        for (long long v : r.nodes) {
            const auto it = node_index.find(v);
            if (it == node_index.end())
                throw ParseError("gmsh line " + std::to_string(r.line) + ": unknown node " + std::to_string(v));
            ids.push_back(it->second);
        }
        if (ti->dim == dim) {
            mesh.elements.push_back({ti->kind, std::move(ids)});
        } else {
            const auto tag = tags.find(r.physical);
            mesh.boundary.push_back({std::move(ids), tag == tags.end() ? BoundaryTag::dirichlet : tag->second});
        }
    }
    for (std::size_t e = 0; e < mesh.elements.size(); ++e)
        if (signed_element_volume(mesh, static_cast<int>(e)) < 0.0) flip(mesh.elements[e]);
    mesh.validate();
    return mesh;
}

Mesh read_mesh(const std::filesystem::path& path, const GmshTagMap& tags)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file " + path.string());
    if (path.extension() == ".msh") return read_gmsh(in, tags);
    return read_mesh_json(in);
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write mesh file " + path.string());
    write_mesh_json(mesh, out);
}

}  // namespace fcfv
