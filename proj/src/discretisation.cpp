#include "fcfv/discretisation.hpp"

namespace fcfv {

Discretisation discretise(const Mesh& mesh)
{
    Discretisation d;
    d.dim = mesh.dim;
    d.conn = extract_faces(mesh);
    d.geom = element_geometry(mesh, d.conn);
    d.face_centroid.resize(d.conn.num_faces());
    for (std::size_t f = 0; f < d.conn.num_faces(); ++f) {
        Vec3 c{};
        for (int v : d.conn.faces[f]) c += mesh.nodes[static_cast<std::size_t>(v)];
        d.face_centroid[f] = (1.0 / static_cast<double>(d.conn.faces[f].size())) * c;
    }
    d.h = characteristic_size(mesh);
    return d;
}

std::vector<double> uniform_tau(const FaceConnectivity& conn, double tau)
{
    return std::vector<double>(conn.num_faces(), tau);
}

TraceNumbering number_traces(const FaceConnectivity& conn, bool include_neumann)
{
    TraceNumbering t;
    t.face_to_dof.assign(conn.num_faces(), -1);
    auto take = [&](FaceKind k) {
        for (std::size_t f = 0; f < conn.num_faces(); ++f)
            if (conn.kind[f] == k) {
                t.face_to_dof[f] = static_cast<int>(t.dof_to_face.size());
                t.dof_to_face.push_back(static_cast<int>(f));
            }
    };
    take(FaceKind::interior);
    if (include_neumann) take(FaceKind::neumann);
    return t;
}

}  // namespace fcfv
