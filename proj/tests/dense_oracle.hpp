#pragma once

// Reference HDG k=0 discretisation with one-point rules. Every element
// solves its local system as a dense LU, the global residual is accumulated
// face by face, and the matrix is its Jacobian column by column. Nothing here
// uses the closed-form precomputed quantities of the library.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "fcfv/discretisation.hpp"
#include "fcfv/poisson.hpp"
#include "fcfv/sparse.hpp"
#include "fcfv/stokes.hpp"

namespace oracle {

using fcfv::Discretisation;
using fcfv::FaceKind;
using fcfv::Vec3;

struct DenseSystem {
    Eigen::MatrixXd K;
    Eigen::VectorXd f;
};

inline Eigen::MatrixXd to_dense(const fcfv::CompressedMatrix& A)
{
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.rows(), A.cols());
    for (int r = 0; r < A.rows(); ++r)
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) M(r, A.col_idx()[k]) = A.values()[k];
    return M;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double eval(const fcfv::ScalarField& f, const Vec3& x) { return f ? f(x) : 0.0; }
inline Vec3 eval(const fcfv::VectorField& f, const Vec3& x) { return f ? f(x) : Vec3{}; }

/// Unknown faces: interior first, then Neumann ones unless they are local.
inline std::vector<int> unknown_faces(const Discretisation& d, bool neumann_local)
{
    std::vector<int> faces;
    for (std::size_t f = 0; f < d.conn.num_faces(); ++f)
        if (d.conn.kind[f] == FaceKind::interior) faces.push_back(static_cast<int>(f));
    if (!neumann_local)
        for (std::size_t f = 0; f < d.conn.num_faces(); ++f)
            if (d.conn.kind[f] == FaceKind::neumann) faces.push_back(static_cast<int>(f));
    return faces;
}

/// Local (q, u) of element e for the given global trace vector.
inline Eigen::VectorXd poisson_local(const Discretisation& d, const fcfv::PoissonBC& bc, double tau, bool neumann_local,
                                     const std::vector<int>& dof_of_face, int e, const Eigen::VectorXd& x)
{
    const int dim = d.dim;
    const auto& g = d.geom[e];
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dim + 1);
    for (int a = 0; a < dim; ++a) A(a, a) = g.volume;
    r(dim) = g.volume * eval(bc.source, g.centroid);
    for (std::size_t j = 0; j < g.faces.size(); ++j) {
        const int f = d.conn.element_faces[e][j];
        const auto& fg = g.faces[j];
        const Vec3& xc = d.face_centroid[f];
        const FaceKind kind = d.conn.kind[f];
        if (neumann_local && kind == FaceKind::neumann) {
            // trace equals u_e, flux equals -t
            for (int a = 0; a < dim; ++a) A(a, dim) += fg.area * fg.normal[a];
            r(dim) += fg.area * eval(bc.neumann, xc);
            continue;
        }
        const double uh = kind == FaceKind::dirichlet ? eval(bc.dirichlet, xc) : x(dof_of_face[f]);
        for (int a = 0; a < dim; ++a) r(a) -= fg.area * fg.normal[a] * uh;
        for (int a = 0; a < dim; ++a) A(dim, a) += fg.area * fg.normal[a];
        A(dim, dim) += fg.area * tau;
        r(dim) += fg.area * tau * uh;
    }
    return A.fullPivLu().solve(r);
}

inline Eigen::VectorXd poisson_residual(const Discretisation& d, const fcfv::PoissonBC& bc, double tau,
                                        bool neumann_local, const std::vector<int>& faces, const Eigen::VectorXd& x)
{
    std::vector<int> dof_of_face(d.conn.num_faces(), -1);
    for (std::size_t k = 0; k < faces.size(); ++k) dof_of_face[faces[k]] = static_cast<int>(k);
    Eigen::VectorXd G = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(faces.size()));
    const int dim = d.dim;
    for (int e = 0; e < static_cast<int>(d.geom.size()); ++e) {
        const Eigen::VectorXd y = poisson_local(d, bc, tau, neumann_local, dof_of_face, e, x);
        const auto& g = d.geom[e];
        for (std::size_t j = 0; j < g.faces.size(); ++j) {
            const int f = d.conn.element_faces[e][j];
            const int k = dof_of_face[f];
            if (k < 0) continue;
            const auto& fg = g.faces[j];
            double nq = 0.0;
            for (int a = 0; a < dim; ++a) nq += fg.normal[a] * y(a);
            G(k) += fg.area * (nq + tau * (y(dim) - x(k)));
        }
    }
    for (std::size_t k = 0; k < faces.size(); ++k)
        if (d.conn.kind[faces[k]] == FaceKind::neumann) {
            const auto& side = d.conn.face_elements[faces[k]][0];
            G(static_cast<Eigen::Index>(k)) +=
                d.geom[side.element].faces[side.local].area * eval(bc.neumann, d.face_centroid[faces[k]]);
        }
    return G;
}

template <class Residual>
DenseSystem linearise(int n, Residual&& residual)
{
    DenseSystem s;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd G0 = residual(zero);
    s.f = -G0;
    s.K.resize(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd ej = zero;
        ej(j) = 1.0;
        s.K.col(j) = residual(ej) - G0;
    }
    return s;
}

inline DenseSystem poisson_system(const Discretisation& d, const fcfv::PoissonBC& bc, double tau, bool neumann_local)
{
    const auto faces = unknown_faces(d, neumann_local);
    return linearise(static_cast<int>(faces.size()), [&](const Eigen::VectorXd& x) {
        return poisson_residual(d, bc, tau, neumann_local, faces, x);
    });
}

/// Stokes: unknowns are dim components per unknown face, one pressure per
/// element and, for pure Dirichlet data, the mean-pressure multiplier.
struct StokesLayout {
    std::vector<int> faces;
    std::vector<int> dof_of_face;
    int dim = 2;
    int n_elements = 0;
    bool multiplier = false;
    [[nodiscard]] int size() const
    {
        return dim * static_cast<int>(faces.size()) + n_elements + (multiplier ? 1 : 0);
    }
};

inline StokesLayout stokes_layout(const Discretisation& d)
{
    StokesLayout l;
    l.dim = d.dim;
    l.faces = unknown_faces(d, false);
    l.dof_of_face.assign(d.conn.num_faces(), -1);
    for (std::size_t k = 0; k < l.faces.size(); ++k) l.dof_of_face[l.faces[k]] = static_cast<int>(k);
    l.n_elements = static_cast<int>(d.geom.size());
    l.multiplier = true;
    for (auto k : d.conn.kind)
        if (k == FaceKind::neumann) l.multiplier = false;
    return l;
}

/// Local (L row-major, u) of element e given traces and its pressure.
inline Eigen::VectorXd stokes_local(const Discretisation& d, const fcfv::StokesBC& bc, double tau,
                                    const StokesLayout& l, int e, const Eigen::VectorXd& x)
{
    const int dim = d.dim;
    const int nL = dim * dim;
    const double snu = std::sqrt(bc.viscosity);
    const auto& g = d.geom[e];
    const double p = x(dim * static_cast<int>(l.faces.size()) + e);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nL + dim, nL + dim);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nL + dim);
    for (int a = 0; a < nL; ++a) A(a, a) = g.volume;
    const Vec3 s = eval(bc.source, g.centroid);
    for (int b = 0; b < dim; ++b) r(nL + b) = g.volume * s[b];
    for (std::size_t j = 0; j < g.faces.size(); ++j) {
        const int f = d.conn.element_faces[e][j];
        const auto& fg = g.faces[j];
        Vec3 uh{};
        if (d.conn.kind[f] == FaceKind::dirichlet) uh = eval(bc.dirichlet, d.face_centroid[f]);
        else
            for (int b = 0; b < dim; ++b) uh[b] = x(dim * l.dof_of_face[f] + b);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) r(a * dim + b) -= snu * fg.area * fg.normal[a] * uh[b];
        for (int b = 0; b < dim; ++b) {
            for (int a = 0; a < dim; ++a) A(nL + b, a * dim + b) += fg.area * snu * fg.normal[a];
            A(nL + b, nL + b) += fg.area * tau;
            r(nL + b) += fg.area * (tau * uh[b] - p * fg.normal[b]);
        }
    }
    return A.fullPivLu().solve(r);
}

inline Eigen::VectorXd stokes_residual(const Discretisation& d, const fcfv::StokesBC& bc, double tau,
                                       const StokesLayout& l, const Eigen::VectorXd& x)
{
    const int dim = d.dim;
    const int nL = dim * dim;
    const int nf = static_cast<int>(l.faces.size());
    const double snu = std::sqrt(bc.viscosity);
    Eigen::VectorXd G = Eigen::VectorXd::Zero(l.size());
    for (int e = 0; e < l.n_elements; ++e) {
        const Eigen::VectorXd y = stokes_local(d, bc, tau, l, e, x);
        const double p = x(dim * nf + e);
        const auto& g = d.geom[e];
        for (std::size_t j = 0; j < g.faces.size(); ++j) {
            const int f = d.conn.element_faces[e][j];
            const auto& fg = g.faces[j];
            const int k = l.dof_of_face[f];
            Vec3 uh{};
            if (k < 0) uh = eval(bc.dirichlet, d.face_centroid[f]);
            else
                for (int b = 0; b < dim; ++b) uh[b] = x(dim * k + b);
            for (int b = 0; b < dim; ++b) G(dim * nf + e) += fg.area * fg.normal[b] * uh[b];
            if (k < 0) continue;
            for (int b = 0; b < dim; ++b) {
                double flux = p * fg.normal[b] + tau * (y(nL + b) - uh[b]);
                for (int a = 0; a < dim; ++a) flux += fg.normal[a] * snu * y(a * dim + b);
                G(dim * k + b) += fg.area * flux;
            }
        }
        if (l.multiplier) {
            G(dim * nf + e) += g.volume * x(l.size() - 1);
            G(l.size() - 1) += g.volume * p;
        }
    }
    for (int k = 0; k < nf; ++k)
        if (d.conn.kind[l.faces[k]] == FaceKind::neumann) {
            const auto& side = d.conn.face_elements[l.faces[k]][0];
            const Vec3 t = eval(bc.neumann, d.face_centroid[l.faces[k]]);
            for (int b = 0; b < dim; ++b) G(dim * k + b) += d.geom[side.element].faces[side.local].area * t[b];
        }
    return G;
}

inline DenseSystem stokes_system(const Discretisation& d, const fcfv::StokesBC& bc, double tau)
{
    const auto l = stokes_layout(d);
    return linearise(l.size(), [&](const Eigen::VectorXd& x) { return stokes_residual(d, bc, tau, l, x); });
}

}  // namespace oracle
