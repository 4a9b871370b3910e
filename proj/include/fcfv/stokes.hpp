#pragma once

#include <vector>

#include "fcfv/discretisation.hpp"
#include "fcfv/sparse.hpp"

namespace fcfv {

/// Data of -nu lap u + grad p = s, div u = 0, u = u_D on Dirichlet faces and
/// n . (nu grad u - p I) = t on Neumann faces. Sampled like PoissonBC.
struct StokesBC {
    double viscosity = 1.0;
    VectorField dirichlet;
    VectorField neumann;
    VectorField source;
};

/// alpha = sum_A |G| tau, beta = |O| s + sum_D |G| tau u_D, Z = sum_D |G| n (x) u_D.
struct StokesPrecomp {
    int dim = 2;
    double viscosity = 1.0;
    std::vector<double> alpha;
    std::vector<Vec3> beta;
    std::vector<Tensor3> Z;
    std::vector<double> tau;
    std::vector<Vec3> face_data;  // u_D on Dirichlet faces, t on Neumann faces
    std::vector<Vec3> source;
};

/// Unknown layout: dim components per unknown face (interleaved), then one
/// mean pressure per element, then the zero-mean multiplier when the boundary
/// is pure Dirichlet.
struct StokesNumbering {
    int dim = 2;
    TraceNumbering faces;
    int n_elements = 0;
    bool has_multiplier = false;

    [[nodiscard]] int velocity(int dof, int component) const { return dim * dof + component; }
    [[nodiscard]] int pressure(int element) const { return dim * faces.size() + element; }
    [[nodiscard]] int multiplier() const { return dim * faces.size() + n_elements; }
    [[nodiscard]] int size() const { return dim * faces.size() + n_elements + (has_multiplier ? 1 : 0); }
};

struct StokesSystem {
    TripletMatrix K;
    std::vector<double> f;
    StokesNumbering numbering;
};

struct StokesSolution {
    StokesNumbering numbering;
    std::vector<Vec3> u_hat;  // per unknown face
    std::vector<double> rho;  // per element
    std::vector<Tensor3> L;   // L = -sqrt(nu) grad u, (grad u)_ij = d_i u_j
    std::vector<Vec3> u;
    std::vector<double> p;    // p = rho
    std::vector<Vec3> face_trace;  // unknown or u_D on every face
};

/// Throws SolverError on non-positive tau or viscosity.
[[nodiscard]] StokesPrecomp precompute(const Discretisation& d, const StokesBC& bc, const std::vector<double>& tau);

/// Symmetric saddle system with a zero pressure block. Without Neumann faces
/// the constraint sum_e |O_e| rho_e = 0 is bordered on, after checking that
/// the Dirichlet data has zero net flux (relative 1e-10 against
/// sum |G| |u_D|); SolverError otherwise.
[[nodiscard]] StokesSystem assemble(const Discretisation& d, const StokesPrecomp& pre);

[[nodiscard]] SolveResult solve_trace(const StokesSystem& sys, SolveOptions opts = {});

/// Splits a solution vector of the assembled system into traces and
/// pressures, then recovers the element fields.
[[nodiscard]] StokesSolution recover(const Discretisation& d, const StokesPrecomp& pre,
                                     const StokesNumbering& numbering, const std::vector<double>& x);

/// Sum over the given boundary faces of |G| times the numerical traction
/// -(n . (sqrt(nu) L_e + p_e I) + tau (u_e - u_hat)), with n the outward
/// normal of the adjacent element. On Neumann faces this equals t.
[[nodiscard]] Vec3 boundary_traction(const Discretisation& d, const StokesPrecomp& pre, const StokesSolution& sol,
                                     const std::vector<int>& faces);

/// Numerical traction on one boundary face (no area factor).
[[nodiscard]] Vec3 face_traction(const Discretisation& d, const StokesPrecomp& pre, const StokesSolution& sol,
                                 int face);

struct StokesOptions {
    double tau = 10.0;
    SolveOptions solver{};
};

struct StokesRun {
    StokesPrecomp pre;
    StokesSolution solution;
    SolveReport report;
    int n_dof = 0;
    double assembly_seconds = 0.0;
    double recover_seconds = 0.0;
};

[[nodiscard]] StokesRun solve_stokes(const Discretisation& d, const StokesBC& bc, const StokesOptions& opts = {});

}  // namespace fcfv
