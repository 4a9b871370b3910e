#pragma once

#include <optional>
#include <vector>

#include "fcfv/discretisation.hpp"
#include "fcfv/sparse.hpp"

namespace fcfv {

/// Data of -lap u = s, u = u_D on Dirichlet faces, n . grad u = t on Neumann
/// faces. Fields are sampled once: u_D and t at face centroids, s at element
/// centroids. Unset fields read as zero.
struct PoissonBC {
    ScalarField dirichlet;
    ScalarField neumann;
    ScalarField source;
};

enum class PoissonFormulation { dirichlet_local, neumann_local };

[[nodiscard]] std::string_view to_string(PoissonFormulation f);
[[nodiscard]] PoissonFormulation parse_poisson_formulation(std::string_view name);

/// Element quantities that depend only on the data.
///
/// Dirichlet-local:  alpha = sum_A |G| tau,  beta = |O| s + sum_D |G| tau u_D,
///                   z = sum_D |G| n u_D.
/// Neumann-local:    alpha = sum_{A\N} |G| tau,
///                   beta = |O| s + sum_N |G| t + sum_D |G| tau u_D,
///                   z as above, w = sum_N |G| n, theta = |w|^2 + |O| alpha.
struct PoissonPrecomp {
    PoissonFormulation formulation = PoissonFormulation::dirichlet_local;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<Vec3> z;
    std::vector<Vec3> w;          // Neumann-local only
    std::vector<double> theta;    // Neumann-local only
    std::vector<double> tau;      // per global face
    std::vector<double> face_data;  // u_D on Dirichlet faces, t on Neumann faces, 0 elsewhere
    std::vector<double> source;     // s at element centroids
};

struct PoissonSystem {
    TripletMatrix K;
    std::vector<double> f;
    TraceNumbering numbering;
};

struct PoissonSolution {
    TraceNumbering numbering;
    std::vector<double> u_hat;  // one value per unknown face
    std::vector<double> u;      // per element
    std::vector<Vec3> q;        // per element, q = -grad u

    /// Trace on any face: the unknown, u_D on Dirichlet faces, and for the
    /// Neumann-local form u_e of the adjacent element on Neumann faces.
    std::vector<double> face_trace;
};

/// Throws SolverError on a non-positive tau.
[[nodiscard]] PoissonPrecomp precompute(const Discretisation& d, const PoissonBC& bc, const std::vector<double>& tau);

/// K u_hat = f over interior and Neumann faces. Throws SolverError when the
/// mesh has no Dirichlet face (constants span the kernel).
[[nodiscard]] PoissonSystem assemble(const Discretisation& d, const PoissonPrecomp& pre);

[[nodiscard]] SolveResult solve_trace(const PoissonSystem& sys, SolveOptions opts = {});

[[nodiscard]] PoissonSolution recover(const Discretisation& d, const PoissonPrecomp& pre,
                                      const TraceNumbering& numbering, const std::vector<double>& u_hat);

/// Neumann-local variant: Neumann faces are part of the local problems and the
/// global unknowns live on interior faces only. Throws SolverError naming the
/// element when theta is numerically zero.
[[nodiscard]] PoissonPrecomp nlocal_precompute(const Discretisation& d, const PoissonBC& bc,
                                               const std::vector<double>& tau);
[[nodiscard]] PoissonSystem nlocal_assemble(const Discretisation& d, const PoissonPrecomp& pre);
[[nodiscard]] PoissonSolution nlocal_recover(const Discretisation& d, const PoissonPrecomp& pre,
                                             const TraceNumbering& numbering, const std::vector<double>& u_hat);

/// Turns one Neumann boundary face into a Dirichlet face with the given
/// value, fixing the additive constant of a pure-Neumann problem. Returns the
/// face index, or -1 if the mesh already has a Dirichlet face.
int pin_one_face(Discretisation& d, ScalarField& dirichlet, double value);

struct PoissonOptions {
    PoissonFormulation formulation = PoissonFormulation::dirichlet_local;
    double tau = 3.0;
    /// Pure-Neumann problems: pin the trace on one boundary face to this value.
    std::optional<double> pin;
    SolveOptions solver{};
};

struct PoissonRun {
    PoissonPrecomp pre;
    PoissonSolution solution;
    SolveReport report;
    int n_dof = 0;
    double assembly_seconds = 0.0;  // precompute + assembly + compression
    double recover_seconds = 0.0;
};

/// precompute, assemble, solve and recover in one call.
[[nodiscard]] PoissonRun solve_poisson(Discretisation& d, PoissonBC bc, const PoissonOptions& opts = {});

}  // namespace fcfv
