#include "fcfv/stokes.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "fcfv/parallel.hpp"

namespace fcfv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Vec3 sample(const VectorField& f, const Vec3& x) { return f ? f(x) : Vec3{}; }

Tensor3 add(const Tensor3& a, const Tensor3& b)
{
    Tensor3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

}  // namespace

StokesPrecomp precompute(const Discretisation& d, const StokesBC& bc, const std::vector<double>& tau)
{
    if (!(bc.viscosity > 0.0)) throw SolverError("viscosity must be positive");
    if (tau.size() != d.conn.num_faces())
        throw SolverError("tau has " + std::to_string(tau.size()) + " entries for " +
                          std::to_string(d.conn.num_faces()) + " faces");
    for (std::size_t f = 0; f < tau.size(); ++f)
        if (!(tau[f] > 0.0)) throw SolverError("tau must be positive (face " + std::to_string(f) + ")");

    StokesPrecomp pre;
    pre.dim = d.dim;
    pre.viscosity = bc.viscosity;
    pre.tau = tau;
    const auto nf = d.conn.num_faces();
    const auto ne = d.geom.size();
    pre.face_data.assign(nf, Vec3{});
    for (std::size_t f = 0; f < nf; ++f) {
        if (d.conn.kind[f] == FaceKind::dirichlet) pre.face_data[f] = sample(bc.dirichlet, d.face_centroid[f]);
        else if (d.conn.kind[f] == FaceKind::neumann) pre.face_data[f] = sample(bc.neumann, d.face_centroid[f]);
        if (d.dim == 2) pre.face_data[f][2] = 0.0;
    }
    pre.source.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        pre.source[e] = sample(bc.source, d.geom[e].centroid);
        if (d.dim == 2) pre.source[e][2] = 0.0;
    }
    pre.alpha.assign(ne, 0.0);
    pre.beta.assign(ne, Vec3{});
    pre.Z.assign(ne, Tensor3{});
    parallel_for(static_cast<int>(ne), [&](int, int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            double alpha = 0.0;
            Vec3 beta = g.volume * pre.source[e];
            Tensor3 Z{};
            for (std::size_t j = 0; j < ef.size(); ++j) {
                const int f = ef[j];
                const double a = g.faces[j].area;
                alpha += a * pre.tau[f];
                if (d.conn.kind[f] == FaceKind::dirichlet) {
                    beta += (a * pre.tau[f]) * pre.face_data[f];
                    Z = add(Z, outer(a * g.faces[j].normal, pre.face_data[f]));
                }
            }
            pre.alpha[e] = alpha;
            pre.beta[e] = beta;
            pre.Z[e] = Z;
        }
    });
    return pre;
}

StokesSystem assemble(const Discretisation& d, const StokesPrecomp& pre)
{
    const int dim = d.dim;
    const int ne = static_cast<int>(d.geom.size());
    const double nu = pre.viscosity;

    StokesNumbering num;
    num.dim = dim;
    num.faces = number_traces(d.conn, true);
    num.n_elements = ne;
    num.has_multiplier = d.conn.count(FaceKind::neumann) == 0;
    const int n = num.size();

    const int chunks = chunk_count(ne);
    std::vector<TripletMatrix> K(static_cast<std::size_t>(chunks), TripletMatrix(n, n));
    std::vector<std::vector<std::pair<int, double>>> F(static_cast<std::size_t>(chunks));
    std::vector<double> f_rho(static_cast<std::size_t>(ne), 0.0);
    std::vector<double> flux_scale(static_cast<std::size_t>(ne), 0.0);

    parallel_for(ne, [&](int c, int begin, int end) {
        auto& Kc = K[c];
        auto& Fc = F[c];
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            const double alpha = pre.alpha[e], vol = g.volume;
            const int pe = num.pressure(e);

            for (int j : d.conn.local_set(e, FaceSet::dirichlet)) {
                const auto& gj = g.faces[j];
                const Vec3& uD = pre.face_data[ef[j]];
                f_rho[e] -= gj.area * dot(uD, gj.normal);
                flux_scale[e] += gj.area * norm(uD);
            }

            const auto B = d.conn.local_set(e, FaceSet::non_dirichlet);
            for (int i : B) {
                const int fi = ef[i];
                const auto& gi = g.faces[i];
                const double ti = pre.tau[fi];
                const int di = num.faces.dof(fi);
                const Vec3 nZ = dot(gi.normal, pre.Z[e]);
                const bool neumann = d.conn.kind[fi] == FaceKind::neumann;
                for (int comp = 0; comp < dim; ++comp) {
                    const int row = num.velocity(di, comp);
                    const double t = neumann ? pre.face_data[fi][comp] : 0.0;
                    Fc.emplace_back(row, gi.area * (nu * nZ[comp] / vol - t - ti * pre.beta[e][comp] / alpha));
                    Kc.add(row, pe, gi.area * gi.normal[comp]);
                    Kc.add(pe, row, gi.area * gi.normal[comp]);
                }
                for (int j : B) {
                    const int fj = ef[j];
                    const auto& gj = g.faces[j];
                    double k = gj.area * ti * pre.tau[fj] / alpha - nu * gj.area * dot(gi.normal, gj.normal) / vol;
                    if (i == j) k -= ti;
                    const int dj = num.faces.dof(fj);
                    for (int comp = 0; comp < dim; ++comp)
                        Kc.add(num.velocity(di, comp), num.velocity(dj, comp), gi.area * k);
                }
            }
            Fc.emplace_back(pe, f_rho[e]);
            if (num.has_multiplier) {
                Kc.add(pe, num.multiplier(), vol);
                Kc.add(num.multiplier(), pe, vol);
            }
        }
    });

    if (num.has_multiplier) {
        double net = 0.0, scale = 0.0;
        for (int e = 0; e < ne; ++e) {
            net += f_rho[e];
            scale += flux_scale[e];
        }
        if (std::abs(net) > 1e-10 * scale)
            throw SolverError("Dirichlet velocity data violates the compatibility condition: net boundary flux " +
                              std::to_string(-net));
    }

    StokesSystem sys;
    sys.K = TripletMatrix(n, n);
    sys.f.assign(static_cast<std::size_t>(n), 0.0);
    for (int c = 0; c < chunks; ++c) {
        sys.K.append(K[c]);
        for (const auto& [row, v] : F[c]) sys.f[static_cast<std::size_t>(row)] += v;
    }
    sys.numbering = std::move(num);
    return sys;
}

SolveResult solve_trace(const StokesSystem& sys, SolveOptions opts)
{
    opts.definite = false;
    return solve(compress(sys.K, true), sys.f, opts);
}

StokesSolution recover(const Discretisation& d, const StokesPrecomp& pre, const StokesNumbering& numbering,
                       const std::vector<double>& x)
{
    if (static_cast<int>(x.size()) != numbering.size())
        throw SolverError("recover: expected " + std::to_string(numbering.size()) + " unknowns, got " +
                          std::to_string(x.size()));
    const int dim = d.dim;
    const int ne = static_cast<int>(d.geom.size());
    const double sqrt_nu = std::sqrt(pre.viscosity);

    StokesSolution sol;
    sol.numbering = numbering;
    sol.u_hat.assign(static_cast<std::size_t>(numbering.faces.size()), Vec3{});
    for (int k = 0; k < numbering.faces.size(); ++k)
        for (int c = 0; c < dim; ++c) sol.u_hat[k][c] = x[static_cast<std::size_t>(numbering.velocity(k, c))];
    sol.rho.resize(static_cast<std::size_t>(ne));
    for (int e = 0; e < ne; ++e) sol.rho[e] = x[static_cast<std::size_t>(numbering.pressure(e))];

    sol.face_trace.assign(d.conn.num_faces(), Vec3{});
    for (std::size_t f = 0; f < d.conn.num_faces(); ++f) {
        const int dof = numbering.faces.dof(static_cast<int>(f));
        sol.face_trace[f] = dof >= 0 ? sol.u_hat[static_cast<std::size_t>(dof)] : pre.face_data[f];
    }

    sol.L.assign(static_cast<std::size_t>(ne), Tensor3{});
    sol.u.assign(static_cast<std::size_t>(ne), Vec3{});
    sol.p = sol.rho;
    parallel_for(ne, [&](int, int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            Tensor3 G = pre.Z[e];
            Vec3 u = pre.beta[e];
            for (int j : d.conn.local_set(e, FaceSet::non_dirichlet)) {
                const int fj = ef[j];
                const Vec3& uh = sol.face_trace[static_cast<std::size_t>(fj)];
                G = add(G, outer(g.faces[j].area * g.faces[j].normal, uh));
                u += (g.faces[j].area * pre.tau[fj]) * uh;
            }
            for (auto& row : G)
                for (auto& v : row) v *= -sqrt_nu / g.volume;
            sol.L[e] = G;
            sol.u[e] = (1.0 / pre.alpha[e]) * u;
        }
    });
    return sol;
}

Vec3 face_traction(const Discretisation& d, const StokesPrecomp& pre, const StokesSolution& sol, int face)
{
    if (!d.conn.is_boundary(face)) throw SolverError("face " + std::to_string(face) + " is not a boundary face");
    const auto side = d.conn.face_elements[static_cast<std::size_t>(face)][0];
    const auto& fg = d.geom[static_cast<std::size_t>(side.element)].faces[static_cast<std::size_t>(side.local)];
    const double sqrt_nu = std::sqrt(pre.viscosity);
    const int e = side.element;
    const Vec3 nL = dot(fg.normal, sol.L[e]);
    const Vec3 jump = sol.u[e] - sol.face_trace[static_cast<std::size_t>(face)];
    Vec3 t{};
    for (int c = 0; c < d.dim; ++c)
        t[c] = -(sqrt_nu * nL[c] + sol.p[e] * fg.normal[c] + pre.tau[face] * jump[c]);
    return t;
}

Vec3 boundary_traction(const Discretisation& d, const StokesPrecomp& pre, const StokesSolution& sol,
                       const std::vector<int>& faces)
{
    Vec3 force{};
    for (int f : faces) {
        const auto side = d.conn.face_elements[static_cast<std::size_t>(f)][0];
        const double area = d.geom[static_cast<std::size_t>(side.element)].faces[static_cast<std::size_t>(side.local)].area;
        force += area * face_traction(d, pre, sol, f);
    }
    return force;
}

StokesRun solve_stokes(const Discretisation& d, const StokesBC& bc, const StokesOptions& opts)
{
    StokesRun run;
    const auto t0 = Clock::now();
    run.pre = precompute(d, bc, uniform_tau(d.conn, opts.tau));
    const StokesSystem sys = assemble(d, run.pre);
    const CompressedMatrix K = compress(sys.K, true);
    run.assembly_seconds = seconds_since(t0);
    run.n_dof = K.rows();
    SolveOptions so = opts.solver;
    so.definite = false;
    auto result = solve(K, sys.f, so);
    run.report = result.report;
    const auto t1 = Clock::now();
    run.solution = recover(d, run.pre, sys.numbering, result.x);
    run.recover_seconds = seconds_since(t1);
    return run;
}

}  // namespace fcfv
