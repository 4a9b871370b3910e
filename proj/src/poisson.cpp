#include "fcfv/poisson.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "fcfv/parallel.hpp"

namespace fcfv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double sample(const ScalarField& f, const Vec3& x) { return f ? f(x) : 0.0; }

void check_tau(const Discretisation& d, const std::vector<double>& tau)
{
    if (tau.size() != d.conn.num_faces())
        throw SolverError("tau has " + std::to_string(tau.size()) + " entries for " +
                          std::to_string(d.conn.num_faces()) + " faces");
    for (std::size_t f = 0; f < tau.size(); ++f)
        if (!(tau[f] > 0.0)) throw SolverError("tau must be positive (face " + std::to_string(f) + ")");
}

void require_dirichlet(const Discretisation& d)
{
    if (d.conn.count(FaceKind::dirichlet) == 0)
        throw SolverError("pure Neumann Poisson problem: the solution is only defined up to a constant; "
                          "add a Dirichlet face or pin one face");
}

PoissonPrecomp sample_data(const Discretisation& d, const PoissonBC& bc, const std::vector<double>& tau)
{
    check_tau(d, tau);
    PoissonPrecomp pre;
    pre.tau = tau;
    const auto nf = d.conn.num_faces();
    const auto ne = d.geom.size();
    pre.face_data.assign(nf, 0.0);
    for (std::size_t f = 0; f < nf; ++f) {
        if (d.conn.kind[f] == FaceKind::dirichlet) pre.face_data[f] = sample(bc.dirichlet, d.face_centroid[f]);
        else if (d.conn.kind[f] == FaceKind::neumann) pre.face_data[f] = sample(bc.neumann, d.face_centroid[f]);
    }
    pre.source.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) pre.source[e] = sample(bc.source, d.geom[e].centroid);
    pre.alpha.assign(ne, 0.0);
    pre.beta.assign(ne, 0.0);
    pre.z.assign(ne, Vec3{});
    return pre;
}

/// Per-chunk assembly buffers, merged in chunk order.
struct Buffers {
    std::vector<TripletMatrix> K;
    std::vector<std::vector<std::pair<int, double>>> f;
};

PoissonSystem merge(Buffers& buf, TraceNumbering numbering)
{
    PoissonSystem sys;
    const int n = numbering.size();
    sys.K = TripletMatrix(n, n);
    sys.f.assign(static_cast<std::size_t>(n), 0.0);
    std::size_t total = 0;
    for (const auto& k : buf.K) total += k.entries().size();
    sys.K.reserve(total);
    for (std::size_t c = 0; c < buf.K.size(); ++c) {
        sys.K.append(buf.K[c]);
        for (const auto& [row, v] : buf.f[c]) sys.f[static_cast<std::size_t>(row)] += v;
    }
    sys.numbering = std::move(numbering);
    return sys;
}

template <class Contribution>
PoissonSystem assemble_with(const Discretisation& d, TraceNumbering numbering, Contribution&& contribution)
{
    const int ne = static_cast<int>(d.geom.size());
    const int n = numbering.size();
    Buffers buf;
    const int chunks = chunk_count(ne);
    buf.K.assign(static_cast<std::size_t>(chunks), TripletMatrix(n, n));
    buf.f.resize(static_cast<std::size_t>(chunks));
    parallel_for(ne, [&](int c, int begin, int end) {
        for (int e = begin; e < end; ++e) contribution(e, buf.K[c], buf.f[c]);
    });
    return merge(buf, std::move(numbering));
}

void fill_face_trace(const Discretisation& d, const PoissonPrecomp& pre, PoissonSolution& sol)
{
    sol.face_trace.assign(d.conn.num_faces(), 0.0);
    for (std::size_t f = 0; f < d.conn.num_faces(); ++f) {
        const int dof = sol.numbering.dof(static_cast<int>(f));
        if (dof >= 0) sol.face_trace[f] = sol.u_hat[static_cast<std::size_t>(dof)];
        else if (d.conn.kind[f] == FaceKind::dirichlet) sol.face_trace[f] = pre.face_data[f];
        else sol.face_trace[f] = sol.u[static_cast<std::size_t>(d.conn.face_elements[f][0].element)];
    }
}

}  // namespace

std::string_view to_string(PoissonFormulation f)
{
    return f == PoissonFormulation::dirichlet_local ? "dirichlet-local" : "neumann-local";
}

PoissonFormulation parse_poisson_formulation(std::string_view name)
{
    if (name == "dirichlet-local") return PoissonFormulation::dirichlet_local;
    if (name == "neumann-local") return PoissonFormulation::neumann_local;
    throw ConfigError("unknown formulation '" + std::string(name) + "' (dirichlet-local, neumann-local)");
}

PoissonPrecomp precompute(const Discretisation& d, const PoissonBC& bc, const std::vector<double>& tau)
{
    PoissonPrecomp pre = sample_data(d, bc, tau);
    pre.formulation = PoissonFormulation::dirichlet_local;
    parallel_for(static_cast<int>(d.geom.size()), [&](int, int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            double alpha = 0.0, beta = g.volume * pre.source[e];
            Vec3 z{};
            for (std::size_t j = 0; j < ef.size(); ++j) {
                const int f = ef[j];
                const double a = g.faces[j].area;
                alpha += a * pre.tau[f];
                if (d.conn.kind[f] == FaceKind::dirichlet) {
                    beta += a * pre.tau[f] * pre.face_data[f];
                    z += (a * pre.face_data[f]) * g.faces[j].normal;
                }
            }
            pre.alpha[e] = alpha;
            pre.beta[e] = beta;
            pre.z[e] = z;
        }
    });
    return pre;
}

PoissonSystem assemble(const Discretisation& d, const PoissonPrecomp& pre)
{
    require_dirichlet(d);
    const TraceNumbering numbering = number_traces(d.conn, true);
    return assemble_with(d, numbering, [&](int e, TripletMatrix& K, auto& f) {
        const auto& g = d.geom[e];
        const auto& ef = d.conn.element_faces[e];
        const double alpha = pre.alpha[e], vol = g.volume;
        const auto B = d.conn.local_set(e, FaceSet::non_dirichlet);
        for (int i : B) {
            const int fi = ef[i];
            const auto& gi = g.faces[i];
            const double ti = pre.tau[fi];
            const int row = numbering.dof(fi);
            const double neumann = d.conn.kind[fi] == FaceKind::neumann ? pre.face_data[fi] : 0.0;
            f.emplace_back(row, gi.area * (dot(gi.normal, pre.z[e]) / vol - neumann - pre.beta[e] * ti / alpha));
            for (int j : B) {
                const int fj = ef[j];
                const auto& gj = g.faces[j];
                double k = gj.area * ti * pre.tau[fj] / alpha - gj.area * dot(gi.normal, gj.normal) / vol;
                if (i == j) k -= ti;
                K.add(row, numbering.dof(fj), gi.area * k);
            }
        }
    });
}

SolveResult solve_trace(const PoissonSystem& sys, SolveOptions opts)
{
    opts.definite = true;
    return solve(compress(sys.K, true), sys.f, opts);
}

PoissonSolution recover(const Discretisation& d, const PoissonPrecomp& pre, const TraceNumbering& numbering,
                        const std::vector<double>& u_hat)
{
    if (static_cast<int>(u_hat.size()) != numbering.size())
        throw SolverError("recover: expected " + std::to_string(numbering.size()) + " trace values, got " +
                          std::to_string(u_hat.size()));
    const int ne = static_cast<int>(d.geom.size());
    PoissonSolution sol;
    sol.numbering = numbering;
    sol.u_hat = u_hat;
    sol.u.assign(static_cast<std::size_t>(ne), 0.0);
    sol.q.assign(static_cast<std::size_t>(ne), Vec3{});
    parallel_for(ne, [&](int, int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            Vec3 flux = pre.z[e];
            double u = pre.beta[e];
            for (int j : d.conn.local_set(e, FaceSet::non_dirichlet)) {
                const int fj = ef[j];
                const double uh = u_hat[static_cast<std::size_t>(numbering.dof(fj))];
                flux += (g.faces[j].area * uh) * g.faces[j].normal;
                u += g.faces[j].area * pre.tau[fj] * uh;
            }
            sol.q[e] = (-1.0 / g.volume) * flux;
            sol.u[e] = u / pre.alpha[e];
        }
    });
    fill_face_trace(d, pre, sol);
    return sol;
}

PoissonPrecomp nlocal_precompute(const Discretisation& d, const PoissonBC& bc, const std::vector<double>& tau)
{
    PoissonPrecomp pre = sample_data(d, bc, tau);
    pre.formulation = PoissonFormulation::neumann_local;
    const auto ne = d.geom.size();
    pre.w.assign(ne, Vec3{});
    pre.theta.assign(ne, 0.0);
    const double max_tau = *std::max_element(tau.begin(), tau.end());
    parallel_for(static_cast<int>(ne), [&](int, int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            double alpha = 0.0, beta = g.volume * pre.source[e];
            Vec3 z{}, w{};
            for (std::size_t j = 0; j < ef.size(); ++j) {
                const int f = ef[j];
                const double a = g.faces[j].area;
                switch (d.conn.kind[f]) {
                    case FaceKind::neumann:
                        beta += a * pre.face_data[f];
                        w += a * g.faces[j].normal;
                        break;
                    case FaceKind::dirichlet:
                        alpha += a * pre.tau[f];
                        beta += a * pre.tau[f] * pre.face_data[f];
                        z += (a * pre.face_data[f]) * g.faces[j].normal;
                        break;
                    case FaceKind::interior: alpha += a * pre.tau[f]; break;
                }
            }
            const double theta = dot(w, w) + g.volume * alpha;
            if (std::abs(theta) < 1e-14 * g.volume * max_tau)
                throw SolverError("element " + std::to_string(e) + ": singular Neumann-local problem");
            pre.alpha[e] = alpha;
            pre.beta[e] = beta;
            pre.z[e] = z;
            pre.w[e] = w;
            pre.theta[e] = theta;
        }
    });
    return pre;
}

namespace {

/// u_e = u0 + sum_M U_j u_hat_j for the Neumann-local problem of element e.
struct NlocalCoefficients {
    double u0;
    std::vector<double> U;  // aligned with the interior local faces
};

NlocalCoefficients nlocal_coefficients(const Discretisation& d, const PoissonPrecomp& pre, int e,
                                       const std::vector<int>& M)
{
    const auto& g = d.geom[e];
    const auto& ef = d.conn.element_faces[e];
    const Vec3& w = pre.w[e];
    NlocalCoefficients c;
    c.u0 = (g.volume * pre.beta[e] - dot(w, pre.z[e])) / pre.theta[e];
    c.U.reserve(M.size());
    for (int j : M)
        c.U.push_back(g.faces[j].area * (g.volume * pre.tau[ef[j]] - dot(w, g.faces[j].normal)) / pre.theta[e]);
    return c;
}

}  // namespace

PoissonSystem nlocal_assemble(const Discretisation& d, const PoissonPrecomp& pre)
{
    require_dirichlet(d);
    if (pre.formulation != PoissonFormulation::neumann_local)
        throw SolverError("nlocal_assemble needs nlocal_precompute data");
    const TraceNumbering numbering = number_traces(d.conn, false);
    return assemble_with(d, numbering, [&](int e, TripletMatrix& K, auto& f) {
        const auto& g = d.geom[e];
        const auto& ef = d.conn.element_faces[e];
        const double vol = g.volume;
        const Vec3& w = pre.w[e];
        const auto M = d.conn.local_set(e, FaceSet::interior);
        const auto c = nlocal_coefficients(d, pre, e, M);
        for (std::size_t a = 0; a < M.size(); ++a) {
            const int i = M[a];
            const int fi = ef[i];
            const auto& gi = g.faces[i];
            const double ti = pre.tau[fi];
            const int row = numbering.dof(fi);
            f.emplace_back(row, gi.area * (dot(gi.normal, pre.z[e] + c.u0 * w) / vol - ti * c.u0));
            for (std::size_t b = 0; b < M.size(); ++b) {
                const int j = M[b];
                const auto& gj = g.faces[j];
                double k = -dot(gi.normal, gj.area * gj.normal + c.U[b] * w) / vol + ti * c.U[b];
                if (a == b) k -= ti;
                K.add(row, numbering.dof(ef[j]), gi.area * k);
            }
        }
    });
}

PoissonSolution nlocal_recover(const Discretisation& d, const PoissonPrecomp& pre, const TraceNumbering& numbering,
                               const std::vector<double>& u_hat)
{
    if (static_cast<int>(u_hat.size()) != numbering.size())
        throw SolverError("nlocal_recover: expected " + std::to_string(numbering.size()) + " trace values, got " +
                          std::to_string(u_hat.size()));
    const int ne = static_cast<int>(d.geom.size());
    PoissonSolution sol;
    sol.numbering = numbering;
    sol.u_hat = u_hat;
    sol.u.assign(static_cast<std::size_t>(ne), 0.0);
    sol.q.assign(static_cast<std::size_t>(ne), Vec3{});
    parallel_for(ne, [&](int, int begin, int end) {
        for (int e = begin; e < end; ++e) {
            const auto& g = d.geom[e];
            const auto& ef = d.conn.element_faces[e];
            const auto M = d.conn.local_set(e, FaceSet::interior);
            const auto c = nlocal_coefficients(d, pre, e, M);
            double u = c.u0;
            Vec3 flux = pre.z[e];
            for (std::size_t b = 0; b < M.size(); ++b) {
                const int j = M[b];
                const double uh = u_hat[static_cast<std::size_t>(numbering.dof(ef[j]))];
                u += c.U[b] * uh;
                flux += (g.faces[j].area * uh) * g.faces[j].normal;
            }
            flux += u * pre.w[e];
            sol.u[e] = u;
            sol.q[e] = (-1.0 / g.volume) * flux;
        }
    });
    fill_face_trace(d, pre, sol);
    return sol;
}

int pin_one_face(Discretisation& d, ScalarField& dirichlet, double value)
{
    if (d.conn.count(FaceKind::dirichlet) > 0) return -1;
    for (std::size_t f = 0; f < d.conn.num_faces(); ++f)
        if (d.conn.kind[f] == FaceKind::neumann) {
            d.conn.kind[f] = FaceKind::dirichlet;
            dirichlet = [value](const Vec3&) { return value; };
            return static_cast<int>(f);
        }
    throw SolverError("pin_one_face: the mesh has no boundary face");
}

PoissonRun solve_poisson(Discretisation& d, PoissonBC bc, const PoissonOptions& opts)
{
    if (opts.pin) pin_one_face(d, bc.dirichlet, *opts.pin);
    PoissonRun run;
    const auto t0 = Clock::now();
    const auto tau = uniform_tau(d.conn, opts.tau);
    const bool nlocal = opts.formulation == PoissonFormulation::neumann_local;
    run.pre = nlocal ? nlocal_precompute(d, bc, tau) : precompute(d, bc, tau);
    const PoissonSystem sys = nlocal ? nlocal_assemble(d, run.pre) : assemble(d, run.pre);
    SolveOptions so = opts.solver;
    so.definite = true;
    const CompressedMatrix K = compress(sys.K, true);
    run.assembly_seconds = seconds_since(t0);
    run.n_dof = K.rows();
    auto result = solve(K, sys.f, so);
    run.report = result.report;
    const auto t1 = Clock::now();
    run.solution = nlocal ? nlocal_recover(d, run.pre, sys.numbering, result.x)
                          : recover(d, run.pre, sys.numbering, result.x);
    run.recover_seconds = seconds_since(t1);
    return run;
}

}  // namespace fcfv
