#include "fcfv/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fcfv/mesh_io.hpp"
#include "fcfv/mms.hpp"
#include "fcfv/parallel.hpp"

namespace fcfv {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* key, T fallback)
{
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: '") + key + "' has the wrong type");
    }
}

Problem parse_problem(const std::string& s)
{
    if (s == "poisson") return Problem::poisson;
    if (s == "stokes") return Problem::stokes;
    throw ConfigError("config: 'problem' must be \"poisson\" or \"stokes\", got \"" + s + "\"");
}

SolveOptions parse_solver(const json& j, bool scale_by_default)
{
    static const std::set<std::string> known{"method", "tol", "max_iter", "direct_threshold", "diagonal_scaling"};
    if (!j.is_object()) throw ConfigError("config: 'solver' must be an object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("config: unknown key 'solver." + k + "'");
    SolveOptions o;
    o.diagonal_scaling = scale_by_default;
    o.method = parse_solve_method(get<std::string>(j, "method", "auto"));
    o.tol = get<double>(j, "tol", o.tol);
    o.max_iter = get<int>(j, "max_iter", o.max_iter);
    o.direct_threshold = get<int>(j, "direct_threshold", o.direct_threshold);
    o.diagonal_scaling = get<bool>(j, "diagonal_scaling", o.diagonal_scaling);
    if (!(o.tol > 0.0)) throw ConfigError("config: 'solver.tol' must be positive");
    if (o.max_iter < 0) throw ConfigError("config: 'solver.max_iter' must be non-negative");
    return o;
}

std::string format_sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string format_fixed(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct LevelOutcome {
    StudyRow row;
    Mesh mesh;
    Discretisation d;
    std::optional<PoissonRun> poisson;
    std::optional<StokesRun> stokes;
    double max_deviation = 0.0;  // constant solution: max |u_e - c|
};

double domain_mean(const Mesh& mesh, const std::function<double(const Vec3&)>& f)
{
    double integral = 0.0, volume = 0.0;
    for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e)
        for (const auto& qp : element_quadrature(mesh, e)) {
            integral += qp.weight * f(qp.x);
            volume += qp.weight;
        }
    return integral / volume;
}

void run_poisson_level(const StudyConfig& cfg, double tau, LevelOutcome& out)
{
    const int dim = cfg.dim;
    PoissonBC bc;
    std::function<double(const Vec3&)> exact_u;
    std::function<Vec3(const Vec3&)> exact_q;
    if (cfg.solution == ExactSolution::mms) {
        const auto m = poisson_mms(dim);
        bc.dirichlet = [m](const Vec3& x) { return m.u(x); };
        bc.neumann = [m, dim](const Vec3& x) { return -m.grad_u(x)[dim - 1]; };
        bc.source = [m](const Vec3& x) { return m.source(x); };
        exact_u = bc.dirichlet;
        exact_q = [m](const Vec3& x) { return m.q(x); };
    } else {
        const double c = cfg.constant_value;
        bc.dirichlet = [c](const Vec3&) { return c; };
        exact_u = bc.dirichlet;
        exact_q = [](const Vec3&) { return Vec3{}; };
    }
    PoissonOptions opts;
    opts.formulation = cfg.formulation;
    opts.tau = tau;
    opts.solver = cfg.solver;
    out.poisson = solve_poisson(out.d, bc, opts);
    const auto& run = *out.poisson;
    auto& row = out.row;
    row.n_dof = run.n_dof;
    row.errors = {l2_error_scalar(out.mesh, run.solution.u, exact_u),
                  l2_error_vector(out.mesh, run.solution.q, exact_q)};
    row.assembly_time = run.assembly_seconds;
    row.solve_time = run.report.seconds;
    row.iterations = run.report.iterations;
    row.residual = run.report.residual;
    if (!run.report.converged) row.status = "solver failed: " + run.report.message;
    if (cfg.solution == ExactSolution::constant)
        for (double u : run.solution.u) out.max_deviation = std::max(out.max_deviation, std::abs(u - cfg.constant_value));
}

void run_stokes_level(const StudyConfig& cfg, double tau, LevelOutcome& out)
{
    if (cfg.dim != 2 && cfg.solution == ExactSolution::mms)
        throw ConfigError("config: the Stokes manufactured solution is two-dimensional");
    StokesBC bc;
    bc.viscosity = cfg.viscosity;
    std::function<Vec3(const Vec3&)> exact_u;
    std::function<Tensor3(const Vec3&)> exact_L;
    std::function<double(const Vec3&)> exact_p;
    if (cfg.solution == ExactSolution::mms) {
        const auto m = stokes_mms(cfg.viscosity);
        bc.dirichlet = [m](const Vec3& x) { return m.u(x); };
        bc.neumann = [m](const Vec3& x) { return m.traction(x, Vec3{0.0, -1.0, 0.0}); };
        bc.source = [m](const Vec3& x) { return m.source(x); };
        exact_u = bc.dirichlet;
        exact_L = [m](const Vec3& x) { return m.L(x); };
        exact_p = [m](const Vec3& x) { return m.p(x); };
    } else {
        const double c = cfg.constant_value;
        bc.dirichlet = [c](const Vec3&) { return Vec3{c, 0.0, 0.0}; };
        exact_u = bc.dirichlet;
        exact_L = [](const Vec3&) { return Tensor3{}; };
        exact_p = [](const Vec3&) { return 0.0; };
    }
    StokesOptions opts;
    opts.tau = tau;
    opts.solver = cfg.solver;
    out.stokes = solve_stokes(out.d, bc, opts);
    const auto& run = *out.stokes;
    if (run.solution.numbering.has_multiplier) {
        const double mean = domain_mean(out.mesh, exact_p);
        exact_p = [p = exact_p, mean](const Vec3& x) { return p(x) - mean; };
    }
    auto& row = out.row;
    row.n_dof = run.n_dof;
    row.errors = {l2_error_vector(out.mesh, run.solution.u, exact_u),
                  l2_error_tensor(out.mesh, run.solution.L, exact_L),
                  l2_error_scalar(out.mesh, run.solution.p, exact_p)};
    row.assembly_time = run.assembly_seconds;
    row.solve_time = run.report.seconds;
    row.iterations = run.report.iterations;
    row.residual = run.report.residual;
    if (!run.report.converged) row.status = "solver failed: " + run.report.message;
    if (cfg.solution == ExactSolution::constant)
        for (const auto& u : run.solution.u) out.max_deviation = std::max(out.max_deviation, norm(u - exact_u(Vec3{})));
}

LevelOutcome run_level(const StudyConfig& cfg, int level, int n, double tau)
{
    LevelOutcome out;
    auto& row = out.row;
    row.level = level;
    row.n = n;
    row.tau = tau;
    row.errors.assign(error_names(cfg.problem).size(), NAN);
    try {
        out.mesh = build_mesh(cfg, n);
        out.d = discretise(out.mesh);
        row.h = out.d.h;
        row.n_elements = static_cast<int>(out.mesh.elements.size());
        row.n_faces = static_cast<int>(out.d.conn.num_faces());
        if (cfg.problem == Problem::poisson) run_poisson_level(cfg, tau, out);
        else run_stokes_level(cfg, tau, out);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        for (char& c : row.status)
            if (c == ',' || c == '\n') c = ';';
    }
    return out;
}

const char* kind_name(FaceKind k)
{
    switch (k) {
        case FaceKind::interior: return "interior";
        case FaceKind::dirichlet: return "dirichlet";
        case FaceKind::neumann: return "neumann";
    }
    return "?";
}

void apply_threads(const StudyConfig& cfg)
{
    if (cfg.threads > 0) set_max_threads(cfg.threads);
}

}  // namespace

std::vector<std::string> error_names(Problem p)
{
    if (p == Problem::poisson) return {"u", "q"};
    return {"u", "L", "p"};
}

StudyConfig parse_config(const json& j)
{
    static const std::set<std::string> known{
        "problem", "formulation", "dim",      "element",  "levels",   "tau",      "tau_sweep",
        "viscosity", "boundary", "perturb",   "seed",     "stretch",  "solution", "constant_value",
        "mesh",    "mesh_tags",   "solver",   "output",   "dump_fields", "threads"};
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("config: unknown key '" + k + "'");

    StudyConfig c;
    if (!j.contains("problem")) throw ConfigError("config: missing 'problem'");
    c.problem = parse_problem(get<std::string>(j, "problem", ""));
    c.formulation = parse_poisson_formulation(get<std::string>(j, "formulation", "dirichlet-local"));
    if (c.problem == Problem::stokes && c.formulation != PoissonFormulation::dirichlet_local)
        throw ConfigError("config: 'formulation' applies to poisson only");
    c.dim = get<int>(j, "dim", 2);
    if (c.dim != 2 && c.dim != 3) throw ConfigError("config: 'dim' must be 2 or 3");
    try {
        c.element = parse_element_kind(get<std::string>(j, "element", c.dim == 2 ? "quadrilateral" : "hexahedron"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: 'element': ") + e.what());
    }
    if (element_dim(c.element) != c.dim)
        throw ConfigError("config: element '" + std::string(to_string(c.element)) + "' is not a " +
                          std::to_string(c.dim) + "D element");
    c.levels = get<std::vector<int>>(j, "levels", c.levels);
    if (c.levels.empty()) throw ConfigError("config: 'levels' must be nonempty");
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
        if (c.levels[i] < 1) throw ConfigError("config: 'levels' entries must be >= 1");
        if (i > 0 && c.levels[i] <= c.levels[i - 1]) throw ConfigError("config: 'levels' must be strictly increasing");
    }
    c.tau = get<double>(j, "tau", c.problem == Problem::poisson ? 3.0 : 10.0);
    if (!(c.tau > 0.0)) throw ConfigError("config: 'tau' must be positive");
    c.tau_sweep = get<std::vector<double>>(j, "tau_sweep", {});
    for (double t : c.tau_sweep)
        if (!(t > 0.0)) throw ConfigError("config: 'tau_sweep' entries must be positive");
    if (j.contains("tau_sweep") && c.tau_sweep.empty()) throw ConfigError("config: 'tau_sweep' must be nonempty");
    c.viscosity = get<double>(j, "viscosity", 1.0);
    if (!(c.viscosity > 0.0)) throw ConfigError("config: 'viscosity' must be positive");
    const auto boundary = get<std::string>(j, "boundary", "neumann-bottom");
    if (boundary == "neumann-bottom") c.neumann_bottom = true;
    else if (boundary == "dirichlet") c.neumann_bottom = false;
    else throw ConfigError("config: 'boundary' must be \"neumann-bottom\" or \"dirichlet\"");
    c.perturb = get<double>(j, "perturb", 0.0);
    if (!(c.perturb >= 0.0)) throw ConfigError("config: 'perturb' must be non-negative");
    c.seed = get<std::uint64_t>(j, "seed", 1);
    c.stretch = get<double>(j, "stretch", 1.0);
    if (!(c.stretch >= 1.0)) throw ConfigError("config: 'stretch' must be >= 1");
    const auto solution = get<std::string>(j, "solution", "mms");
    if (solution == "mms") c.solution = ExactSolution::mms;
    else if (solution == "constant") c.solution = ExactSolution::constant;
    else throw ConfigError("config: 'solution' must be \"mms\" or \"constant\"");
    c.constant_value = get<double>(j, "constant_value", 1.0);
    if (j.contains("mesh")) c.mesh_file = get<std::string>(j, "mesh", "");
    if (j.contains("mesh_tags")) {
        const auto& m = j.at("mesh_tags");
        if (!m.is_object()) throw ConfigError("config: 'mesh_tags' must be an object");
        for (const auto& [k, v] : m.items()) {
            int tag = 0;
            try {
                std::size_t used = 0;
                tag = std::stoi(k, &used);
                if (used != k.size()) throw std::invalid_argument(k);
            } catch (const std::exception&) {
                throw ConfigError("config: 'mesh_tags' key '" + k + "' is not an integer");
            }
            if (!v.is_string()) throw ConfigError("config: 'mesh_tags." + k + "' must be a string");
            try {
                c.mesh_tags[tag] = parse_boundary_tag(v.get<std::string>());
            } catch (const std::exception& e) {
                throw ConfigError("config: 'mesh_tags." + k + "': " + e.what());
            }
        }
    }
    c.solver = parse_solver(j.value("solver", json::object()), c.problem == Problem::stokes);
    c.output = get<std::string>(j, "output", ".");
    c.dump_fields = get<bool>(j, "dump_fields", false);
    c.threads = get<int>(j, "threads", 0);
    if (c.problem == Problem::stokes && c.dim == 3 && c.solution == ExactSolution::mms)
        throw ConfigError("config: the Stokes manufactured solution is two-dimensional");
    return c;
}

StudyConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    auto cfg = parse_config(j);
    if (cfg.mesh_file && cfg.mesh_file->is_relative()) cfg.mesh_file = path.parent_path() / *cfg.mesh_file;
    return cfg;
}

Mesh build_mesh(const StudyConfig& cfg, int n)
{
    // Perturbed triangles are split from the perturbed quadrilateral grid; the
    // nodes and l_min are the same, only the diagonals are chosen afterwards.
    const bool split = !cfg.mesh_file && cfg.element == ElementKind::triangle && cfg.perturb > 0.0;
    Mesh mesh = cfg.mesh_file ? read_mesh(*cfg.mesh_file, cfg.mesh_tags)
                              : generate_cartesian(cfg.dim, n, split ? ElementKind::quadrilateral : cfg.element);
    if (cfg.stretch > 1.0) mesh = stretch(mesh, cfg.stretch);
    if (cfg.perturb > 0.0) mesh = perturb(mesh, cfg.perturb, cfg.seed);
    if (split) mesh = split_quadrilaterals(mesh);
    if (!cfg.mesh_file) {
        mesh = cfg.neumann_bottom ? tag_boundary(std::move(mesh), neumann_on_plane(cfg.dim - 1, 0.0))
                                  : tag_boundary(std::move(mesh), [](const Vec3&) { return BoundaryTag::dirichlet; });
    }
    return mesh;
}

std::optional<double> observed_order(double e_prev, double e, double h_prev, double h)
{
    if (!(e_prev > 0.0) || !(e > 0.0) || !(h_prev > 0.0) || !(h > 0.0) || h_prev == h) return std::nullopt;
    const double r = std::log(e_prev / e) / std::log(h_prev / h);
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

StudyTable run_convergence(const StudyConfig& cfg)
{
    apply_threads(cfg);
    StudyTable table;
    table.error_names = error_names(cfg.problem);
    const std::size_t ne = table.error_names.size();
    for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
        auto row = run_level(cfg, static_cast<int>(l + 1), cfg.levels[l], cfg.tau).row;
        row.orders.assign(ne, std::nullopt);
        if (l > 0) {
            const auto& prev = table.rows.back();
            for (std::size_t k = 0; k < ne; ++k)
                row.orders[k] = observed_order(prev.errors[k], row.errors[k], prev.h, row.h);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

StudyTable run_tau_sweep(const StudyConfig& cfg)
{
    if (cfg.tau_sweep.empty()) throw ConfigError("config: tau-sweep needs a nonempty 'tau_sweep'");
    apply_threads(cfg);
    StudyTable table;
    table.error_names = error_names(cfg.problem);
    for (std::size_t l = 0; l < cfg.levels.size(); ++l)
        for (double tau : cfg.tau_sweep) {
            auto row = run_level(cfg, static_cast<int>(l + 1), cfg.levels[l], tau).row;
            row.orders.assign(table.error_names.size(), std::nullopt);
            table.rows.push_back(std::move(row));
        }
    return table;
}

std::string to_csv(const StudyTable& table)
{
    std::ostringstream out;
    out << "level,n,tau,h,n_elements,n_faces,n_dof";
    for (const auto& e : table.error_names) out << ",error_" << e;
    for (const auto& e : table.error_names) out << ",order_" << e;
    out << ",assembly_time,solve_time,iterations,residual,status\n";
    for (const auto& r : table.rows) {
        out << r.level << ',' << r.n << ',' << r.tau << ',' << format_sci(r.h) << ',' << r.n_elements << ','
            << r.n_faces << ',' << r.n_dof;
        for (double e : r.errors) out << ',' << format_sci(e);
        for (std::size_t k = 0; k < table.error_names.size(); ++k) {
            out << ',';
            if (k < r.orders.size() && r.orders[k]) out << format_fixed(*r.orders[k]);
        }
        out << ',' << format_fixed(r.assembly_time) << ',' << format_fixed(r.solve_time) << ',' << r.iterations << ','
            << format_sci(r.residual) << ',' << r.status << '\n';
    }
    return out.str();
}

json run_single(const StudyConfig& cfg)
{
    apply_threads(cfg);
    const int n = cfg.levels.front();
    auto out = run_level(cfg, 1, n, cfg.tau);
    const auto& row = out.row;
    json summary;
    summary["problem"] = cfg.problem == Problem::poisson ? "poisson" : "stokes";
    if (cfg.problem == Problem::poisson) summary["formulation"] = std::string(to_string(cfg.formulation));
    summary["n"] = n;
    summary["tau"] = row.tau;
    summary["h"] = row.h;
    summary["n_elements"] = row.n_elements;
    summary["n_faces"] = row.n_faces;
    summary["n_dof"] = row.n_dof;
    json errors;
    const auto names = error_names(cfg.problem);
    for (std::size_t k = 0; k < names.size(); ++k) errors[names[k]] = row.errors[k];
    summary["errors"] = errors;
    summary["assembly_time"] = row.assembly_time;
    summary["solve_time"] = row.solve_time;
    summary["status"] = row.status;
    SolveReport report;
    if (out.poisson) report = out.poisson->report;
    if (out.stokes) report = out.stokes->report;
    summary["solver"] = {{"method", std::string(to_string(report.method))},
                         {"converged", report.converged},
                         {"iterations", report.iterations},
                         {"residual", report.residual},
                         {"seconds", report.seconds}};
    if (cfg.solution == ExactSolution::constant) summary["max_element_deviation"] = out.max_deviation;

    if (cfg.dump_fields && (out.poisson || out.stokes)) {
        std::filesystem::create_directories(cfg.output);
        std::ofstream el(cfg.output / "elements.csv");
        std::ofstream fa(cfg.output / "faces.csv");
        el.precision(17);
        fa.precision(17);
        const auto& d = out.d;
        if (out.poisson) {
            const auto& s = out.poisson->solution;
            el << "element,x,y,z,volume,u,q_x,q_y,q_z\n";
            for (std::size_t e = 0; e < s.u.size(); ++e) {
                const auto& c = d.geom[e].centroid;
                el << e << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << d.geom[e].volume << ',' << s.u[e] << ','
                   << s.q[e][0] << ',' << s.q[e][1] << ',' << s.q[e][2] << '\n';
            }
            fa << "face,x,y,z,kind,dof,u_hat\n";
            for (std::size_t f = 0; f < d.conn.num_faces(); ++f) {
                const auto& c = d.face_centroid[f];
                fa << f << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << kind_name(d.conn.kind[f]) << ','
                   << s.numbering.dof(static_cast<int>(f)) << ',' << s.face_trace[f] << '\n';
            }
        } else {
            const auto& s = out.stokes->solution;
            el << "element,x,y,z,volume,u_x,u_y,u_z,p";
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) el << ",L_" << i << k;
            el << '\n';
            for (std::size_t e = 0; e < s.u.size(); ++e) {
                const auto& c = d.geom[e].centroid;
                el << e << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << d.geom[e].volume << ',' << s.u[e][0]
                   << ',' << s.u[e][1] << ',' << s.u[e][2] << ',' << s.p[e];
                for (int i = 0; i < 3; ++i)
                    for (int k = 0; k < 3; ++k) el << ',' << s.L[e][i][k];
                el << '\n';
            }
            fa << "face,x,y,z,kind,dof,u_hat_x,u_hat_y,u_hat_z\n";
            for (std::size_t f = 0; f < d.conn.num_faces(); ++f) {
                const auto& c = d.face_centroid[f];
                const auto& t = s.face_trace[f];
                fa << f << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << kind_name(d.conn.kind[f]) << ','
                   << s.numbering.faces.dof(static_cast<int>(f)) << ',' << t[0] << ',' << t[1] << ',' << t[2] << '\n';
            }
        }
    }
    return summary;
}

}  // namespace fcfv
