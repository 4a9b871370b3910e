#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fcfv/mesh.hpp"
#include "fcfv/mesh_io.hpp"
#include "fcfv/poisson.hpp"
#include "fcfv/sparse.hpp"
#include "fcfv/stokes.hpp"

namespace fcfv {

enum class Problem { poisson, stokes };
enum class ExactSolution { mms, constant };

/// Study description; see README for the JSON schema.
struct StudyConfig {
    Problem problem = Problem::poisson;
    PoissonFormulation formulation = PoissonFormulation::dirichlet_local;
    int dim = 2;
    ElementKind element = ElementKind::quadrilateral;
    std::vector<int> levels{4, 8, 16, 32};
    double tau = 3.0;
    std::vector<double> tau_sweep;
    double viscosity = 1.0;
    /// Neumann data on {x_dim = 0}, Dirichlet elsewhere; otherwise all Dirichlet.
    bool neumann_bottom = true;
    double perturb = 0.0;
    std::uint64_t seed = 1;
    double stretch = 1.0;
    ExactSolution solution = ExactSolution::mms;
    double constant_value = 1.0;
    std::optional<std::filesystem::path> mesh_file;
    GmshTagMap mesh_tags;  // physical tag -> boundary tag for .msh files
    SolveOptions solver{};
    std::filesystem::path output = ".";
    bool dump_fields = false;
    int threads = 0;
};

/// Throws ConfigError with the offending key on any schema violation.
[[nodiscard]] StudyConfig parse_config(const nlohmann::json& j);
[[nodiscard]] StudyConfig load_config(const std::filesystem::path& path);

struct StudyRow {
    int level = 0;
    int n = 0;
    double tau = 0.0;
    double h = 0.0;
    int n_elements = 0;
    int n_faces = 0;
    int n_dof = 0;
    std::vector<double> errors;                // aligned with StudyTable::error_names
    std::vector<std::optional<double>> orders;  // empty optional on the first level
    double assembly_time = 0.0;
    double solve_time = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::string status = "ok";
};

struct StudyTable {
    std::vector<std::string> error_names;
    std::vector<StudyRow> rows;
};

/// Header plus one line per row; errors and h as %.5e, times as %.6f.
[[nodiscard]] std::string to_csv(const StudyTable& table);

/// Error names of a problem: Poisson {u, q}, Stokes {u, L, p}.
[[nodiscard]] std::vector<std::string> error_names(Problem p);

/// The mesh of a level: generated, stretched, perturbed and tagged per config.
[[nodiscard]] Mesh build_mesh(const StudyConfig& cfg, int n);

/// One row per level with consecutive-level observed orders. Failures are
/// recorded in the status column and the study continues.
[[nodiscard]] StudyTable run_convergence(const StudyConfig& cfg);

/// One row per (level, tau) with tau from cfg.tau_sweep.
[[nodiscard]] StudyTable run_tau_sweep(const StudyConfig& cfg);

/// Solves levels[0] (or the mesh file) and returns a JSON summary. With
/// dump_fields, writes elements.csv and faces.csv to cfg.output.
[[nodiscard]] nlohmann::json run_single(const StudyConfig& cfg);

/// log(e_prev / e) / log(h_prev / h), empty when undefined.
[[nodiscard]] std::optional<double> observed_order(double e_prev, double e, double h_prev, double h);

}  // namespace fcfv
