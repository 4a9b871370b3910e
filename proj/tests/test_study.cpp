#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "fcfv/study.hpp"

using namespace fcfv;
using nlohmann::json;

namespace {

std::string config_error(const json& j)
{
    try {
        (void)parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

int exit_code(const std::string& cmd)
{
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("fcfv_test_" + name);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(Config, Defaults)
{
    const auto p = parse_config({{"problem", "poisson"}});
    EXPECT_EQ(p.tau, 3.0);
    EXPECT_EQ(p.element, ElementKind::quadrilateral);
    EXPECT_TRUE(p.neumann_bottom);
    EXPECT_FALSE(p.solver.diagonal_scaling);
    const auto s = parse_config({{"problem", "stokes"}, {"element", "triangle"}});
    EXPECT_EQ(s.tau, 10.0);
    EXPECT_TRUE(s.solver.diagonal_scaling);
    EXPECT_EQ(parse_config({{"problem", "poisson"}, {"dim", 3}}).element, ElementKind::hexahedron);
}

TEST(Config, Errors)
{
    EXPECT_NE(config_error({{"problem", "poisson"}, {"levles", {4}}}).find("levles"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"levels", {8, 4}}}).find("levels"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"levels", json::array()}}).find("levels"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"tau_sweep", json::array()}}).find("tau_sweep"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"tau", -1}}).find("tau"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "heat"}}).find("problem"), std::string::npos);
    EXPECT_NE(config_error(json::object()).find("problem"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"dim", 3}, {"element", "triangle"}}).find("element"),
              std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"solver", {{"method", "gmres"}}}}), "");
    EXPECT_NE(config_error({{"problem", "poisson"}, {"solver", {{"precond", "ilu"}}}}).find("solver.precond"),
              std::string::npos);
    EXPECT_NE(config_error({{"problem", "stokes"}, {"formulation", "neumann-local"}}).find("formulation"),
              std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"levels", "four"}}).find("levels"), std::string::npos);
    EXPECT_NE(config_error({{"problem", "poisson"}, {"mesh_tags", {{"1", "wall"}}}}), "");
    EXPECT_NE(config_error({{"problem", "poisson"}, {"mesh_tags", {{"one", "neumann"}}}}).find("mesh_tags"),
              std::string::npos);
}

TEST(Config, MeshTags)
{
    const auto c = parse_config({{"problem", "poisson"}, {"mesh_tags", {{"3", "neumann"}, {"4", "dirichlet"}}}});
    ASSERT_EQ(c.mesh_tags.size(), 2u);
    EXPECT_EQ(c.mesh_tags.at(3), BoundaryTag::neumann);
    EXPECT_EQ(c.mesh_tags.at(4), BoundaryTag::dirichlet);
}

TEST(ObservedOrder, Values)
{
    EXPECT_NEAR(*observed_order(1.0, 0.25, 0.2, 0.1), 2.0, 1e-14);
    EXPECT_FALSE(observed_order(0.0, 0.25, 0.2, 0.1));
    EXPECT_FALSE(observed_order(1.0, 0.5, 0.1, 0.1));
}

TEST(Study, CsvLayoutAndOrders)
{
    const auto cfg = parse_config({{"problem", "poisson"}, {"element", "triangle"}, {"levels", {2, 4, 8}}});
    const auto table = run_convergence(cfg);
    const auto csv = to_csv(table);
    const auto ls = lines(csv);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[0],
              "level,n,tau,h,n_elements,n_faces,n_dof,error_u,error_q,order_u,order_q,assembly_time,solve_time,"
              "iterations,residual,status");
    const auto first = fields(ls[1]);
    ASSERT_EQ(first.size(), 16u);
    EXPECT_EQ(first[0], "1");
    EXPECT_EQ(first[1], "2");
    EXPECT_EQ(first[9], "");
    EXPECT_EQ(first[10], "");
    EXPECT_EQ(first[15], "ok");
    const auto last = fields(ls[3]);
    EXPECT_EQ(last[4], "128");
    EXPECT_NE(last[3].find('e'), std::string::npos);
    EXPECT_FALSE(last[9].empty());
    EXPECT_GT(std::stod(last[9]), 0.5);
    for (const auto& r : table.rows) EXPECT_EQ(r.status, "ok");
}

TEST(Study, DeterministicApartFromTimes)
{
    const auto cfg = parse_config({{"problem", "stokes"}, {"element", "quadrilateral"}, {"levels", {2, 4}}});
    const auto a = run_convergence(cfg);
    const auto b = run_convergence(cfg);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].errors, b.rows[i].errors);
        EXPECT_EQ(a.rows[i].n_dof, b.rows[i].n_dof);
        EXPECT_EQ(a.rows[i].orders, b.rows[i].orders);
    }
}

TEST(Study, SingleLevelHasNoOrders)
{
    const auto table = run_convergence(parse_config({{"problem", "poisson"}, {"levels", {3}}}));
    ASSERT_EQ(table.rows.size(), 1u);
    for (const auto& o : table.rows[0].orders) EXPECT_FALSE(o);
}

TEST(Study, SingleRunMatchesConvergenceRow)
{
    for (const char* problem : {"poisson", "stokes"}) {
        const auto cfg = parse_config({{"problem", problem}, {"element", "triangle"}, {"levels", {6}}});
        const auto summary = run_single(cfg);
        const auto row = run_convergence(cfg).rows.front();
        const auto names = error_names(cfg.problem);
        for (std::size_t k = 0; k < names.size(); ++k)
            EXPECT_EQ(summary["errors"][names[k]].get<double>(), row.errors[k]) << problem;
        EXPECT_EQ(summary["n_dof"], row.n_dof);
        EXPECT_EQ(summary["status"], "ok");
    }
}

TEST(Study, TauSweepRows)
{
    const auto cfg = parse_config({{"problem", "poisson"}, {"levels", {2, 4}}, {"tau_sweep", {1, 10}}});
    const auto t = run_tau_sweep(cfg);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.rows[1].tau, 10.0);
    EXPECT_EQ(t.rows[2].n, 4);
    EXPECT_THROW((void)run_tau_sweep(parse_config({{"problem", "poisson"}})), ConfigError);
}

TEST(Study, ConstantSolutionIsReproduced)
{
    for (const char* problem : {"poisson", "stokes"})
        for (const char* el : {"triangle", "quadrilateral"}) {
            const auto cfg = parse_config({{"problem", problem},
                                           {"element", el},
                                           {"levels", {5}},
                                           {"perturb", 0.2},
                                           {"solution", "constant"},
                                           {"constant_value", 2.0}});
            const auto s = run_single(cfg);
            EXPECT_LE(s["max_element_deviation"].get<double>(), 1e-10) << problem << " " << el;
        }
}

TEST(Study, DumpFields)
{
    const auto dir = scratch("dump");
    auto cfg = parse_config({{"problem", "poisson"}, {"levels", {2}}, {"dump_fields", true}});
    cfg.output = dir;
    (void)run_single(cfg);
    std::ifstream el(dir / "elements.csv");
    std::string header;
    std::getline(el, header);
    EXPECT_EQ(header, "element,x,y,z,volume,u,q_x,q_y,q_z");
    int count = 0;
    for (std::string l; std::getline(el, l);) ++count;
    EXPECT_EQ(count, 4);
    EXPECT_TRUE(std::filesystem::exists(dir / "faces.csv"));
    std::filesystem::remove_all(dir);
}

TEST(Study, MeshFileWithTags)
{
    const auto dir = scratch("meshfile");
    {
        std::ofstream(dir / "square.msh") << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n"
                                             "3 1 1 0\n4 0 1 0\n$EndNodes\n$Elements\n6\n1 1 2 1 1 1 2\n"
                                             "2 1 2 2 2 2 3\n3 1 2 2 3 3 4\n4 1 2 2 4 4 1\n5 2 2 0 1 1 2 3\n"
                                             "6 2 2 0 1 1 3 4\n$EndElements\n";
        std::ofstream(dir / "cfg.json") << R"({"problem":"poisson","mesh":"square.msh","mesh_tags":{"1":"neumann"}})";
    }
    const auto cfg = load_config(dir / "cfg.json");
    EXPECT_EQ(*cfg.mesh_file, dir / "square.msh");
    const auto mesh = build_mesh(cfg, 1);
    EXPECT_EQ(mesh.elements.size(), 2u);
    const auto s = run_single(cfg);
    EXPECT_EQ(s["n_faces"], 5);
    EXPECT_EQ(s["n_dof"], 2);  // the diagonal and the Neumann bottom edge
    std::filesystem::remove_all(dir);
}

TEST(Cli, InvalidConfigExitsWithTwo)
{
    const auto dir = scratch("cli");
    std::ofstream(dir / "bad.json") << R"({"problem":"poisson","levels":[8,4]})";
    std::ofstream(dir / "broken.json") << "{";
    std::ofstream(dir / "good.json") << R"({"problem":"poisson","levels":[2]})";
    const std::string bin = FCFV_BINARY;
    const std::string quiet = " >/dev/null 2>&1";
    EXPECT_EQ(exit_code(bin + " solve --config " + (dir / "bad.json").string() + quiet), 2);
    EXPECT_EQ(exit_code(bin + " converge --config " + (dir / "broken.json").string() + quiet), 2);
    EXPECT_EQ(exit_code(bin + " solve --config " + (dir / "missing.json").string() + quiet), 2);
    EXPECT_EQ(exit_code(bin + " tau-sweep --config " + (dir / "good.json").string() + quiet), 2);
    EXPECT_EQ(exit_code(bin + " solve --config " + (dir / "good.json").string() + " --out " + (dir / "o").string() + quiet),
              0);
    EXPECT_TRUE(std::filesystem::exists(dir / "o" / "summary.json"));
    EXPECT_NE(exit_code(bin + " frobnicate" + quiet), 0);
    std::filesystem::remove_all(dir);
}

TEST(Config, ShippedConfigsParse)
{
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(FCFV_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW((void)load_config(entry.path())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 10);
}
