#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fcfv/geometry.hpp"
#include "fcfv/mms.hpp"

using namespace fcfv;

namespace {

std::vector<Vec3> random_points(int dim, int count, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts(count);
    for (auto& p : pts)
        for (int c = 0; c < dim; ++c) p[c] = u(gen);
    return pts;
}

Vec3 unit(int c)
{
    Vec3 e{};
    e[c] = 1.0;
    return e;
}

constexpr double step = 1e-5;

template <class F>
double dd(const F& f, const Vec3& x, int c)
{
    return (f(x + step * unit(c)) - f(x - step * unit(c))) / (2 * step);
}

template <class F>
double d2(const F& f, const Vec3& x, int c)
{
    const double h = 1e-4;
    return (f(x + h * unit(c)) - 2 * f(x) + f(x - h * unit(c))) / (h * h);
}

}  // namespace

TEST(PoissonMms, ValueAtOrigin)
{
    EXPECT_NEAR(poisson_mms(2).u({0, 0, 0}), std::exp(0.3), 1e-15);
    EXPECT_NEAR(poisson_mms(3).u({0, 0, 0}), std::exp(0.3), 1e-15);
    EXPECT_NEAR(poisson_mms(2).u({0, 0, 0}), 1.3498588, 1e-7);
    EXPECT_THROW((void)poisson_mms(1), ConfigError);
}

TEST(PoissonMms, GradientAndSourceByFiniteDifferences)
{
    for (int dim : {2, 3}) {
        const auto m = poisson_mms(dim);
        const auto u = [&](const Vec3& x) { return m.u(x); };
        for (const auto& x : random_points(dim, 100, 42 + dim)) {
            const Vec3 g = m.grad_u(x);
            double lap = 0.0;
            for (int c = 0; c < dim; ++c) {
                EXPECT_NEAR(g[c], dd(u, x, c), 1e-6 * std::max(1.0, std::abs(g[c])));
                EXPECT_NEAR(m.q(x)[c], -g[c], 1e-15);
                lap += d2(u, x, c);
            }
            if (dim == 2) EXPECT_EQ(g[2], 0.0);
            // second differences with h = 1e-4 carry O(1e-8 / h^2) rounding
            EXPECT_NEAR(m.source(x), -lap, 1e-4 * std::max(1.0, std::abs(lap)));
        }
    }
}

TEST(StokesMms, PointValues)
{
    const auto m = stokes_mms();
    EXPECT_NEAR(m.u({0.5, 0.5, 0})[0], 0.0, 1e-15);
    EXPECT_NEAR(m.u({0.5, 0.5, 0})[1], 0.0, 1e-15);
    for (double y : {0.0, 0.3, 0.9}) EXPECT_NEAR(m.p({0.5, y, 0}), 0.25, 1e-15);
    const Vec3 t = m.traction({0.5, 0.0, 0.0}, {0, -1, 0});
    EXPECT_NEAR(t[0], -0.125, 1e-15);
    EXPECT_NEAR(t[1], 0.25, 1e-15);
}

TEST(StokesMms, DerivativesByFiniteDifferences)
{
    for (double nu : {1.0, 0.1}) {
        const auto m = stokes_mms(nu);
        for (const auto& x : random_points(2, 100, 7)) {
            const Tensor3 G = m.grad_u(x);
            const Tensor3 L = m.L(x);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const auto uj = [&](const Vec3& y) { return m.u(y)[j]; };
                    EXPECT_NEAR(G[i][j], dd(uj, x, i), 1e-6);
                    EXPECT_NEAR(L[i][j], -std::sqrt(nu) * G[i][j], 1e-15);
                }
            EXPECT_NEAR(m.divergence(x), 0.0, 1e-14);
            EXPECT_NEAR(dd([&](const Vec3& y) { return m.u(y)[0]; }, x, 0) + dd([&](const Vec3& y) { return m.u(y)[1]; }, x, 1),
                        0.0, 1e-6);
            const Vec3 s = m.source(x);
            for (int j = 0; j < 2; ++j) {
                const auto uj = [&](const Vec3& y) { return m.u(y)[j]; };
                const double lap = d2(uj, x, 0) + d2(uj, x, 1);
                const double dp = dd([&](const Vec3& y) { return m.p(y); }, x, j);
                EXPECT_NEAR(s[j], -nu * lap + dp, 1e-4 * std::max(1.0, std::abs(s[j])));
            }
            const Vec3 n{0.6, -0.8, 0.0};
            const Vec3 t = m.traction(x, n);
            for (int j = 0; j < 2; ++j) {
                double ref = -m.p(x) * n[j];
                for (int i = 0; i < 2; ++i) ref += nu * n[i] * G[i][j];
                EXPECT_NEAR(t[j], ref, 1e-14);
            }
        }
    }
}

TEST(L2Error, ExactValuesGiveZeroAndOne)
{
    const auto mesh = generate_cartesian(2, 4, ElementKind::triangle);
    const std::vector<double> ones(mesh.elements.size(), 1.0);
    EXPECT_EQ(l2_error_scalar(mesh, ones, [](const Vec3&) { return 1.0; }), 0.0);
    EXPECT_NEAR(l2_error_scalar(mesh, ones, [](const Vec3&) { return 0.0; }), 1.0, 1e-14);
    const auto cube = generate_cartesian(3, 2, ElementKind::prism);
    EXPECT_NEAR(l2_error_scalar(cube, std::vector<double>(cube.elements.size(), 2.0), [](const Vec3&) { return 0.0; }),
                2.0, 1e-14);
    EXPECT_THROW((void)l2_error_scalar(mesh, {1.0}, [](const Vec3&) { return 1.0; }), SolverError);
}

TEST(L2Error, QuadratureIsExactForQuadratics)
{
    for (auto k : {ElementKind::triangle, ElementKind::quadrilateral, ElementKind::tetrahedron, ElementKind::hexahedron,
                   ElementKind::prism, ElementKind::pyramid}) {
        const auto mesh = perturb(generate_cartesian(element_dim(k), 2, k), 0.2, 3);
        double total = 0.0, vol = 0.0;
        for (std::size_t e = 0; e < mesh.elements.size(); ++e)
            for (const auto& qp : element_quadrature(mesh, static_cast<int>(e))) {
                total += qp.weight * qp.x[0] * qp.x[0];
                vol += qp.weight;
            }
        // the perturbation keeps the boundary, so the domain is still the unit box
        EXPECT_NEAR(vol, 1.0, 1e-12) << to_string(k);
        EXPECT_NEAR(total, 1.0 / 3.0, 1e-12) << to_string(k);
    }
}

TEST(L2Error, PiecewiseConstantInterpolantHalves)
{
    const auto f = [](const Vec3& x) { return std::sin(3 * x[0]) + x[1] * x[1]; };
    double prev = 0.0;
    for (int n : {8, 16, 32}) {
        const auto mesh = generate_cartesian(2, n, ElementKind::quadrilateral);
        std::vector<double> v;
        for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
            Vec3 c{};
            for (int id : mesh.elements[e].nodes) c += 0.25 * mesh.nodes[id];
            v.push_back(f(c));
        }
        const double err = l2_error_scalar(mesh, v, f);
        if (prev > 0.0) EXPECT_NEAR(prev / err, 2.0, 0.4) << "n=" << n;
        prev = err;
    }
}

TEST(L2Error, TensorEqualsEntrywise)
{
    const auto mesh = generate_cartesian(2, 3, ElementKind::quadrilateral);
    std::vector<Tensor3> values(mesh.elements.size());
    for (std::size_t e = 0; e < values.size(); ++e) values[e] = {{{1.0 * e, 2.0, 0}, {-1.0, 0.5 * e, 0}, {0, 0, 0}}};
    const auto exact = [](const Vec3& x) { return Tensor3{{{x[0], x[1], 0}, {x[0] * x[1], 1.0, 0}, {0, 0, 0}}}; };
    double sq = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::vector<double> entry;
            for (const auto& t : values) entry.push_back(t[i][j]);
            const double e = l2_error_scalar(mesh, entry, [&](const Vec3& x) { return exact(x)[i][j]; });
            sq += e * e;
        }
    EXPECT_NEAR(l2_error_tensor(mesh, values, exact), std::sqrt(sq), 1e-12);

    std::vector<Vec3> vec(mesh.elements.size(), Vec3{1, 2, 0});
    const double ev = l2_error_vector(mesh, vec, [](const Vec3&) { return Vec3{}; });
    EXPECT_NEAR(ev, std::sqrt(5.0), 1e-13);
}

TEST(L2Error, Homogeneous)
{
    const auto mesh = perturb(generate_cartesian(3, 2, ElementKind::tetrahedron), 0.2, 1);
    const auto f = [](const Vec3& x) { return x[0] * x[1] + x[2]; };
    const std::vector<double> v(mesh.elements.size(), 0.3);
    const auto g = [&](const Vec3& x) { return -2.5 * f(x); };
    std::vector<double> w(v.size(), -2.5 * 0.3);
    EXPECT_NEAR(l2_error_scalar(mesh, w, g), 2.5 * l2_error_scalar(mesh, v, f), 1e-13);
}
