#include "fcfv/mms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcfv/geometry.hpp"

namespace fcfv {

double ManufacturedPoisson::u(const Vec3& x) const
{
    const double A = a * x[0] + c * x[1] + e * x[2];
    const double B = b * x[0] + d * x[1] + f * x[2];
    return std::exp(alpha * std::sin(A) + beta * std::cos(B));
}

Vec3 ManufacturedPoisson::grad_u(const Vec3& x) const
{
    const double A = a * x[0] + c * x[1] + e * x[2];
    const double B = b * x[0] + d * x[1] + f * x[2];
    const double ca = alpha * std::cos(A), sb = beta * std::sin(B);
    const Vec3 grad_phi{ca * a - sb * b, ca * c - sb * d, ca * e - sb * f};
    return u(x) * grad_phi;
}

Vec3 ManufacturedPoisson::q(const Vec3& x) const { return -1.0 * grad_u(x); }

double ManufacturedPoisson::source(const Vec3& x) const
{
    const double A = a * x[0] + c * x[1] + e * x[2];
    const double B = b * x[0] + d * x[1] + f * x[2];
    const double ca = alpha * std::cos(A), sb = beta * std::sin(B);
    const Vec3 grad_phi{ca * a - sb * b, ca * c - sb * d, ca * e - sb * f};
    const double lap_phi = -alpha * std::sin(A) * (a * a + c * c + e * e) - beta * std::cos(B) * (b * b + d * d + f * f);
    return -u(x) * (dot(grad_phi, grad_phi) + lap_phi);
}

ManufacturedPoisson poisson_mms(int dim)
{
    if (dim != 2 && dim != 3) throw ConfigError("poisson_mms: dim must be 2 or 3");
    ManufacturedPoisson m;
    m.dim = dim;
    if (dim == 3) {
        m.e = 1.8;
        m.f = 1.7;
    }
    return m;
}

namespace {

double g0(double x) { return x * x * (1 - x) * (1 - x); }
double g1(double x) { return 2 * x - 6 * x * x + 4 * x * x * x; }
double g2(double x) { return 2 - 12 * x + 12 * x * x; }
double g3(double x) { return -12 + 24 * x; }

}  // namespace

Vec3 ManufacturedStokes::u(const Vec3& x) const { return {g0(x[0]) * g1(x[1]), -g0(x[1]) * g1(x[0]), 0.0}; }

double ManufacturedStokes::p(const Vec3& x) const { return x[0] * (1 - x[0]); }

Tensor3 ManufacturedStokes::grad_u(const Vec3& x) const
{
    Tensor3 G{};
    G[0][0] = g1(x[0]) * g1(x[1]);
    G[0][1] = -g0(x[1]) * g2(x[0]);
    G[1][0] = g0(x[0]) * g2(x[1]);
    G[1][1] = -g1(x[1]) * g1(x[0]);
    return G;
}

Tensor3 ManufacturedStokes::L(const Vec3& x) const
{
    Tensor3 G = grad_u(x);
    const double s = -std::sqrt(viscosity);
    for (auto& row : G)
        for (auto& v : row) v *= s;
    return G;
}

double ManufacturedStokes::divergence(const Vec3& x) const
{
    const Tensor3 G = grad_u(x);
    return G[0][0] + G[1][1];
}

Vec3 ManufacturedStokes::source(const Vec3& x) const
{
    const double lap1 = g2(x[0]) * g1(x[1]) + g0(x[0]) * g3(x[1]);
    const double lap2 = -(g0(x[1]) * g3(x[0]) + g2(x[1]) * g1(x[0]));
    return {-viscosity * lap1 + (1 - 2 * x[0]), -viscosity * lap2, 0.0};
}

Vec3 ManufacturedStokes::traction(const Vec3& x, const Vec3& n) const
{
    const Tensor3 G = grad_u(x);
    const Vec3 t = dot(n, G);
    const double pr = p(x);
    return {viscosity * t[0] - pr * n[0], viscosity * t[1] - pr * n[1], 0.0};
}

ManufacturedStokes stokes_mms(double viscosity)
{
    if (!(viscosity > 0.0)) throw ConfigError("stokes_mms: viscosity must be positive");
    ManufacturedStokes m;
    m.viscosity = viscosity;
    return m;
}

std::vector<QuadraturePoint> element_quadrature(const Mesh& mesh, int element)
{
    std::vector<QuadraturePoint> out;
    for (const auto& s : simplex_decomposition(mesh, element)) {
        const auto& v = s.vertices;
        if (mesh.dim == 2) {
            for (int k = 0; k < 3; ++k) {
                const Vec3 x = (2.0 / 3.0) * v[k] + (1.0 / 6.0) * v[(k + 1) % 3] + (1.0 / 6.0) * v[(k + 2) % 3];
                out.push_back({x, s.volume / 3.0});
            }
        } else {
            constexpr double a = 0.5854101966249685, b = 0.1381966011250105;
            for (int k = 0; k < 4; ++k) {
                Vec3 x{};
                for (int l = 0; l < 4; ++l) x += (l == k ? a : b) * v[l];
                out.push_back({x, s.volume / 4.0});
            }
        }
    }
    return out;
}

namespace {

template <class Discrepancy>
double l2_norm(const Mesh& mesh, Discrepancy&& sq)
{
    double total = 0.0;
    for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
        double local = 0.0;
        for (const auto& qp : element_quadrature(mesh, e)) local += qp.weight * sq(e, qp.x);
        total += local;
    }
    return std::sqrt(std::max(total, 0.0));
}

void check_size(const Mesh& mesh, std::size_t n)
{
    if (n != mesh.elements.size())
        throw SolverError("l2 error: " + std::to_string(n) + " values for " + std::to_string(mesh.elements.size()) +
                          " elements");
}

}  // namespace

double l2_error_scalar(const Mesh& mesh, const std::vector<double>& values,
                       const std::function<double(const Vec3&)>& exact)
{
    check_size(mesh, values.size());
    return l2_norm(mesh, [&](int e, const Vec3& x) {
        const double r = values[e] - exact(x);
        return r * r;
    });
}

double l2_error_vector(const Mesh& mesh, const std::vector<Vec3>& values, const std::function<Vec3(const Vec3&)>& exact)
{
    check_size(mesh, values.size());
    return l2_norm(mesh, [&](int e, const Vec3& x) {
        const Vec3 r = values[e] - exact(x);
        double s = 0.0;
        for (int c = 0; c < mesh.dim; ++c) s += r[c] * r[c];
        return s;
    });
}

double l2_error_tensor(const Mesh& mesh, const std::vector<Tensor3>& values,
                       const std::function<Tensor3(const Vec3&)>& exact)
{
    check_size(mesh, values.size());
    return l2_norm(mesh, [&](int e, const Vec3& x) {
        const Tensor3 t = exact(x);
        double s = 0.0;
        for (int i = 0; i < mesh.dim; ++i)
            for (int j = 0; j < mesh.dim; ++j) {
                const double r = values[e][i][j] - t[i][j];
                s += r * r;
            }
        return s;
    });
}

}  // namespace fcfv
