#pragma once

#include <functional>
#include <vector>

#include "fcfv/discretisation.hpp"

namespace fcfv {

/// u = exp(alpha sin(a x + c y + e z) + beta cos(b x + d y + f z)).
/// In 2D e = f = 0.
struct ManufacturedPoisson {
    int dim = 2;
    double alpha = 0.1, beta = 0.3;
    double a = 5.1, b = 4.3, c = -6.2, d = 3.4, e = 0.0, f = 0.0;

    [[nodiscard]] double u(const Vec3& x) const;
    [[nodiscard]] Vec3 grad_u(const Vec3& x) const;
    [[nodiscard]] Vec3 q(const Vec3& x) const;  // -grad u
    [[nodiscard]] double source(const Vec3& x) const;  // -lap u
};

[[nodiscard]] ManufacturedPoisson poisson_mms(int dim);

/// 2D flow on the unit square with g(x) = x^2 (1-x)^2:
/// u1 = g(x) g'(y), u2 = -g(y) g'(x), p = x (1-x).
struct ManufacturedStokes {
    double viscosity = 1.0;

    [[nodiscard]] Vec3 u(const Vec3& x) const;
    [[nodiscard]] double p(const Vec3& x) const;
    /// (grad u)_ij = d_i u_j.
    [[nodiscard]] Tensor3 grad_u(const Vec3& x) const;
    [[nodiscard]] Tensor3 L(const Vec3& x) const;  // -sqrt(nu) grad u
    [[nodiscard]] double divergence(const Vec3& x) const;
    [[nodiscard]] Vec3 source(const Vec3& x) const;  // -nu lap u + grad p
    /// n . (nu grad u - p I).
    [[nodiscard]] Vec3 traction(const Vec3& x, const Vec3& n) const;
};

[[nodiscard]] ManufacturedStokes stokes_mms(double viscosity = 1.0);

/// sqrt(sum_e int_{O_e} |v_e - exact(x)|^2 dx) using a degree-2 rule on the
/// simplex decomposition of every element (3-point triangle, 4-point tet).
[[nodiscard]] double l2_error_scalar(const Mesh& mesh, const std::vector<double>& values,
                                     const std::function<double(const Vec3&)>& exact);
[[nodiscard]] double l2_error_vector(const Mesh& mesh, const std::vector<Vec3>& values,
                                     const std::function<Vec3(const Vec3&)>& exact);
[[nodiscard]] double l2_error_tensor(const Mesh& mesh, const std::vector<Tensor3>& values,
                                     const std::function<Tensor3(const Vec3&)>& exact);

/// Quadrature points and weights for the degree-2 rule on element e.
struct QuadraturePoint {
    Vec3 x;
    double weight;
};
[[nodiscard]] std::vector<QuadraturePoint> element_quadrature(const Mesh& mesh, int element);

}  // namespace fcfv
