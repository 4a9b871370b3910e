#include "fcfv/sparse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "fcfv/types.hpp"

namespace fcfv {

void TripletMatrix::append(const TripletMatrix& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_) throw SolverError("TripletMatrix::append: shape mismatch");
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

std::vector<double> TripletMatrix::multiply(const std::vector<double>& x) const
{
    std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
    for (const auto& t : entries_) y[t.row] += t.value * x[t.col];
    return y;
}

CompressedMatrix compress(const TripletMatrix& t, bool symmetric)
{
    const auto& entries = t.entries();
    for (const auto& e : entries)
        if (e.row < 0 || e.row >= t.rows() || e.col < 0 || e.col >= t.cols())
            throw SolverError("compress: entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                              ") outside a " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + " matrix");

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = entries[a];
        const auto& y = entries[b];
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });

    CompressedMatrix m;
    m.rows_ = t.rows();
    m.cols_ = t.cols();
    m.symmetric_ = symmetric;
    m.row_ptr_.assign(static_cast<std::size_t>(m.rows_) + 1, 0);
    for (std::size_t k = 0; k < order.size();) {
        const auto& first = entries[order[k]];
        double sum = 0.0;
        std::size_t l = k;
        for (; l < order.size() && entries[order[l]].row == first.row && entries[order[l]].col == first.col; ++l)
            sum += entries[order[l]].value;
        m.col_idx_.push_back(first.col);
        m.values_.push_back(sum);
        ++m.row_ptr_[static_cast<std::size_t>(first.row) + 1];
        k = l;
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(m.rows_); ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

double CompressedMatrix::coeff(int row, int col) const
{
    const auto begin = col_idx_.begin() + row_ptr_[row];
    const auto end = col_idx_.begin() + row_ptr_[row + 1];
    const auto it = std::lower_bound(begin, end, col);
    return it != end && *it == col ? values_[static_cast<std::size_t>(it - col_idx_.begin())] : 0.0;
}

std::vector<double> CompressedMatrix::diagonal() const
{
    std::vector<double> d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
    for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = coeff(r, r);
    return d;
}

std::vector<double> CompressedMatrix::multiply(const std::vector<double>& x) const
{
    std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[r] = s;
    }
    return y;
}

double CompressedMatrix::max_asymmetry() const
{
    if (rows_ != cols_) return INFINITY;
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            worst = std::max(worst, std::abs(values_[k] - coeff(col_idx_[k], r)));
    return worst;
}

bool CompressedMatrix::is_symmetric(double tol) const { return max_asymmetry() <= tol; }

std::string_view to_string(SolveMethod m)
{
    switch (m) {
        case SolveMethod::automatic: return "auto";
        case SolveMethod::direct: return "direct";
        case SolveMethod::dense: return "dense";
        case SolveMethod::cg: return "cg";
        case SolveMethod::minres: return "minres";
    }
    return "?";
}

SolveMethod parse_solve_method(std::string_view name)
{
    for (auto m : {SolveMethod::automatic, SolveMethod::direct, SolveMethod::dense, SolveMethod::cg, SolveMethod::minres})
        if (name == to_string(m)) return m;
    throw ConfigError("unknown solver method '" + std::string(name) + "' (auto, direct, dense, cg, minres)");
}

double relative_residual(const CompressedMatrix& A, const std::vector<double>& x, const std::vector<double>& b)
{
    const auto ax = A.multiply(x);
    double r2 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        r2 += (ax[i] - b[i]) * (ax[i] - b[i]);
        b2 += b[i] * b[i];
    }
    return std::sqrt(r2) / std::max(std::sqrt(b2), 1.0);
}

namespace {

using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

RowMatrix to_eigen(const CompressedMatrix& A)
{
    const Eigen::Map<const RowMatrix> map(A.rows(), A.cols(), static_cast<Eigen::Index>(A.nonzeros()),
                                          A.row_ptr().data(), A.col_idx().data(), A.values().data());
    return RowMatrix(map);
}

template <class Solver>
void run_iterative(Solver& solver, const RowMatrix& M, const Eigen::VectorXd& rhs, Eigen::VectorXd& x, double tol,
                   int max_iter, SolveReport& report)
{
    solver.setTolerance(tol);
    solver.setMaxIterations(max_iter);
    solver.compute(M);
    x = solver.solve(rhs);
    report.iterations = static_cast<int>(solver.iterations());
}

}  // namespace

SolveResult solve(const CompressedMatrix& A, const std::vector<double>& b, const SolveOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    SolveResult out;
    auto& report = out.report;
    const int n = A.rows();
    if (A.cols() != n || static_cast<int>(b.size()) != n)
        throw SolverError("solve: expected a square system, got " + std::to_string(A.rows()) + "x" +
                          std::to_string(A.cols()) + " with rhs of size " + std::to_string(b.size()));

    SolveMethod method = opts.method;
    if (method == SolveMethod::automatic) {
        if (n <= opts.direct_threshold) method = SolveMethod::direct;
        else method = opts.definite ? SolveMethod::cg : SolveMethod::minres;
    }
    report.method = method;
    out.x.assign(static_cast<std::size_t>(n), 0.0);

    auto finish = [&]() -> SolveResult {
        report.residual = n == 0 ? 0.0 : relative_residual(A, out.x, b);
        if (!std::isfinite(report.residual)) report.converged = false;
        const bool iterative = method == SolveMethod::cg || method == SolveMethod::minres;
        if (report.converged && (iterative ? report.residual > opts.tol : report.residual > std::max(opts.tol, 1e-8))) {
            report.converged = false;
            report.message = "residual " + std::to_string(report.residual) + " above tolerance";
        }
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(out);
    };

    if (n == 0) {
        report.converged = true;
        return finish();
    }

    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    Eigen::VectorXd x;

    if (method == SolveMethod::dense) {
        const Eigen::MatrixXd D = Eigen::MatrixXd(to_eigen(A));
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
        x = lu.solve(rhs);
        report.converged = x.allFinite() && std::abs(lu.determinant()) > 0.0;
        if (!report.converged) report.message = "singular matrix";
    } else if (method == SolveMethod::direct) {
        ColMatrix M = to_eigen(A);
        M.makeCompressed();
        Eigen::SparseLU<ColMatrix> lu;
        lu.compute(M);
        if (lu.info() != Eigen::Success) {
            report.converged = false;
            report.message = "sparse LU failed: " + lu.lastErrorMessage();
            return finish();
        }
        x = lu.solve(rhs);
        report.converged = lu.info() == Eigen::Success && x.allFinite();
        if (!report.converged) report.message = "singular matrix";
    } else {
        RowMatrix M = to_eigen(A);
        Eigen::VectorXd r = rhs;
        // CG needs a positive definite operator; the FCFV Poisson matrix is negative definite.
        const double sign = method == SolveMethod::cg && M.diagonal().sum() < 0.0 ? -1.0 : 1.0;
        Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
        if (opts.diagonal_scaling) {
            const Eigen::VectorXd d = M.diagonal();
            for (int i = 0; i < n; ++i)
                if (std::abs(d[i]) > 0.0) scale[i] = 1.0 / std::sqrt(std::abs(d[i]));
        }
        M = scale.asDiagonal() * M * scale.asDiagonal();
        if (sign < 0.0) M *= -1.0;
        r = sign * scale.cwiseProduct(r);
        const int max_iter = opts.max_iter > 0 ? opts.max_iter : std::max(10 * n, 1000);
        // Internal stopping criteria are relative to the scaled rhs; tighten and recheck against the true residual.
        const double bnorm = rhs.norm();
        double tol = opts.tol * std::max(bnorm, 1.0) / std::max(r.norm(), 1e-300);
        if (opts.diagonal_scaling) tol *= 0.1;
        tol = std::min(tol, 0.1);
        Eigen::VectorXd y;
        for (int attempt = 0; attempt < 4; ++attempt) {
            int its = 0;
            if (method == SolveMethod::cg) {
                Eigen::ConjugateGradient<RowMatrix, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> cg;
                run_iterative(cg, M, r, y, tol, max_iter, report);
            } else {
                Eigen::MINRES<RowMatrix, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> mr;
                run_iterative(mr, M, r, y, tol, max_iter, report);
            }
            its = report.iterations;
            x = scale.cwiseProduct(y);
            std::copy(x.data(), x.data() + n, out.x.begin());
            const double res = relative_residual(A, out.x, b);
            if (res <= opts.tol || its >= max_iter || !std::isfinite(res)) break;
            tol *= 0.1 * opts.tol / res;
        }
        report.converged = report.iterations < max_iter;
        if (!report.converged) report.message = "no convergence within " + std::to_string(max_iter) + " iterations";
    }
    if (x.size() == n) std::copy(x.data(), x.data() + n, out.x.begin());
    return finish();
}

void write_matrix_market(const CompressedMatrix& A, std::ostream& out)
{
    const bool sym = A.symmetric();
    std::size_t count = 0;
    for (int r = 0; r < A.rows(); ++r)
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
            if (!sym || A.col_idx()[k] <= r) ++count;
    out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
    out << A.rows() << ' ' << A.cols() << ' ' << count << '\n';
    out.precision(17);
    for (int r = 0; r < A.rows(); ++r)
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
            if (!sym || A.col_idx()[k] <= r) out << r + 1 << ' ' << A.col_idx()[k] + 1 << ' ' << A.values()[k] << '\n';
}

}  // namespace fcfv
