#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fcfv {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Coordinate-format accumulator. Duplicates are kept and summed by compress().
class TripletMatrix {
public:
    TripletMatrix() = default;
    TripletMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int row, int col, double value) { entries_.push_back({row, col, value}); }
    /// Concatenates another buffer of the same shape (the per-producer merge).
    void append(const TripletMatrix& other);
    void reserve(std::size_t n) { entries_.reserve(n); }

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] const std::vector<Triplet>& entries() const { return entries_; }

    /// y = A x straight from the triplets.
    [[nodiscard]] std::vector<double> multiply(const std::vector<double>& x) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Triplet> entries_;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class CompressedMatrix {
public:
    CompressedMatrix() = default;

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
    [[nodiscard]] const std::vector<int>& row_ptr() const { return row_ptr_; }
    [[nodiscard]] const std::vector<int>& col_idx() const { return col_idx_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

    /// Symmetry flag set by the producer; verify with is_symmetric().
    [[nodiscard]] bool symmetric() const { return symmetric_; }
    void set_symmetric(bool s) { symmetric_ = s; }

    [[nodiscard]] double coeff(int row, int col) const;
    [[nodiscard]] std::vector<double> diagonal() const;
    [[nodiscard]] std::vector<double> multiply(const std::vector<double>& x) const;
    /// max |A_ij - A_ji| <= tol.
    [[nodiscard]] bool is_symmetric(double tol = 1e-12) const;
    [[nodiscard]] double max_asymmetry() const;

    friend CompressedMatrix compress(const TripletMatrix& t, bool symmetric);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

/// Sums duplicates in their insertion order, so the result does not depend on
/// how the triplets were spread over producer buffers as long as buffers are
/// appended in a fixed order. Throws SolverError on out-of-range indices.
[[nodiscard]] CompressedMatrix compress(const TripletMatrix& t, bool symmetric = false);

enum class SolveMethod { automatic, direct, dense, cg, minres };

[[nodiscard]] std::string_view to_string(SolveMethod m);
[[nodiscard]] SolveMethod parse_solve_method(std::string_view name);

struct SolveOptions {
    SolveMethod method = SolveMethod::automatic;
    double tol = 1e-10;
    int max_iter = 0;  // 0: 10 n
    int direct_threshold = 5000;
    /// Symmetric Jacobi scaling |D|^{-1/2} A |D|^{-1/2} before an iterative solve.
    bool diagonal_scaling = false;
    /// The caller guarantees A (or -A) is symmetric positive definite.
    bool definite = false;
};

struct SolveReport {
    SolveMethod method = SolveMethod::direct;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // ||Ax - b|| / max(||b||, 1)
    double seconds = 0.0;
    std::string message;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

/// Direct route: sparse LU with partial pivoting (method direct) or dense LU
/// (method dense). Iterative route: CG for definite systems, MINRES otherwise.
/// automatic picks direct when n <= direct_threshold. Failures are reported,
/// not thrown.
[[nodiscard]] SolveResult solve(const CompressedMatrix& A, const std::vector<double>& b, const SolveOptions& opts = {});

[[nodiscard]] double relative_residual(const CompressedMatrix& A, const std::vector<double>& x,
                                       const std::vector<double>& b);

/// Matrix Market coordinate export; symmetric matrices write the lower triangle.
void write_matrix_market(const CompressedMatrix& A, std::ostream& out);

}  // namespace fcfv
