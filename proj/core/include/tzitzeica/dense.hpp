#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tzitzeica {

/// Row-major dense square matrix. Sizes here are small (a few hundred at most),
/// so nothing sparse is attempted.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    std::vector<double> multiply(std::span<const double> x) const;

    /// Max absolute row sum.
    double norm_inf() const;

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Partial-pivoted LU factorization, PA = LU, with the row-swap parity kept so
/// the determinant sign is available without forming the determinant.
class LuFactorization {
  public:
    /// `pivot_rel_tol` is relative to the matrix infinity norm; a pivot below
    /// that marks the factorization singular (the factorization still completes).
    explicit LuFactorization(DenseMatrix a, double pivot_rel_tol = 1e-12);

    bool singular() const noexcept { return singular_; }

    /// +1 / -1, or 0 when singular.
    int determinant_sign() const noexcept;

    /// Solves A x = b. Precondition: !singular().
    std::vector<double> solve(std::span<const double> b) const;

  private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
    int parity_ = 1;
    bool singular_ = false;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Iterates until the off-diagonal Frobenius norm drops below `tol` times the
/// Frobenius norm of the input (or `max_sweeps` is reached).
std::vector<double> symmetric_eigenvalues(DenseMatrix a, double tol = 1e-12, int max_sweeps = 100);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    DenseMatrix vectors;         // column k is the unit eigenvector of values[k]
};

/// Same iteration, with the rotations accumulated into an orthogonal basis.
SymmetricEigen symmetric_eigen(DenseMatrix a, double tol = 1e-12, int max_sweeps = 100);

} // namespace tzitzeica
