#pragma once

#include <Eigen/Dense>

#include "matseg/error.hpp"

namespace matseg {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square real matrix that is exactly symmetric.
///
/// The constructor replaces the input by (M + M^T) / 2, so
/// `matrix()(i, j) == matrix()(j, i)` holds bit for bit.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& m);

    const Matrix& matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }

private:
    Matrix m_;
};

/// Full-column-rank matrix whose column space is the object of interest.
class Basis {
public:
    /// Throws InvalidInput unless smallest singular value > tol * largest.
    explicit Basis(Matrix columns, double tol = 1e-10);

    const Matrix& matrix() const noexcept { return m_; }
    Index rows() const noexcept { return m_.rows(); }
    Index cols() const noexcept { return m_.cols(); }

private:
    Matrix m_;
};

struct EigenDecomposition {
    Vector values;   ///< descending
    Matrix vectors;  ///< orthonormal columns, aligned with `values`
};

/**
 * Eigen-decomposition of a symmetric matrix with a fixed output convention.
 *
 * Eigenvalues are returned in descending order. Each eigenvector is signed so
 * that its largest-magnitude entry is positive (first such entry on ties).
 * Eigenvalues that agree to within 1e-12 relative to the spectral radius form
 * a cluster; vectors inside a cluster are ordered lexicographically,
 * descending, by their entries.
 */
EigenDecomposition sym_eig(const SymMatrix& s);

/// V diag(max(l_k, eps * l_max)^{-1/2}) V^T. Throws DegenerateCovariance if l_max <= 0.
SymMatrix inv_sqrt_psd(const SymMatrix& s, double eps = 1e-10);

/// sqrt(1 - tr(P1 P2) / min(r1, r2)) for the orthogonal projectors onto the
/// two column spaces. Zero for nested spaces, one for orthogonal ones.
double subspace_distance(const Basis& h1, const Basis& h2);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// max |m_ij|
double max_abs(const Matrix& m);

}  // namespace matseg
