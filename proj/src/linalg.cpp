#include "matseg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace matseg {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::DegenerateCovariance: return "DegenerateCovariance";
        case ErrorKind::DegenerateColumn: return "DegenerateColumn";
        case ErrorKind::DegenerateVariance: return "DegenerateVariance";
        case ErrorKind::ResourceLimit: return "ResourceLimit";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

SymMatrix::SymMatrix(const Matrix& m) {
    require(m.rows() >= 1 && m.rows() == m.cols(), "SymMatrix requires a non-empty square matrix");
    m_ = (m + m.transpose()) * 0.5;
}

Basis::Basis(Matrix columns, double tol) : m_(std::move(columns)) {
    require(m_.rows() >= 1 && m_.cols() >= 1 && m_.cols() <= m_.rows(),
            "basis must have 1 <= cols <= rows");
    require(m_.allFinite(), "basis has non-finite entries");
    Eigen::JacobiSVD<Matrix> svd(m_);
    const Vector& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > tol * sv(0))) throw Error::invalid_input("basis is rank deficient");
}

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            arg = i;
        }
    }
    if (v(arg) < 0.0) v = -v;
}

bool lex_greater(const Vector& a, const Vector& b) {
    for (Index i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) > b(i);
    }
    return false;
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& s) {
    const Matrix& m = s.matrix();
    if (!m.allFinite()) throw Error::invalid_input("sym_eig: non-finite entry");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "sym_eig: eigensolver did not converge");

    const Index n = m.rows();
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // Eigen returns ascending order.
    for (Index k = 0; k < n; ++k) {
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
        fix_sign(out.vectors.col(k));
    }

    const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
    Index start = 0;
    while (start < n) {
        Index end = start + 1;
        while (end < n && out.values(end - 1) - out.values(end) <= 1e-12 * scale) ++end;
        if (end - start > 1) {
            std::vector<Vector> cluster;
            for (Index k = start; k < end; ++k) cluster.emplace_back(out.vectors.col(k));
            std::stable_sort(cluster.begin(), cluster.end(), lex_greater);
            for (Index k = start; k < end; ++k) out.vectors.col(k) = cluster[static_cast<std::size_t>(k - start)];
        }
        start = end;
    }
    return out;
}

SymMatrix inv_sqrt_psd(const SymMatrix& s, double eps) {
    require(eps > 0.0, "inv_sqrt_psd: eps must be positive");
    const EigenDecomposition eig = sym_eig(s);
    const double lmax = eig.values(0);
    if (!(lmax > 0.0)) throw Error(ErrorKind::DegenerateCovariance, "covariance has no positive eigenvalue");
    const double floor = eps * lmax;
    Vector scale(eig.values.size());
    for (Index k = 0; k < scale.size(); ++k) scale(k) = 1.0 / std::sqrt(std::max(eig.values(k), floor));
    return SymMatrix(eig.vectors * scale.asDiagonal() * eig.vectors.transpose());
}

double subspace_distance(const Basis& h1, const Basis& h2) {
    require(h1.rows() == h2.rows(), "subspace_distance: bases live in different dimensions");
    const Matrix q1 = Eigen::HouseholderQR<Matrix>(h1.matrix()).householderQ() * Matrix::Identity(h1.rows(), h1.cols());
    const Matrix q2 = Eigen::HouseholderQR<Matrix>(h2.matrix()).householderQ() * Matrix::Identity(h2.rows(), h2.cols());
    // tr(P1 P2) = ||Q1^T Q2||_F^2
    const double trace = (q1.transpose() * q2).squaredNorm();
    const double r = static_cast<double>(std::min(h1.cols(), h2.cols()));
    const double radicand = std::clamp(1.0 - trace / r, 0.0, 1.0);
    return std::sqrt(radicand);
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace matseg
