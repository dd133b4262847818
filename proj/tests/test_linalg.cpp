#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "matseg/linalg.hpp"
#include "oracles.hpp"

using namespace matseg;

namespace {

Matrix random_symmetric(std::mt19937_64& rng, Index n) {
    const Matrix a = oracle::random_matrix(rng, n, n);
    return (a + a.transpose()) / 2.0;
}

}  // namespace

TEST_CASE("SymMatrix symmetrises exactly") {
    std::mt19937_64 rng(1);
    const SymMatrix s(oracle::random_matrix(rng, 5, 5));
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) CHECK(s.matrix()(i, j) == s.matrix()(j, i));
    CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), Error);
}

TEST_CASE("sym_eig diagonal input") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3, 1, 2;
    const auto e = sym_eig(SymMatrix(d));
    CHECK(e.values(0) == doctest::Approx(3));
    CHECK(e.values(1) == doctest::Approx(2));
    CHECK(e.values(2) == doctest::Approx(1));
    Matrix want = Matrix::Zero(3, 3);
    want(0, 0) = 1;
    want(2, 1) = 1;
    want(1, 2) = 1;
    CHECK(oracle::max_diff(e.vectors, want) < 1e-12);
}

TEST_CASE("sym_eig 2x2 by hand") {
    Matrix m(2, 2);
    m << 2, 1, 1, 2;
    const auto e = sym_eig(SymMatrix(m));
    CHECK(e.values(0) == doctest::Approx(3));
    CHECK(e.values(1) == doctest::Approx(1));
    const double r = 1 / std::sqrt(2.0);
    Matrix want(2, 2);
    want << r, r, r, -r;
    CHECK(oracle::max_diff(e.vectors, want) < 1e-12);
}

TEST_CASE("sym_eig reconstruction, orthogonality and sign convention") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 1 + static_cast<Index>(rng() % 9);
        const Matrix m = random_symmetric(rng, n);
        const auto e = sym_eig(SymMatrix(m));
        const Matrix& v = e.vectors;
        CHECK(oracle::max_diff(v.transpose() * v, Matrix::Identity(n, n)) <= 1e-10);
        CHECK(oracle::max_diff(v * e.values.asDiagonal() * v.transpose(), m) <= 1e-8 * std::max(1.0, max_abs(m)));
        for (Index k = 0; k + 1 < n; ++k) CHECK(e.values(k) >= e.values(k + 1));
        for (Index k = 0; k < n; ++k) {
            Index arg = 0;
            for (Index i = 1; i < n; ++i)
                if (std::abs(v(i, k)) > std::abs(v(arg, k)) + 1e-12) arg = i;
            CHECK(v(arg, k) > 0);
        }
    }
}

TEST_CASE("sym_eig is deterministic and orders tied eigenvectors") {
    std::mt19937_64 rng(3);
    const Matrix m = random_symmetric(rng, 6);
    const auto a = sym_eig(SymMatrix(m));
    const auto b = sym_eig(SymMatrix(m));
    CHECK(a.vectors == b.vectors);
    CHECK(a.values == b.values);

    const auto id = sym_eig(SymMatrix(Matrix::Identity(3, 3)));
    CHECK(id.vectors == Matrix::Identity(3, 3));
}

TEST_CASE("sym_eig rejects non-finite input") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sym_eig(SymMatrix(m)), Error);
}

TEST_CASE("inv_sqrt_psd") {
    CHECK(oracle::max_diff(inv_sqrt_psd(SymMatrix(Matrix::Identity(4, 4))).matrix(), Matrix::Identity(4, 4)) < 1e-14);

    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 4, 9;
    Matrix want = Matrix::Zero(2, 2);
    want.diagonal() << 0.5, 1.0 / 3.0;
    CHECK(oracle::max_diff(inv_sqrt_psd(SymMatrix(d)).matrix(), want) < 1e-14);

    SUBCASE("clamped eigenvalue") {
        Matrix s = Matrix::Zero(2, 2);
        s.diagonal() << 1, 1e-18;
        const Matrix r = inv_sqrt_psd(SymMatrix(s), 1e-10).matrix();
        CHECK(r(1, 1) == doctest::Approx(1 / std::sqrt(1e-10)));
        Matrix projector = Matrix::Zero(2, 2);
        projector(0, 0) = 1;
        CHECK(oracle::max_diff(r * s * r, projector) < 1e-8);
    }

    SUBCASE("whitening on random PSD matrices") {
        std::mt19937_64 rng(11);
        for (int rep = 0; rep < 100; ++rep) {
            const Index n = 1 + static_cast<Index>(rng() % 6);
            const Matrix b = oracle::random_matrix(rng, n, n + 2);
            const Matrix s = b * b.transpose();
            const Matrix r = inv_sqrt_psd(SymMatrix(s)).matrix();
            CHECK(oracle::max_diff(r, r.transpose()) == 0.0);
            CHECK(oracle::max_diff(r * s * r, Matrix::Identity(n, n)) < 1e-8);
        }
    }

    CHECK_THROWS_AS(inv_sqrt_psd(SymMatrix(Matrix::Zero(2, 2))), Error);
    try {
        inv_sqrt_psd(SymMatrix(-Matrix::Identity(2, 2)));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateCovariance);
    }
}

TEST_CASE("subspace_distance hand cases") {
    const Matrix e1 = Matrix::Identity(2, 2).col(0);
    const Matrix e2 = Matrix::Identity(2, 2).col(1);
    CHECK(subspace_distance(Basis(e1), Basis(e1)) == doctest::Approx(0).epsilon(1e-12));
    CHECK(subspace_distance(Basis(e1), Basis(e2)) == doctest::Approx(1));
    const Matrix diag = (e1 + e2) / std::sqrt(2.0);
    CHECK(subspace_distance(Basis(e1), Basis(diag)) == doctest::Approx(std::sqrt(0.5)));
    const Matrix i3 = Matrix::Identity(3, 3);
    CHECK(subspace_distance(Basis(i3.leftCols(2)), Basis(i3.col(0))) == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("subspace_distance properties on random bases") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 2 + static_cast<Index>(rng() % 6);
        const Index r1 = 1 + static_cast<Index>(rng() % (n - 1));
        const Index r2 = 1 + static_cast<Index>(rng() % (n - 1));
        const Matrix h1 = oracle::random_matrix(rng, n, r1);
        const Matrix h2 = oracle::random_matrix(rng, n, r2);
        const double d = subspace_distance(Basis(h1), Basis(h2));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(d == doctest::Approx(subspace_distance(Basis(h2), Basis(h1))).epsilon(1e-10));
        // Invariance under a change of basis.
        const Matrix g = oracle::random_matrix(rng, r1, r1) + 3.0 * Matrix::Identity(r1, r1);
        CHECK(subspace_distance(Basis(h1 * g), Basis(h2)) == doctest::Approx(d).epsilon(1e-8));
    }
}

TEST_CASE("subspace_distance rejects rank-deficient bases") {
    Matrix h(3, 2);
    h << 1, 2, 2, 4, 3, 6;
    CHECK_THROWS_AS(Basis{h}, Error);
    CHECK_THROWS_AS(subspace_distance(Basis(Matrix::Identity(3, 1)), Basis(Matrix::Identity(4, 1))), Error);
}

TEST_CASE("operator_norm and max_abs") {
    Matrix m(2, 2);
    m << 3, 0, 0, -4;
    CHECK(operator_norm(m) == doctest::Approx(4));
    CHECK(max_abs(m) == 4);
}
