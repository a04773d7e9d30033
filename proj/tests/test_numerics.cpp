#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace cpmod;
using cpmod::testing::diff;
using cpmod::testing::random_matrix;

namespace {
const TolerancePolicy tol{};

CMatrix columns(std::initializer_list<CVector> vecs) {
    const Eigen::Index n = vecs.begin()->size();
    CMatrix m(n, static_cast<Eigen::Index>(vecs.size()));
    Eigen::Index j = 0;
    for (const CVector& v : vecs) m.col(j++) = v;
    return m;
}

CVector unit(Eigen::Index n, Eigen::Index i) {
    CVector v = CVector::Zero(n);
    v(i) = 1.0;
    return v;
}
} // namespace

TEST_CASE("scaled_tolerances scales proportionally and rejects nonpositive input") {
    const TolerancePolicy t = scaled_tolerances(1e-6);
    CHECK(t.eq_abs_tol == doctest::Approx(1e-6));
    CHECK(t.psd_tol == doctest::Approx(1e-7));
    CHECK(t.rank_rel_tol == doctest::Approx(1e-7));
    CHECK_THROWS_AS(scaled_tolerances(0.0), std::invalid_argument);
    CHECK_THROWS_AS(scaled_tolerances(-1.0), std::invalid_argument);
}

TEST_CASE("hermitian_sqrt on identity and diagonal matrices") {
    CHECK(diff(hermitian_sqrt(CMatrix::Identity(3, 3), tol), CMatrix::Identity(3, 3)) < 1e-14);
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 2.0;
    expected(1, 1) = 3.0;
    CHECK(diff(hermitian_sqrt(d, tol), expected) < 1e-14);
}

TEST_CASE("hermitian_sqrt squares back to the input on random PSD matrices") {
    GaussianStream g(11);
    for (int it = 0; it < 20; ++it) {
        const CMatrix b = random_matrix(g, 5, 5);
        const CMatrix m = b.adjoint() * b;
        const CMatrix r = hermitian_sqrt(m, tol);
        CHECK(is_hermitian(r, 1e-12));
        CHECK(operator_norm(r * r - m) <= 1e-10 * operator_norm(m));
    }
}

TEST_CASE("hermitian_sqrt clamps roundoff negatives and rejects real ones") {
    CMatrix nearly = CMatrix::Zero(2, 2);
    nearly(0, 0) = 1.0;
    nearly(1, 1) = -1e-12;
    const CMatrix r = hermitian_sqrt(nearly, tol);
    CHECK(std::abs(r(1, 1).real()) < 1e-9);

    CMatrix indefinite = CMatrix::Zero(2, 2);
    indefinite(0, 0) = 1.0;
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(hermitian_sqrt(indefinite, tol), NotPSD);

    CMatrix skew = CMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_sqrt(skew, tol), NotHermitian);
}

TEST_CASE("orthonormal_span handles zero input and duplicated directions") {
    CHECK(orthonormal_span(CMatrix::Zero(3, 1), tol).cols() == 0);
    const CMatrix basis =
        orthonormal_span(columns({unit(3, 0), 2.0 * unit(3, 0), unit(3, 1)}), tol);
    CHECK(basis.cols() == 2);
    CMatrix expected = CMatrix::Zero(3, 3);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK(diff(basis * basis.adjoint(), expected) < 1e-12);
}

TEST_CASE("orthonormal_span gives an idempotent projector on a rank-3 family") {
    GaussianStream g(7);
    const CMatrix span = random_matrix(g, 4, 3);
    CMatrix cols(4, 6);
    for (Eigen::Index j = 0; j < 6; ++j)
        cols.col(j) = span * random_matrix(g, 3, 1);
    const CMatrix basis = orthonormal_span(cols, tol);
    REQUIRE(basis.cols() == 3);
    const CMatrix proj = basis * basis.adjoint();
    CHECK(diff(proj * proj, proj) < 1e-10);
}

TEST_CASE("orthonormal_span is deterministic across permuted duplicated inputs") {
    GaussianStream g(19);
    const CMatrix cols = random_matrix(g, 4, 3);
    CMatrix shuffled(4, 5);
    shuffled.col(0) = cols.col(2);
    shuffled.col(1) = cols.col(0);
    shuffled.col(2) = cols.col(1);
    shuffled.col(3) = cols.col(0) * Complex(0.0, 2.0);
    shuffled.col(4) = cols.col(2);
    const CMatrix p1 = projector_onto_span(cols, tol);
    const CMatrix p2 = projector_onto_span(shuffled, tol);
    CHECK(diff(p1, p2) < tol.eq_abs_tol);
}

TEST_CASE("orthonormal_span phase convention: first nonzero entry real positive") {
    GaussianStream g(23);
    const CMatrix basis = orthonormal_span(random_matrix(g, 5, 3), tol);
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        for (Eigen::Index i = 0; i < basis.rows(); ++i) {
            if (std::abs(basis(i, j)) > 1e-12) {
                CHECK(basis(i, j).real() > 0.0);
                CHECK(std::abs(basis(i, j).imag()) < 1e-12);
                break;
            }
        }
    }
}

TEST_CASE("projector_onto_span basic cases") {
    CMatrix e1 = CMatrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    CHECK(diff(projector_onto_span(e1, tol), expected) < 1e-14);

    GaussianStream g(3);
    const CMatrix full = random_matrix(g, 3, 5);
    CHECK(diff(projector_onto_span(full, tol), CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("projector_onto_span of the degenerate example image space") {
    // Stack Psi(E_rs) e_j for the 5-dimensional example; the image space is
    // the solution set of x2 = x1 + 2 x5, i.e. the complement of the line
    // spanned by n = (1,-1,0,0,2)/sqrt(6).
    const ModuleCPMap psi = cpmod::testing::example27_psi();
    CMatrix cols(5, 8);
    for (Eigen::Index i = 0; i < 4; ++i)
        cols.middleCols(2 * i, 2) = psi.images[static_cast<std::size_t>(i)];
    const CMatrix p = projector_onto_span(cols, tol);
    CVector n(5);
    n << 1.0, -1.0, 0.0, 0.0, 2.0;
    n /= std::sqrt(6.0);
    const CMatrix oracle = CMatrix::Identity(5, 5) - n * n.adjoint();
    CHECK(diff(p, oracle) < 1e-10);
    // P fixes every input column.
    for (Eigen::Index j = 0; j < cols.cols(); ++j)
        CHECK((p * cols.col(j) - cols.col(j)).norm() <
              tol.eq_abs_tol * std::max(1.0, cols.col(j).norm()));
}

TEST_CASE("least_squares_intertwiner exact extensions") {
    const CMatrix both = columns({unit(2, 0), unit(2, 1)});
    const LeastSquaresFit full = least_squares_intertwiner(both, both, tol);
    CHECK(full.residual < 1e-14);
    CHECK(diff(full.map, CMatrix::Identity(2, 2)) < 1e-14);

    const CMatrix e1 = columns({unit(2, 0)});
    const LeastSquaresFit partial = least_squares_intertwiner(e1, e1, tol);
    CMatrix p = CMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    CHECK(diff(partial.map, p) < 1e-14);

    const LeastSquaresFit doubled = least_squares_intertwiner(e1, CMatrix(2.0 * e1), tol);
    CHECK((doubled.map * unit(2, 0) - 2.0 * unit(2, 0)).norm() < 1e-14);
    CHECK((doubled.map * unit(2, 1)).norm() < 1e-14);
}

TEST_CASE("least_squares_intertwiner reports inconsistent correspondences") {
    // from {e1, e1} to {e1, e2}: the normal equations give L e1 = (e1+e2)/2
    // and a total squared misfit of 1.
    const CMatrix from = columns({unit(2, 0), unit(2, 0)});
    const CMatrix to = columns({unit(2, 0), unit(2, 1)});
    const LeastSquaresFit fit = least_squares_intertwiner(from, to, tol);
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.5;
    expected(1, 0) = 0.5;
    CHECK(diff(fit.map, expected) < 1e-12);
    CHECK(fit.residual == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(least_squares_intertwiner(CMatrix::Zero(2, 2), CMatrix::Zero(2, 3), tol),
                    DimensionMismatch);
}

TEST_CASE("least_squares_intertwiner satisfies the fit on consistent data") {
    GaussianStream g(31);
    const CMatrix l = random_matrix(g, 3, 4);
    const CMatrix from = random_matrix(g, 4, 6);
    const LeastSquaresFit fit = least_squares_intertwiner(from, l * from, tol);
    CHECK(fit.residual < 1e-10);
    CHECK(diff(fit.map * from, l * from) < 1e-10);
}

TEST_CASE("psd_order_leq basic and constructed orders") {
    CHECK(psd_order_leq(CMatrix::Zero(3, 3), CMatrix::Identity(3, 3), tol));
    CHECK_FALSE(psd_order_leq(CMatrix::Identity(3, 3), CMatrix(0.5 * CMatrix::Identity(3, 3)), tol));

    GaussianStream g(5);
    for (int it = 0; it < 10; ++it) {
        const CMatrix c = random_matrix(g, 4, 4);
        const CMatrix d = random_matrix(g, 4, 4);
        CHECK(psd_order_leq(c.adjoint() * c, c.adjoint() * c + d.adjoint() * d, tol));
    }
    CMatrix skew = CMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(psd_order_leq(skew, CMatrix::Identity(2, 2), tol), NotHermitian);
}

TEST_CASE("psd_order_leq is reflexive and transitive on random chains") {
    GaussianStream g(13);
    for (int it = 0; it < 10; ++it) {
        const CMatrix a0 = random_matrix(g, 3, 3);
        const CMatrix a = a0.adjoint() * a0;
        const CMatrix b = a + random_matrix(g, 3, 3).adjoint() * random_matrix(g, 3, 3) * 0.0;
        CHECK(psd_order_leq(a, a, tol));
        const CMatrix f1 = random_matrix(g, 3, 3);
        const CMatrix f2 = random_matrix(g, 3, 3);
        const CMatrix mid = a + f1.adjoint() * f1;
        const CMatrix top = mid + f2.adjoint() * f2;
        CHECK(psd_order_leq(a, mid, tol));
        CHECK(psd_order_leq(mid, top, tol));
        CHECK(psd_order_leq(a, top, tol));
    }
}

TEST_CASE("kernel_projector on diagonal cases") {
    CHECK(diff(kernel_projector(CMatrix::Zero(3, 3), tol), CMatrix::Identity(3, 3)) < 1e-14);
    CHECK(diff(kernel_projector(CMatrix::Identity(4, 4), tol), CMatrix::Zero(4, 4)) < 1e-14);
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(2, 2) = 3.0;
    CMatrix expected = CMatrix::Zero(3, 3);
    expected(1, 1) = 1.0;
    CHECK(diff(kernel_projector(d, tol), expected) < 1e-14);
    CHECK(diff(kernel_projector(d, tol) + range_basis(d, tol) * range_basis(d, tol).adjoint(),
               CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("gram_quotient reproduces the Gram inner product") {
    GaussianStream g(41);
    const CMatrix b = random_matrix(g, 6, 4);
    const CMatrix gram = b.adjoint() * b;   // PSD, 4x4, full rank a.s.
    const GramQuotient quot = gram_quotient(gram, tol);
    CHECK(quot.dim == 4);
    CHECK(diff(quot.to_ortho * quot.lift, CMatrix::Identity(quot.dim, quot.dim)) < 1e-12);
    CHECK(diff(quot.to_ortho.adjoint() * quot.to_ortho, gram) < 1e-10);

    // Rank-deficient Gram: dimensions drop accordingly.
    const CMatrix thin = random_matrix(g, 2, 5);
    const GramQuotient small = gram_quotient(thin.adjoint() * thin, tol);
    CHECK(small.dim == 2);

    CHECK(gram_quotient(CMatrix::Zero(3, 3), tol).dim == 0);
    CHECK_THROWS_AS(gram_quotient(CMatrix(-CMatrix::Identity(2, 2)), tol), NotPSD);
}

TEST_CASE("norms on empty and simple matrices") {
    CHECK(operator_norm(CMatrix(0, 0)) == 0.0);
    CHECK(max_abs(CMatrix(0, 3)) == 0.0);
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = Complex(3.0, 4.0);
    CHECK(operator_norm(m) == doctest::Approx(5.0));
    CHECK(max_abs(m) == doctest::Approx(5.0));
}
