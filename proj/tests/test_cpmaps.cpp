#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace cpmod;
using namespace cpmod::testing;

namespace {
const TolerancePolicy tol{};

CPMap identity_cp(Eigen::Index m) {
    CPMap phi = zero_cp_map(m, m);
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index t = 0; t < m; ++t)
            phi.image(s, t) = matrix_unit(m, m, s, t);
    return phi;
}

CPMap transpose_cp(Eigen::Index m) {
    CPMap phi = zero_cp_map(m, m);
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index t = 0; t < m; ++t)
            phi.image(s, t) = matrix_unit(m, m, t, s);
    return phi;
}
} // namespace

TEST_CASE("choi assembly for the identity map and the worked examples") {
    CMatrix expected(4, 4);
    expected << 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1;
    CHECK(diff(choi(identity_cp(2)).value, expected) == 0.0);

    const CPMap phi26 = derive_underlying(example26_map(false), tol).map;
    CMatrix expected26(4, 4);
    expected26 << 1, 0, 0, 0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0.5, 0, 0, 1;
    CHECK(diff(choi(phi26).value, expected26) < 1e-12);

    const CPMap phi27 = derive_underlying(example27_phi(), tol).map;
    CMatrix d11 = CMatrix::Zero(2, 2);
    d11(0, 0) = 2.0;
    CMatrix d22 = CMatrix::Zero(2, 2);
    d22(1, 1) = 3.0;
    CHECK(diff(phi27.image(0, 0), d11) < 1e-12);
    CHECK(diff(phi27.image(0, 1), CMatrix::Zero(2, 2)) < 1e-12);
    CHECK(diff(phi27.image(1, 0), CMatrix::Zero(2, 2)) < 1e-12);
    CHECK(diff(phi27.image(1, 1), d22) < 1e-12);
}

TEST_CASE("complete positivity certificates") {
    CHECK(is_completely_positive(zero_cp_map(2, 3), tol));
    CHECK_FALSE(is_completely_positive(transpose_cp(2), tol));
    CHECK(is_completely_positive(derive_underlying(example26_map(false), tol).map, tol));
}

TEST_CASE("derive_underlying matches the printed underlying maps") {
    // phi(a) = [[a11, a12/2], [a21/2, a22]] on matrix units.
    const CPMap phi = derive_underlying(example26_map(false), tol).map;
    CHECK(diff(phi.image(0, 0), matrix_unit(2, 2, 0, 0)) < 1e-12);
    CHECK(diff(phi.image(0, 1), CMatrix(0.5 * matrix_unit(2, 2, 0, 1))) < 1e-12);
    CHECK(diff(phi.image(1, 0), CMatrix(0.5 * matrix_unit(2, 2, 1, 0))) < 1e-12);
    CHECK(diff(phi.image(1, 1), matrix_unit(2, 2, 1, 1)) < 1e-12);
    const CPMap psi = derive_underlying(example26_map(true), tol).map;
    for (std::size_t i = 0; i < phi.images.size(); ++i)
        CHECK(diff(phi.images[i], psi.images[i]) < 1e-12);

    // The identity module map has the identity underlying map.
    const CPMap id = derive_underlying(identity_map(2), tol).map;
    for (Eigen::Index s = 0; s < 2; ++s)
        for (Eigen::Index t = 0; t < 2; ++t)
            CHECK(diff(id.image(s, t), matrix_unit(2, 2, s, t)) == 0.0);
}

TEST_CASE("maps without a consistent underlying map are rejected") {
    ModuleCPMap bad = zero_module_cp_map({2, 2}, 2, 2);
    bad.image(0, 0) = CMatrix::Identity(2, 2);
    const ValidationReport report = validate_module_cp(bad, tol);
    CHECK_FALSE(report.is_valid);
    CHECK(report.residual > 0.5);
    CHECK_THROWS_AS(derive_underlying(bad, tol), NotAModuleCPMap);
}

TEST_CASE("validation accepts the worked examples") {
    for (const ModuleCPMap& map :
         {example26_map(false), example26_map(true), example27_phi(), example27_psi()}) {
        const ValidationReport report = validate_module_cp(map, tol);
        CHECK(report.is_valid);
        CHECK(report.underlying_cp);
        CHECK(report.residual < 1e-14);
    }
}

TEST_CASE("derived underlying maps are Gram-positive for random linear maps") {
    // Row 1 always defines a Choi matrix that is a Gram matrix, hence PSD.
    GaussianStream g(17);
    for (int it = 0; it < 8; ++it) {
        ModuleCPMap arbitrary = zero_module_cp_map({2, 2}, 2, 3);
        for (CMatrix& img : arbitrary.images) img = random_matrix(g, 3, 2);
        const ValidationReport report = validate_module_cp(arbitrary, tol);
        CHECK(report.underlying_cp);   // even when is_valid is false
    }
}

TEST_CASE("non-degeneracy flags match the worked examples") {
    CHECK(is_nondegenerate_map(example26_map(false), tol));
    CHECK(is_nondegenerate_map(example26_map(true), tol));
    CHECK_FALSE(is_nondegenerate_map(example27_phi(), tol));
    CHECK_FALSE(is_nondegenerate_map(example27_psi(), tol));

    // The degenerate example spans exactly four of the five coordinates.
    const ModuleCPMap psi = example27_psi();
    CMatrix cols(5, 8);
    for (Eigen::Index i = 0; i < 4; ++i)
        cols.middleCols(2 * i, 2) = psi.images[static_cast<std::size_t>(i)];
    CHECK(orthonormal_span(cols, tol).cols() == 4);
}

TEST_CASE("gns_stinespring of the identity map is two-dimensional and unitary") {
    const PhiStinespring dil = gns_stinespring(identity_cp(2), tol);
    CHECK(dil.d == 2);
    CHECK(diff(dil.V.adjoint() * dil.V, CMatrix::Identity(2, 2)) < 1e-12);
    CHECK(diff(dil.V * dil.V.adjoint(), CMatrix::Identity(2, 2)) < 1e-12);
    for (Eigen::Index s = 0; s < 2; ++s)
        for (Eigen::Index t = 0; t < 2; ++t)
            CHECK(diff(dil.V.adjoint() * dil.pi(s, t) * dil.V, matrix_unit(2, 2, s, t)) < 1e-12);
}

TEST_CASE("gns_stinespring dimensions for the worked example and the zero map") {
    CHECK(gns_stinespring(derive_underlying(example26_map(false), tol).map, tol).d == 4);
    CHECK(gns_stinespring(zero_cp_map(2, 2), tol).d == 0);
    CHECK_THROWS_AS(gns_stinespring(transpose_cp(2), tol), NotCP);
}

TEST_CASE("gns_stinespring satisfies the dilation laws on random maps") {
    for (std::size_t i = 0; i < shape_gallery().size(); ++i) {
        const ModuleCPMap map = random_valid_map(100 + i, shape_gallery()[i]);
        const CPMap phi = derive_underlying(map, tol).map;
        const PhiStinespring dil = gns_stinespring(phi, tol);
        const Eigen::Index m = phi.m;

        // Factorization phi(a) = V^* pi(a) V on matrix units.
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index t = 0; t < m; ++t)
                CHECK(operator_norm(phi.image(s, t) -
                                    dil.V.adjoint() * dil.pi(s, t) * dil.V) < 1e-9);

        // pi is a unital *-homomorphism on matrix units.
        CMatrix unit_sum = CMatrix::Zero(dil.d, dil.d);
        for (Eigen::Index s = 0; s < m; ++s) unit_sum += dil.pi(s, s);
        CHECK(diff(unit_sum, CMatrix::Identity(dil.d, dil.d)) < 1e-10);
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index t = 0; t < m; ++t) {
                CHECK(diff(dil.pi(s, t).adjoint(), dil.pi(t, s)) < 1e-10);
                for (Eigen::Index u = 0; u < m; ++u)
                    for (Eigen::Index v = 0; v < m; ++v) {
                        const CMatrix prod = dil.pi(s, t) * dil.pi(u, v);
                        const CMatrix expected =
                            t == u ? dil.pi(s, v) : CMatrix::Zero(dil.d, dil.d);
                        CHECK(diff(prod, expected) < 1e-10);
                    }
            }

        // Minimality: the span pi(E_st) V e_u has full dimension d.
        CHECK(orthonormal_span(algebra_span_columns(dil), tol).cols() == dil.d);

        // V^* V = phi(1).
        CMatrix phi_one = CMatrix::Zero(phi.p, phi.p);
        for (Eigen::Index s = 0; s < m; ++s) phi_one += phi.image(s, s);
        CHECK(diff(dil.V.adjoint() * dil.V, phi_one) < 1e-10);
    }
}

TEST_CASE("derive_underlying is row-independent on valid maps") {
    for (std::size_t i = 0; i < shape_gallery().size(); ++i) {
        const MapShape shape = shape_gallery()[i];
        if (shape.k < 2) continue;
        const ModuleCPMap map = random_valid_map(300 + i, shape);
        const CPMap phi = derive_underlying(map, tol).map;
        for (Eigen::Index s = 0; s < shape.m; ++s)
            for (Eigen::Index t = 0; t < shape.m; ++t) {
                const CMatrix via_row2 = map.image(1, s).adjoint() * map.image(1, t);
                CHECK(diff(via_row2, phi.image(s, t)) < 1e-10);
            }
    }
}

TEST_CASE("arveson_compress reproduces and scales the base map") {
    const CPMap phi = derive_underlying(example26_map(false), tol).map;
    const PhiStinespring dil = gns_stinespring(phi, tol);
    const CMatrix id = CMatrix::Identity(dil.d, dil.d);

    const CPMap same = arveson_compress(dil, id, tol);
    for (std::size_t i = 0; i < phi.images.size(); ++i)
        CHECK(diff(same.images[i], phi.images[i]) < tol.eq_abs_tol);

    const CPMap tripled = arveson_compress(dil, CMatrix(3.0 * id), tol);
    for (std::size_t i = 0; i < phi.images.size(); ++i)
        CHECK(diff(tripled.images[i], CMatrix(3.0 * phi.images[i])) < 1e-10);
}

TEST_CASE("arveson_compress with a random commutant element stays CP") {
    const CPMap phi = derive_underlying(example26_map(false), tol).map;
    const PhiStinespring dil = gns_stinespring(phi, tol);
    GaussianStream g(53);

    // Average a random Hermitian into the commutant of pi(A), then shift PSD.
    const CMatrix z0 = random_matrix(g, dil.d, dil.d);
    const CMatrix z = 0.5 * (z0 + z0.adjoint());
    CMatrix avg = CMatrix::Zero(dil.d, dil.d);
    for (Eigen::Index u = 0; u < dil.m; ++u)
        for (Eigen::Index v = 0; v < dil.m; ++v)
            avg += dil.pi(u, v) * z * dil.pi(v, u);
    avg /= static_cast<double>(dil.m);
    const HermitianEigen eig = hermitian_eigs(avg);
    const CMatrix t = avg + (std::abs(eig.values(eig.values.size() - 1)) + 0.1) *
                                CMatrix::Identity(dil.d, dil.d);

    const CPMap compressed = arveson_compress(dil, t, tol);
    CHECK(is_completely_positive(compressed, tol));
}

TEST_CASE("arveson_compress rejects bad elements") {
    const PhiStinespring dil = gns_stinespring(identity_cp(2), tol);
    CHECK_THROWS_AS(arveson_compress(dil, matrix_unit(2, 2, 0, 1), tol), NotHermitian);
    CHECK_THROWS_AS(arveson_compress(dil, CMatrix(-CMatrix::Identity(2, 2)), tol), NotPSD);
    CMatrix diag = CMatrix::Zero(2, 2);
    diag(0, 0) = 1.0;
    CHECK_THROWS_AS(arveson_compress(dil, diag, tol), NotInCommutant);
}
