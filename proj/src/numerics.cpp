#include "cpmod/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpmod {

namespace {

// Phase convention: first entry with modulus above the floor is made real
// positive. Columns that are numerically zero are left untouched.
void fix_column_phases(CMatrix& m) {
    constexpr double floor = 1e-12;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double a = std::abs(m(i, j));
            if (a > floor) {
                m.col(j) *= std::conj(m(i, j)) / a;
                break;
            }
        }
    }
}

CMatrix hermitize(const CMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

void require_square(const CMatrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

void require_hermitian(const CMatrix& m, double abs_tol, const char* who) {
    require_square(m, who);
    if (!is_hermitian(m, abs_tol))
        throw NotHermitian(std::string(who) + ": matrix is not Hermitian within tolerance");
}

} // namespace

TolerancePolicy scaled_tolerances(double eq_abs) {
    if (!(eq_abs > 0.0))
        throw std::invalid_argument("scaled_tolerances: tolerance must be positive");
    const TolerancePolicy base{};
    const double factor = eq_abs / base.eq_abs_tol;
    return TolerancePolicy{base.rank_rel_tol * factor, base.psd_tol * factor, eq_abs};
}

bool is_hermitian(const CMatrix& m, double abs_tol) {
    if (m.rows() != m.cols()) return false;
    if (m.size() == 0) return true;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= abs_tol;
}

double operator_norm(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double max_abs(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

HermitianEigen hermitian_eigs(const CMatrix& m) {
    HermitianEigen out;
    const Eigen::Index n = m.rows();
    if (n == 0) {
        out.values.resize(0);
        out.vectors.resize(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m));
    if (es.info() != Eigen::Success)
        throw Error("hermitian_eigs: eigendecomposition failed");
    // Eigen returns ascending order; flip to descending.
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = es.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    fix_column_phases(out.vectors);
    return out;
}

CMatrix hermitian_sqrt(const CMatrix& m, const TolerancePolicy& tol) {
    require_hermitian(m, tol.eq_abs_tol, "hermitian_sqrt");
    const HermitianEigen eig = hermitian_eigs(m);
    const double norm = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    Eigen::VectorXd roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double v = eig.values(i);
        if (v < -tol.psd_tol * norm)
            throw NotPSD("hermitian_sqrt: eigenvalue below the PSD tolerance");
        roots(i) = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    return hermitize(eig.vectors * roots.asDiagonal() * eig.vectors.adjoint());
}

CMatrix kernel_projector(const CMatrix& m, const TolerancePolicy& tol) {
    require_hermitian(m, tol.eq_abs_tol, "kernel_projector");
    const HermitianEigen eig = hermitian_eigs(m);
    const double norm = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    CMatrix p = CMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) <= tol.rank_rel_tol * norm)
            p += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    return hermitize(p);
}

CMatrix range_basis(const CMatrix& m, const TolerancePolicy& tol) {
    require_hermitian(m, tol.eq_abs_tol, "range_basis");
    const HermitianEigen eig = hermitian_eigs(m);
    const double norm = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    Eigen::Index rank = 0;
    while (rank < eig.values.size() && eig.values(rank) > tol.rank_rel_tol * norm)
        ++rank;
    return eig.vectors.leftCols(rank);
}

CMatrix orthonormal_span(const CMatrix& columns, const TolerancePolicy& tol) {
    const Eigen::Index n = columns.rows();
    if (n == 0 || columns.cols() == 0) return CMatrix(n, 0);
    Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeThinU);
    const auto& sing = svd.singularValues();
    const double smax = sing.size() ? sing(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < sing.size() && sing(rank) > tol.rank_rel_tol * smax && sing(rank) > 0.0)
        ++rank;
    CMatrix basis = svd.matrixU().leftCols(rank);
    fix_column_phases(basis);
    return basis;
}

CMatrix projector_onto_span(const CMatrix& columns, const TolerancePolicy& tol) {
    const CMatrix basis = orthonormal_span(columns, tol);
    if (basis.cols() == 0) return CMatrix::Zero(columns.rows(), columns.rows());
    return hermitize(basis * basis.adjoint());
}

LeastSquaresFit least_squares_intertwiner(const CMatrix& from, const CMatrix& to,
                                          const TolerancePolicy& tol) {
    if (from.cols() != to.cols())
        throw DimensionMismatch("least_squares_intertwiner: vector lists have different lengths");
    LeastSquaresFit fit;
    if (from.cols() == 0 || from.rows() == 0) {
        fit.map = CMatrix::Zero(to.rows(), from.rows());
        fit.residual = to.norm();
        return fit;
    }
    // Minimal-norm solution through the pseudo-inverse of `from`.
    Eigen::JacobiSVD<CMatrix> svd(from, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sing = svd.singularValues();
    const double smax = sing.size() ? sing(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sing.size());
    for (Eigen::Index i = 0; i < sing.size(); ++i)
        if (sing(i) > tol.rank_rel_tol * smax && sing(i) > 0.0) inv(i) = 1.0 / sing(i);
    fit.map = to * svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    fit.residual = (fit.map * from - to).norm();
    return fit;
}

bool psd_order_leq(const CMatrix& a, const CMatrix& b, const TolerancePolicy& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("psd_order_leq: size mismatch");
    require_hermitian(a, tol.eq_abs_tol, "psd_order_leq");
    require_hermitian(b, tol.eq_abs_tol, "psd_order_leq");
    if (a.size() == 0) return true;
    const HermitianEigen eig = hermitian_eigs(b - a);
    const double scale = std::max({operator_norm(a), operator_norm(b), 1.0});
    return eig.values(eig.values.size() - 1) >= -tol.psd_tol * scale;
}

GramQuotient gram_quotient(const CMatrix& gram, const TolerancePolicy& tol) {
    require_hermitian(gram, tol.eq_abs_tol, "gram_quotient");
    const Eigen::Index n = gram.rows();
    const HermitianEigen eig = hermitian_eigs(gram);
    const double top = eig.values.size() ? eig.values(0) : 0.0;
    if (eig.values.size() && eig.values(eig.values.size() - 1) < -tol.psd_tol * std::abs(top))
        throw NotPSD("gram_quotient: Gram matrix has a significantly negative eigenvalue");
    Eigen::Index dim = 0;
    while (dim < n && eig.values(dim) > tol.rank_rel_tol * top && eig.values(dim) > 0.0)
        ++dim;

    GramQuotient out;
    out.dim = dim;
    out.to_ortho.resize(dim, n);
    out.lift.resize(n, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double root = std::sqrt(eig.values(i));
        out.to_ortho.row(i) = root * eig.vectors.col(i).adjoint();
        out.lift.col(i) = eig.vectors.col(i) / root;
    }
    return out;
}

} // namespace cpmod
