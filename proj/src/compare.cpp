#include "cpmod/compare.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

#include "cpmod/oracle.hpp"

namespace cpmod {

namespace {

// Residual gate for the Radon-Nikodym intertwiner fits, relative to the
// spanning-set norm. Stricter than the Choi order test; fits above the gate
// raise NotDominated even when the Choi test marginally passed.
constexpr double kIntertwinerGate = 1e-6;

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

// Columns Phi(E_rs) e_u over all (r,s,u); their span is [Phi(X)H].
CMatrix image_span_columns(const ModuleCPMap& map) {
    const Eigen::Index n = map.module.basis_size();
    CMatrix cols(map.q, n * map.p);
    for (Eigen::Index i = 0; i < n; ++i)
        cols.middleCols(i * map.p, map.p) = map.images[static_cast<std::size_t>(i)];
    return cols;
}

double commutant_defect(const ModuleStinespring& q, const CMatrix& t, const CMatrix& s) {
    double worst = 0.0;
    for (const CMatrix& pi : q.piX_images) {
        worst = std::max(worst, max_abs(pi * t - s * pi));
        worst = std::max(worst, max_abs(pi.adjoint() * s - t * pi.adjoint()));
    }
    return worst;
}

void check_element_shapes(const ModuleStinespring& q, const CMatrix& t, const CMatrix& s,
                          const char* who) {
    if (t.rows() != q.dH || t.cols() != q.dH || s.rows() != q.dK || s.cols() != q.dK)
        throw DimensionMismatch(std::string(who) + ": element does not match the dilation spaces");
}

} // namespace

bool equivalent(const ModuleCPMap& a, const ModuleCPMap& b, const TolerancePolicy& tol) {
    if (!a.same_shape(b))
        throw ShapeMismatch("equivalent: maps have different shapes");
    const CPMap ua = derive_underlying(a, tol).map;
    const CPMap ub = derive_underlying(b, tol).map;
    for (std::size_t i = 0; i < ua.images.size(); ++i)
        if (max_abs(ua.images[i] - ub.images[i]) > tol.eq_abs_tol) return false;
    return true;
}

CMatrix connecting_partial_isometry(const ModuleCPMap& phi, const ModuleCPMap& psi,
                                    const TolerancePolicy& tol) {
    if (!equivalent(phi, psi, tol))
        throw NotEquivalent("connecting_partial_isometry: maps are not equivalent");
    // Minimal-norm extension of Psi(x)h -> Phi(x)h; vanishes on the
    // complement of [Psi(X)H], which pins V uniquely.
    return least_squares_intertwiner(image_span_columns(psi), image_span_columns(phi), tol).map;
}

DominationVerdict dominates(const ModuleCPMap& psi, const ModuleCPMap& phi, DominationMode mode,
                            const TolerancePolicy& tol, std::uint64_t seed, int samples) {
    if (!psi.same_shape(phi))
        throw ShapeMismatch("dominates: maps have different shapes");
    const CPMap upsi = derive_underlying(psi, tol).map;
    const CPMap uphi = derive_underlying(phi, tol).map;

    DominationVerdict verdict;
    verdict.mode = mode;
    if (mode == DominationMode::complete) {
        const CMatrix cpsi = choi(upsi).value;
        const CMatrix cphi = choi(uphi).value;
        if (cpsi.size() == 0) {
            verdict.dominated = true;
            return verdict;
        }
        const HermitianEigen eig = hermitian_eigs(cphi - cpsi);
        const double scale = std::max({operator_norm(cpsi), operator_norm(cphi), 1.0});
        verdict.margin = eig.values(eig.values.size() - 1);
        verdict.dominated = verdict.margin >= -tol.psd_tol * scale;
        return verdict;
    }

    SampleConfig cfg;
    cfg.seed = seed;
    cfg.samples = samples;
    verdict.dominated = true;
    bool first = true;
    for (const ModuleElement& x : sample_module_elements(phi.module, cfg)) {
        const CMatrix a = psi.apply(x.value);
        const CMatrix b = phi.apply(x.value);
        const CMatrix lhs = a.adjoint() * a;
        const CMatrix rhs = b.adjoint() * b;
        if (lhs.size() > 0) {
            const HermitianEigen eig = hermitian_eigs(rhs - lhs);
            const double low = eig.values(eig.values.size() - 1);
            if (first || low < verdict.margin) verdict.margin = low;
            first = false;
            const double scale = std::max({operator_norm(lhs), operator_norm(rhs), 1.0});
            if (low < -tol.psd_tol * scale) verdict.dominated = false;
        }
    }
    return verdict;
}

CommutantBasis commutant(const ModuleStinespring& q, const TolerancePolicy& tol) {
    CommutantBasis basis;
    basis.dH = q.dH;
    basis.dK = q.dK;
    const Eigen::Index nT = q.dH * q.dH;
    const Eigen::Index nS = q.dK * q.dK;
    const Eigen::Index unknowns = nT + nS;
    if (unknowns == 0) return basis;

    const Eigen::Index blocks = q.module.basis_size();
    const Eigen::Index rows = 2 * blocks * q.dH * q.dK;
    const CMatrix idH = CMatrix::Identity(q.dH, q.dH);
    const CMatrix idK = CMatrix::Identity(q.dK, q.dK);

    CMatrix system(rows, unknowns);
    CMatrix null_vectors;
    if (rows == 0) {
        null_vectors = CMatrix::Identity(unknowns, unknowns);
    } else {
        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < blocks; ++i) {
            const CMatrix& pi = q.piX_images[static_cast<std::size_t>(i)];
            // pi(x) T - S pi(x) = 0
            system.block(row, 0, q.dK * q.dH, nT) = Eigen::kroneckerProduct(idH, pi);
            system.block(row, nT, q.dK * q.dH, nS) = -Eigen::kroneckerProduct(pi.transpose(), idK);
            row += q.dK * q.dH;
            // pi(x)^* S - T pi(x)^* = 0
            system.block(row, 0, q.dH * q.dK, nT) = -Eigen::kroneckerProduct(pi.conjugate(), idH);
            system.block(row, nT, q.dH * q.dK, nS) = Eigen::kroneckerProduct(idK, pi.adjoint());
            row += q.dH * q.dK;
        }
        Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullV);
        const auto& sing = svd.singularValues();
        const double smax = sing.size() ? sing(0) : 0.0;
        Eigen::Index rank = 0;
        while (rank < sing.size() && sing(rank) > tol.rank_rel_tol * smax && sing(rank) > 0.0)
            ++rank;
        null_vectors = svd.matrixV().rightCols(unknowns - rank);
    }

    for (Eigen::Index j = 0; j < null_vectors.cols(); ++j) {
        CVector v = null_vectors.col(j);
        // Fix the phase so reports are stable run to run.
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (std::abs(v(i)) > 1e-12) {
                v *= std::conj(v(i)) / std::abs(v(i));
                break;
            }
        basis.elements.push_back(CommutantElement{unvec(v.head(nT), q.dH, q.dH),
                                                  unvec(v.tail(nS), q.dK, q.dK)});
    }
    return basis;
}

CMatrix complete_commutant_element(const ModuleStinespring& q, const CMatrix& t,
                                   const TolerancePolicy& tol) {
    if (t.rows() != q.dH || t.cols() != q.dH)
        throw DimensionMismatch("complete_commutant_element: T is not dH x dH");
    const Eigen::Index blocks = q.module.basis_size();
    CMatrix from(q.dK, blocks * q.dH);
    CMatrix to(q.dK, blocks * q.dH);
    for (Eigen::Index i = 0; i < blocks; ++i) {
        const CMatrix& pi = q.piX_images[static_cast<std::size_t>(i)];
        from.middleCols(i * q.dH, q.dH) = pi;
        to.middleCols(i * q.dH, q.dH) = pi * t;
    }
    const LeastSquaresFit fit = least_squares_intertwiner(from, to, tol);
    const double gate = tol.eq_abs_tol * std::max(1.0, operator_norm(t)) *
                        std::sqrt(static_cast<double>(std::max<Eigen::Index>(from.cols(), 1)));
    if (fit.residual > gate)
        throw NoCompatibleS("complete_commutant_element: no S completes T (residual "
                            + std::to_string(fit.residual) + ")");
    return fit.map;
}

CommutantElement commutant_element_sqrt(const CommutantElement& e, const TolerancePolicy& tol) {
    return CommutantElement{hermitian_sqrt(e.T, tol), hermitian_sqrt(e.S, tol)};
}

ModuleCPMap compress(const ModuleStinespring& q, const CommutantElement& e,
                     const TolerancePolicy& tol) {
    check_element_shapes(q, e.T, e.S, "compress");
    const double scale = std::max({operator_norm(e.T), operator_norm(e.S), 1.0});
    if (commutant_defect(q, e.T, e.S) > tol.eq_abs_tol * scale)
        throw NotInCommutant("compress: element does not intertwine pi_Phi");
    const CMatrix rootT = hermitian_sqrt(e.T, tol);   // throws NotPSD on negative spectrum
    const CMatrix rootS = hermitian_sqrt(e.S, tol);

    ModuleCPMap out = zero_module_cp_map(q.module, q.p, q.q);
    for (std::size_t i = 0; i < q.piX_images.size(); ++i)
        out.images[i] = q.W.adjoint() * rootS * q.piX_images[i] * rootT * q.V;
    return out;
}

RNDerivative rn_derivative(const ModuleCPMap& psi, const ModuleCPMap& phi,
                           const TolerancePolicy& tol) {
    if (!psi.same_shape(phi))
        throw ShapeMismatch("rn_derivative: maps have different shapes");
    const DominationVerdict order = dominates(psi, phi, DominationMode::complete, tol);
    if (!order.dominated)
        throw NotDominated("rn_derivative: psi is not dominated by phi (Choi margin "
                           + std::to_string(order.margin) + ")");

    const ModuleStinespring qphi = construct_stinespring(phi, tol);
    const ModuleStinespring qpsi = construct_stinespring(psi, tol);

    const CMatrix fromJ = algebra_span_columns(qphi.pi_phi);
    const CMatrix toJ = algebra_span_columns(qpsi.pi_phi);
    const LeastSquaresFit fitJ = least_squares_intertwiner(fromJ, toJ, tol);

    const CMatrix fromI = module_span_columns(qphi);
    const CMatrix toI = module_span_columns(qpsi);
    const LeastSquaresFit fitI = least_squares_intertwiner(fromI, toI, tol);

    if (fitJ.residual > kIntertwinerGate * std::max(1.0, fromJ.norm()) ||
        fitI.residual > kIntertwinerGate * std::max(1.0, fromI.norm()))
        throw NotDominated("rn_derivative: intertwiner residual exceeds the acceptance gate");

    RNDerivative d;
    d.J = fitJ.map;
    d.Imap = fitI.map;
    d.Delta1 = 0.5 * (d.J.adjoint() * d.J + (d.J.adjoint() * d.J).adjoint());
    d.Delta2 = 0.5 * (d.Imap.adjoint() * d.Imap + (d.Imap.adjoint() * d.Imap).adjoint());
    return d;
}

Reconstruction reconstruct_stinespring(const ModuleStinespring& q, const RNDerivative& d,
                                       const TolerancePolicy& tol) {
    if (d.Delta1.rows() != q.dH || d.Delta1.cols() != q.dH ||
        d.Delta2.rows() != q.dK || d.Delta2.cols() != q.dK)
        throw InvalidDerivative("reconstruct_stinespring: derivative does not match the quintuple");
    if (!is_hermitian(d.Delta1, tol.eq_abs_tol) || !is_hermitian(d.Delta2, tol.eq_abs_tol))
        throw InvalidDerivative("reconstruct_stinespring: derivative blocks are not Hermitian");
    if (commutant_defect(q, d.Delta1, d.Delta2) > tol.eq_abs_tol)
        throw InvalidDerivative("reconstruct_stinespring: derivative is not in the commutant");

    Reconstruction out;
    const auto split = [&](const CMatrix& delta, const char* side) {
        const HermitianEigen eig = hermitian_eigs(delta);
        const double norm = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
        if (eig.values.size() &&
            (eig.values(eig.values.size() - 1) < -tol.psd_tol * std::max(norm, 1.0) ||
             eig.values(0) > 1.0 + tol.psd_tol * std::max(norm, 1.0)))
            throw InvalidDerivative(std::string("reconstruct_stinespring: ") + side +
                                    " is outside [0, I]");
        const double cut = tol.rank_rel_tol * norm;
        Eigen::Index rank = 0;
        while (rank < eig.values.size() && eig.values(rank) > cut) ++rank;
        for (Eigen::Index i = 0; i < eig.values.size(); ++i)
            if (eig.values(i) > cut / 10.0 && eig.values(i) < cut * 10.0)
                out.warnings.push_back(std::string("borderline eigenvalue ") +
                                       std::to_string(eig.values(i)) + " of " + side +
                                       " near the kernel threshold " + std::to_string(cut));
        return static_cast<CMatrix>(eig.vectors.leftCols(rank));
    };
    const CMatrix c1 = split(d.Delta1, "Delta1");
    const CMatrix c2 = split(d.Delta2, "Delta2");

    ModuleStinespring& r = out.quintuple;
    r.module = q.module;
    r.p = q.p;
    r.q = q.q;
    r.dH = c1.cols();
    r.dK = c2.cols();

    r.pi_phi.m = q.pi_phi.m;
    r.pi_phi.p = q.pi_phi.p;
    r.pi_phi.d = r.dH;
    r.pi_phi.pi_images.resize(q.pi_phi.pi_images.size());
    for (std::size_t i = 0; i < q.pi_phi.pi_images.size(); ++i)
        r.pi_phi.pi_images[i] = c1.adjoint() * q.pi_phi.pi_images[i] * c1;

    const CMatrix rootDelta1 = hermitian_sqrt(d.Delta1, tol);
    r.V = c1.adjoint() * rootDelta1 * q.V;
    r.pi_phi.V = r.V;
    r.W = c2.adjoint() * q.W;

    r.piX_images.resize(q.piX_images.size());
    for (std::size_t i = 0; i < q.piX_images.size(); ++i)
        r.piX_images[i] = c2.adjoint() * q.piX_images[i] * c1;
    return out;
}

PurityReport is_pure(const ModuleCPMap& phi, const TolerancePolicy& tol) {
    double largest = 0.0;
    for (const CMatrix& img : phi.images) largest = std::max(largest, max_abs(img));
    if (largest == 0.0)
        throw ZeroMap("is_pure: purity is undefined for the zero map");
    const CommutantBasis basis = commutant(construct_stinespring(phi, tol), tol);
    PurityReport report;
    report.commutant_dim = basis.dimension();
    report.pure = basis.dimension() == 1;
    return report;
}

} // namespace cpmod
