#include "cpmod/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace cpmod {

namespace {

inline Eigen::Index tensor_index(Eigen::Index first, Eigen::Index second, Eigen::Index u,
                                 Eigen::Index inner, Eigen::Index p) {
    return (first * inner + second) * p + u;
}

// Gram of the formal basis E_rs (x) e_u of X (x) H:
// <E_rs (x) e_u, E_r's' (x) e_v> = delta_rr' (phi(E_ss'))_uv.
CMatrix module_gram(const ModuleCPMap& map, const CPMap& phi) {
    const Eigen::Index k = map.module.k, m = map.module.m, p = map.p;
    const Eigen::Index n = k * m * p;
    CMatrix gram = CMatrix::Zero(n, n);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index sp = 0; sp < m; ++sp) {
                const CMatrix& block = phi.image(s, sp);
                for (Eigen::Index u = 0; u < p; ++u)
                    for (Eigen::Index v = 0; v < p; ++v)
                        gram(tensor_index(r, s, u, m, p), tensor_index(r, sp, v, m, p)) = block(u, v);
            }
    return gram;
}

bool is_minimal(const ModuleStinespring& q, const TolerancePolicy& tol) {
    return orthonormal_span(algebra_span_columns(q.pi_phi), tol).cols() == q.dH &&
           orthonormal_span(module_span_columns(q), tol).cols() == q.dK;
}

double unitary_defect(const CMatrix& u) {
    const CMatrix id = CMatrix::Identity(u.rows(), u.rows());
    const CMatrix idc = CMatrix::Identity(u.cols(), u.cols());
    return std::max(max_abs(u * u.adjoint() - id), max_abs(u.adjoint() * u - idc));
}

} // namespace

CMatrix algebra_span_columns(const PhiStinespring& rep) {
    CMatrix cols(rep.d, rep.m * rep.m * rep.p);
    for (Eigen::Index i = 0; i < rep.m * rep.m; ++i)
        cols.middleCols(i * rep.p, rep.p) = rep.pi_images[static_cast<std::size_t>(i)] * rep.V;
    return cols;
}

CMatrix module_span_columns(const ModuleStinespring& q) {
    CMatrix cols(q.dK, q.module.basis_size() * q.p);
    for (Eigen::Index i = 0; i < q.module.basis_size(); ++i)
        cols.middleCols(i * q.p, q.p) = q.piX_images[static_cast<std::size_t>(i)] * q.V;
    return cols;
}

CMatrix ModuleStinespring::piX_apply(const CMatrix& x) const {
    if (x.rows() != module.k || x.cols() != module.m)
        throw DimensionMismatch("ModuleStinespring::piX_apply: argument is not k x m");
    CMatrix out = CMatrix::Zero(dK, dH);
    for (Eigen::Index r = 0; r < module.k; ++r)
        for (Eigen::Index s = 0; s < module.m; ++s)
            out += x(r, s) * piX(r, s);
    return out;
}

ModuleStinespring construct_stinespring(const ModuleCPMap& map, const TolerancePolicy& tol) {
    const ValidationReport report = validate_module_cp(map, tol);
    if (!report.is_valid)
        throw NotAModuleCPMap("construct_stinespring: map failed validation (residual "
                              + std::to_string(report.residual) + ")");
    const CPMap& phi = report.underlying;
    const Eigen::Index k = map.module.k, m = map.module.m, p = map.p;

    ModuleStinespring q;
    q.module = map.module;
    q.p = p;
    q.q = map.q;

    const GnsConstruction gns = gns_stinespring_full(phi, tol);
    q.pi_phi = gns.rep;
    q.dH = gns.rep.d;
    q.V = gns.rep.V;

    const GramQuotient quotientK = gram_quotient(module_gram(map, phi), tol);
    q.dK = quotientK.dim;

    // pi_Phi(E_rs) lifts left multiplication A (x) H -> X (x) H:
    // E_rs (E_s't' (x) e_u) = delta_ss' E_rt' (x) e_u.
    const Eigen::Index nK = k * m * p;
    q.piX_images.resize(static_cast<std::size_t>(k * m));
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index s = 0; s < m; ++s) {
            CMatrix shifted = CMatrix::Zero(nK, q.dH);
            for (Eigen::Index t = 0; t < m; ++t)
                for (Eigen::Index u = 0; u < p; ++u)
                    shifted.row(tensor_index(r, t, u, m, p)) =
                        gns.quotient.lift.row(tensor_index(s, t, u, m, p));
            q.piX_images[static_cast<std::size_t>(r * m + s)] = quotientK.to_ortho * shifted;
        }

    // W^* is the isometry K_Phi -> K sending [E_rs (x) e_u] to Phi(E_rs) e_u.
    CMatrix evaluated(map.q, nK);
    for (Eigen::Index i = 0; i < k * m; ++i)
        evaluated.middleCols(i * p, p) = map.images[static_cast<std::size_t>(i)];
    q.W = (evaluated * quotientK.lift).adjoint();
    return q;
}

bool check_representation(const std::vector<CMatrix>& piX_images, const PhiStinespring& pi_phi,
                          const TolerancePolicy& tol) {
    const Eigen::Index m = pi_phi.m;
    if (piX_images.empty() || static_cast<Eigen::Index>(piX_images.size()) % m != 0)
        throw DimensionMismatch("check_representation: image list does not split into rows of length m");
    const Eigen::Index k = static_cast<Eigen::Index>(piX_images.size()) / m;
    for (const CMatrix& img : piX_images)
        if (img.cols() != pi_phi.d)
            throw DimensionMismatch("check_representation: image does not act on the dilation space");
    // pi_X(E_rs)^* pi_X(E_r't) = delta_rr' pi_phi(E_st)
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index rp = 0; rp < k; ++rp)
                for (Eigen::Index t = 0; t < m; ++t) {
                    CMatrix lhs = piX_images[static_cast<std::size_t>(r * m + s)].adjoint() *
                                  piX_images[static_cast<std::size_t>(rp * m + t)];
                    if (r == rp) lhs -= pi_phi.pi(s, t);
                    if (max_abs(lhs) > tol.eq_abs_tol) return false;
                }
    return true;
}

bool is_nondegenerate_representation(const std::vector<CMatrix>& piX_images,
                                     const TolerancePolicy& tol) {
    if (piX_images.empty())
        throw DimensionMismatch("is_nondegenerate_representation: empty image list");
    const Eigen::Index dK = piX_images.front().rows();
    const Eigen::Index dH = piX_images.front().cols();
    const Eigen::Index n = static_cast<Eigen::Index>(piX_images.size());
    CMatrix forward(dK, n * dH);
    CMatrix backward(dH, n * dK);
    for (Eigen::Index i = 0; i < n; ++i) {
        forward.middleCols(i * dH, dH) = piX_images[static_cast<std::size_t>(i)];
        backward.middleCols(i * dK, dK) = piX_images[static_cast<std::size_t>(i)].adjoint();
    }
    return orthonormal_span(forward, tol).cols() == dK &&
           orthonormal_span(backward, tol).cols() == dH;
}

QuintupleEquivalence quintuples_unitarily_equivalent(const ModuleStinespring& q1,
                                                     const ModuleStinespring& q2,
                                                     const TolerancePolicy& tol) {
    if (!(q1.module == q2.module) || q1.p != q2.p || q1.q != q2.q)
        throw ShapeMismatch("quintuples_unitarily_equivalent: quintuples dilate maps of different shapes");
    if (!is_minimal(q1, tol) || !is_minimal(q2, tol))
        throw NotMinimal("quintuples_unitarily_equivalent: a quintuple fails its minimality spans");

    QuintupleEquivalence out;
    if (q1.dH != q2.dH || q1.dK != q2.dK) return out;

    out.witness.U1 = least_squares_intertwiner(algebra_span_columns(q1.pi_phi),
                                               algebra_span_columns(q2.pi_phi), tol).map;
    out.witness.U2 = least_squares_intertwiner(module_span_columns(q1),
                                               module_span_columns(q2), tol).map;
    const CMatrix& u1 = out.witness.U1;
    const CMatrix& u2 = out.witness.U2;

    // Verdict: unitarity, representation intertwining, V transport. W is not
    // compared; U2 W1 = W2 holds exactly when both quintuples dilate the same
    // map (apply the factorizations to the minimality spanning set), while
    // equivalent maps in general differ there, e.g. by a scalar twist
    // e^{i theta} Phi.
    double res = std::max(unitary_defect(u1), unitary_defect(u2));
    res = std::max(res, max_abs(u1 * q1.V - q2.V));
    for (Eigen::Index i = 0; i < q1.module.basis_size(); ++i)
        res = std::max(res, max_abs(u2 * q1.piX_images[static_cast<std::size_t>(i)] -
                                    q2.piX_images[static_cast<std::size_t>(i)] * u1));
    out.witness.max_residual = res;
    out.equivalent = res <= tol.eq_abs_tol;
    return out;
}

} // namespace cpmod
