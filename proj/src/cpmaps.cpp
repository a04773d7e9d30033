#include "cpmod/cpmaps.hpp"

#include <algorithm>
#include <cmath>

namespace cpmod {

namespace {

// Index of E_st (x) e_u inside the formal basis of A (x) H, (s,t,u) row-major.
inline Eigen::Index tensor_index(Eigen::Index s, Eigen::Index t, Eigen::Index u,
                                 Eigen::Index m, Eigen::Index p) {
    return (s * m + t) * p + u;
}

} // namespace

CMatrix CPMap::apply(const CMatrix& a) const {
    if (a.rows() != m || a.cols() != m)
        throw DimensionMismatch("CPMap::apply: argument is not m x m");
    CMatrix out = CMatrix::Zero(p, p);
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index t = 0; t < m; ++t)
            out += a(s, t) * image(s, t);
    return out;
}

CPMap zero_cp_map(Eigen::Index m, Eigen::Index p) {
    CPMap phi;
    phi.m = m;
    phi.p = p;
    phi.images.assign(static_cast<std::size_t>(m * m), CMatrix::Zero(p, p));
    return phi;
}

ChoiMatrix choi(const CPMap& phi) {
    ChoiMatrix c;
    c.m = phi.m;
    c.p = phi.p;
    c.value.resize(phi.m * phi.p, phi.m * phi.p);
    for (Eigen::Index s = 0; s < phi.m; ++s)
        for (Eigen::Index t = 0; t < phi.m; ++t)
            c.value.block(s * phi.p, t * phi.p, phi.p, phi.p) = phi.image(s, t);
    return c;
}

bool is_completely_positive(const CPMap& phi, const TolerancePolicy& tol) {
    const CMatrix c = choi(phi).value;
    if (c.size() == 0) return true;
    if (!is_hermitian(c, tol.eq_abs_tol)) return false;
    const HermitianEigen eig = hermitian_eigs(c);
    const double norm = eig.values.cwiseAbs().maxCoeff();
    return eig.values(eig.values.size() - 1) >= -tol.psd_tol * norm;
}

CMatrix ModuleCPMap::apply(const CMatrix& x) const {
    if (x.rows() != module.k || x.cols() != module.m)
        throw DimensionMismatch("ModuleCPMap::apply: argument is not k x m");
    CMatrix out = CMatrix::Zero(q, p);
    for (Eigen::Index r = 0; r < module.k; ++r)
        for (Eigen::Index s = 0; s < module.m; ++s)
            out += x(r, s) * image(r, s);
    return out;
}

bool ModuleCPMap::same_shape(const ModuleCPMap& other) const {
    return module == other.module && p == other.p && q == other.q;
}

ModuleCPMap zero_module_cp_map(HilbertModule mod, Eigen::Index p, Eigen::Index q) {
    ModuleCPMap map;
    map.module = mod;
    map.p = p;
    map.q = q;
    map.images.assign(static_cast<std::size_t>(mod.basis_size()), CMatrix::Zero(q, p));
    return map;
}

namespace {

DerivedUnderlying derive_underlying_impl(const ModuleCPMap& map) {
    const Eigen::Index k = map.module.k, m = map.module.m;
    DerivedUnderlying out;
    out.map.m = m;
    out.map.p = map.p;
    out.map.images.resize(static_cast<std::size_t>(m * m));
    // <E_1s, E_1t> = E_st, so row 1 pins phi exactly.
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index t = 0; t < m; ++t)
            out.map.image(s, t) = map.image(0, s).adjoint() * map.image(0, t);
    // Consistency across every basis pair: <E_rs, E_r't> = delta_rr' E_st.
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index rp = 0; rp < k; ++rp)
                for (Eigen::Index t = 0; t < m; ++t) {
                    CMatrix lhs = map.image(r, s).adjoint() * map.image(rp, t);
                    if (r == rp) lhs -= out.map.image(s, t);
                    out.residual = std::max(out.residual, max_abs(lhs));
                }
    return out;
}

} // namespace

DerivedUnderlying derive_underlying(const ModuleCPMap& map, const TolerancePolicy& tol) {
    DerivedUnderlying out = derive_underlying_impl(map);
    if (out.residual > tol.eq_abs_tol)
        throw NotAModuleCPMap("derive_underlying: no consistent underlying map (residual "
                              + std::to_string(out.residual) + ")");
    return out;
}

ValidationReport validate_module_cp(const ModuleCPMap& map, const TolerancePolicy& tol) {
    DerivedUnderlying derived = derive_underlying_impl(map);
    ValidationReport report;
    report.underlying = std::move(derived.map);
    report.residual = derived.residual;
    report.underlying_cp = is_completely_positive(report.underlying, tol);
    report.is_valid = report.residual <= tol.eq_abs_tol && report.underlying_cp;
    return report;
}

bool is_nondegenerate_map(const ModuleCPMap& map, const TolerancePolicy& tol) {
    const Eigen::Index n = map.module.basis_size();
    CMatrix columns(map.q, n * map.p);
    for (Eigen::Index i = 0; i < n; ++i)
        columns.middleCols(i * map.p, map.p) = map.images[static_cast<std::size_t>(i)];
    return orthonormal_span(columns, tol).cols() == map.q;
}

CMatrix PhiStinespring::pi_apply(const CMatrix& a) const {
    if (a.rows() != m || a.cols() != m)
        throw DimensionMismatch("PhiStinespring::pi_apply: argument is not m x m");
    CMatrix out = CMatrix::Zero(d, d);
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index t = 0; t < m; ++t)
            out += a(s, t) * pi(s, t);
    return out;
}

CMatrix stinespring_gram(const CPMap& phi) {
    const Eigen::Index m = phi.m, p = phi.p;
    const Eigen::Index n = m * m * p;
    CMatrix gram = CMatrix::Zero(n, n);
    // <E_st (x) e_u, E_s't' (x) e_v> = delta_ss' (phi(E_tt'))_uv
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index t = 0; t < m; ++t)
            for (Eigen::Index tp = 0; tp < m; ++tp) {
                const CMatrix& block = phi.image(t, tp);
                for (Eigen::Index u = 0; u < p; ++u)
                    for (Eigen::Index v = 0; v < p; ++v)
                        gram(tensor_index(s, t, u, m, p), tensor_index(s, tp, v, m, p)) = block(u, v);
            }
    return gram;
}

GnsConstruction gns_stinespring_full(const CPMap& phi, const TolerancePolicy& tol) {
    if (!is_completely_positive(phi, tol))
        throw NotCP("gns_stinespring: map is not completely positive");
    const Eigen::Index m = phi.m, p = phi.p;
    const Eigen::Index n = m * m * p;

    GnsConstruction out;
    out.quotient = gram_quotient(stinespring_gram(phi), tol);
    const Eigen::Index d = out.quotient.dim;

    out.rep.m = m;
    out.rep.p = p;
    out.rep.d = d;
    out.rep.pi_images.resize(static_cast<std::size_t>(m * m));
    // pi(E_ab) lifts left multiplication: E_ab (E_st (x) e_u) = delta_bs E_at (x) e_u.
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            CMatrix shifted(n, d);
            shifted.setZero();
            for (Eigen::Index t = 0; t < m; ++t)
                for (Eigen::Index u = 0; u < p; ++u)
                    shifted.row(tensor_index(a, t, u, m, p)) =
                        out.quotient.lift.row(tensor_index(b, t, u, m, p));
            out.rep.pi_images[static_cast<std::size_t>(a * m + b)] = out.quotient.to_ortho * shifted;
        }
    // V h = [1 (x) h] with 1 = sum_s E_ss.
    CMatrix embed = CMatrix::Zero(n, p);
    for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index u = 0; u < p; ++u)
            embed(tensor_index(s, s, u, m, p), u) = 1.0;
    out.rep.V = out.quotient.to_ortho * embed;
    return out;
}

CPMap arveson_compress(const PhiStinespring& dil, const CMatrix& t, const TolerancePolicy& tol) {
    if (t.rows() != dil.d || t.cols() != dil.d)
        throw DimensionMismatch("arveson_compress: T is not d x d");
    if (!is_hermitian(t, tol.eq_abs_tol))
        throw NotHermitian("arveson_compress: T is not Hermitian");
    if (t.size() > 0) {
        const HermitianEigen eig = hermitian_eigs(t);
        const double norm = eig.values.cwiseAbs().maxCoeff();
        if (eig.values(eig.values.size() - 1) < -tol.psd_tol * norm)
            throw NotPSD("arveson_compress: T is not PSD");
    }
    const double scale = std::max(operator_norm(t), 1.0);
    for (const CMatrix& pi : dil.pi_images)
        if (max_abs(t * pi - pi * t) > tol.eq_abs_tol * scale)
            throw NotInCommutant("arveson_compress: T does not commute with pi(A)");

    CPMap out;
    out.m = dil.m;
    out.p = dil.p;
    out.images.resize(static_cast<std::size_t>(dil.m * dil.m));
    for (Eigen::Index s = 0; s < dil.m; ++s)
        for (Eigen::Index u = 0; u < dil.m; ++u)
            out.image(s, u) = dil.V.adjoint() * t * dil.pi(s, u) * dil.V;
    return out;
}

} // namespace cpmod
