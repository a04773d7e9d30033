// cpmaps.hpp — Completely positive maps at both levels.
//
// phi: A -> L(H) is stored by its values on the matrix units of A = M_m(C)
// and certified CP by its Choi matrix. Phi: X -> L(H,K) is stored by its
// values on the matrix units of X = M_{k x m}(C); it is a module CP map
// exactly when Phi(x)^* Phi(y) = phi(<x,y>) for some CP phi, which is then
// unique (the module is full) and recovered here from the first row of
// matrix units. The classical minimal Stinespring dilation of phi and the
// Arveson compression phi_T by a commutant element are also built here.

#pragma once

#include <vector>

#include "cpmod/modspace.hpp"

namespace cpmod {

// ── phi: A -> L(H) ───────────────────────────────────────────────────────────

struct CPMap {
    Eigen::Index m = 1;               // domain M_m(C)
    Eigen::Index p = 0;               // dim H
    std::vector<CMatrix> images;      // m*m values phi(E_st), (s,t) row-major, each p x p

    const CMatrix& image(Eigen::Index s, Eigen::Index t) const { return images[s * m + t]; }
    CMatrix& image(Eigen::Index s, Eigen::Index t) { return images[s * m + t]; }
    CMatrix apply(const CMatrix& a) const;   // linear extension
};

CPMap zero_cp_map(Eigen::Index m, Eigen::Index p);

struct ChoiMatrix {
    Eigen::Index m = 1, p = 0;
    CMatrix value;   // (m p) x (m p), block (s,t) equals phi(E_st)
};

ChoiMatrix choi(const CPMap& phi);

// True iff the Choi matrix is Hermitian and PSD within psd_tol.
bool is_completely_positive(const CPMap& phi, const TolerancePolicy& tol);

// ── Phi: X -> L(H,K) ─────────────────────────────────────────────────────────

struct ModuleCPMap {
    HilbertModule module;             // k, m
    Eigen::Index p = 0, q = 0;        // dims of H and K
    std::vector<CMatrix> images;      // k*m values Phi(E_rs), (r,s) row-major, each q x p

    const CMatrix& image(Eigen::Index r, Eigen::Index s) const { return images[r * module.m + s]; }
    CMatrix& image(Eigen::Index r, Eigen::Index s) { return images[r * module.m + s]; }
    CMatrix apply(const CMatrix& x) const;
    bool same_shape(const ModuleCPMap& other) const;
};

ModuleCPMap zero_module_cp_map(HilbertModule mod, Eigen::Index p, Eigen::Index q);

struct DerivedUnderlying {
    CPMap map;
    double residual = 0.0;   // max over basis pairs of max|Phi(x)^*Phi(y) - phi(<x,y>)|
};

// phi(E_st) := Phi(E_1s)^* Phi(E_1t), with the residual certifying that the
// same phi is consistent across all rows. Throws NotAModuleCPMap when the
// residual exceeds eq_abs_tol (no underlying map exists).
DerivedUnderlying derive_underlying(const ModuleCPMap& map, const TolerancePolicy& tol);

struct ValidationReport {
    bool is_valid = false;
    CPMap underlying;
    double residual = 0.0;
    bool underlying_cp = false;
};

// Non-throwing wrapper: derive_underlying plus the CP certificate of phi.
ValidationReport validate_module_cp(const ModuleCPMap& map, const TolerancePolicy& tol);

// True iff span{ Phi(E_rs) e_j } = K.
bool is_nondegenerate_map(const ModuleCPMap& map, const TolerancePolicy& tol);

// ── Minimal Stinespring dilation of phi ──────────────────────────────────────

struct PhiStinespring {
    Eigen::Index m = 1, p = 0;
    Eigen::Index d = 0;               // dim H_phi
    std::vector<CMatrix> pi_images;   // m*m values pi(E_st), each d x d
    CMatrix V;                        // d x p, phi(a) = V^* pi(a) V

    const CMatrix& pi(Eigen::Index s, Eigen::Index t) const { return pi_images[s * m + t]; }
    CMatrix pi_apply(const CMatrix& a) const;
};

// Gram matrix of the formal basis E_st (x) e_u of A (x) H under
// <a (x) h, b (x) g> = <h, phi(a^* b) g>; the GNS space is its quotient.
CMatrix stinespring_gram(const CPMap& phi);

struct GnsConstruction {
    PhiStinespring rep;
    GramQuotient quotient;   // coordinates on A (x) H used by the dilation
};

GnsConstruction gns_stinespring_full(const CPMap& phi, const TolerancePolicy& tol);

inline PhiStinespring gns_stinespring(const CPMap& phi, const TolerancePolicy& tol) {
    return gns_stinespring_full(phi, tol).rep;
}

// Arveson compression phi_T(a) = V^* T pi(a) V for Hermitian PSD T in the
// commutant of pi(A). Throws NotHermitian / NotPSD / NotInCommutant.
CPMap arveson_compress(const PhiStinespring& dil, const CMatrix& t, const TolerancePolicy& tol);

} // namespace cpmod
