// dilation.hpp — Stinespring construction for module CP maps.
//
// For a valid Phi: X -> L(H,K) the quintuple (pi_Phi, H_Phi, K_Phi, V, W)
// satisfies Phi(x) = W^* pi_Phi(x) V with W a coisometry (W W^* = I on K_Phi)
// and both minimality spans full. H_Phi is the GNS space of the underlying
// map phi on A (x) H; K_Phi is the GNS space of the form
// <x (x) h, y (x) h'> = <h, phi(<x,y>) h'> on X (x) H, mapped into K by W^*.
// Both quotients run through the same gram_quotient code path, so the
// construction is deterministic.

#pragma once

#include "cpmod/cpmaps.hpp"

namespace cpmod {

struct ModuleStinespring {
    HilbertModule module;
    Eigen::Index p = 0, q = 0;        // dims of H and K
    Eigen::Index dH = 0, dK = 0;      // dims of H_Phi and K_Phi
    PhiStinespring pi_phi;            // underlying representation on H_Phi
    std::vector<CMatrix> piX_images;  // k*m values pi_Phi(E_rs), each dK x dH
    CMatrix V;                        // dH x p
    CMatrix W;                        // dK x q, W W^* = I

    const CMatrix& piX(Eigen::Index r, Eigen::Index s) const { return piX_images[r * module.m + s]; }
    CMatrix piX_apply(const CMatrix& x) const;
};

struct UnitaryEquivalenceWitness {
    CMatrix U1;                 // H_Phi-level
    CMatrix U2;                 // K_Phi-level
    double max_residual = 0.0;  // worst of the unitarity and intertwining defects
};

struct QuintupleEquivalence {
    bool equivalent = false;
    UnitaryEquivalenceWitness witness;
};

// Builds the quintuple; throws NotAModuleCPMap when Phi fails validation.
ModuleStinespring construct_stinespring(const ModuleCPMap& map, const TolerancePolicy& tol);

// Minimality spanning sets, as matrices of columns: pi(E_st) V e_u over all
// (s,t,u) at the algebra level, pi_Phi(E_rs) V e_u over all (r,s,u) at the
// module level. Both span their dilation space for a constructed quintuple.
CMatrix algebra_span_columns(const PhiStinespring& rep);
CMatrix module_span_columns(const ModuleStinespring& q);

// True iff piX(x)^* piX(y) = pi_phi(<x,y>) on all basis pairs.
bool check_representation(const std::vector<CMatrix>& piX_images, const PhiStinespring& pi_phi,
                          const TolerancePolicy& tol);

// True iff [pi_X(X) H] = K and [pi_X(X)^* K] = H.
bool is_nondegenerate_representation(const std::vector<CMatrix>& piX_images,
                                     const TolerancePolicy& tol);

// Decides unitary equivalence of two minimal quintuples over the same H, K:
// U1, U2 are fitted on the minimality spanning sets and the verdict checks
// U1 V1 = V2 and U2 pi1(x) = pi2(x) U1 plus unitarity, all within eq_abs_tol.
// (The W components are not compared; U2 W1 = W2 can only hold when both
// quintuples dilate the same map, whereas two maps are equivalent exactly
// when their constructions match in the representation and V.) Throws
// NotMinimal / ShapeMismatch on precondition failure; dimension mismatches
// between the dilation spaces yield a false verdict.
QuintupleEquivalence quintuples_unitarily_equivalent(const ModuleStinespring& q1,
                                                     const ModuleStinespring& q2,
                                                     const TolerancePolicy& tol);

} // namespace cpmod
