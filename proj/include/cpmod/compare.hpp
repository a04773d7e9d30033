// compare.hpp — Comparison theory for module CP maps.
//
// Equivalence Phi ~ Psi (equal underlying maps) with its connecting partial
// isometry, the domination preorder Psi =< Phi, the commutant of pi_Phi,
// compressions Phi_{T(+)S}(x) = W^* sqrt(S) pi_Phi(x) sqrt(T) V, the
// Radon-Nikodym derivative Delta = Delta1 (+) Delta2 of a dominated map, the
// recovery of the dominated map's Stinespring quintuple from Delta, and the
// purity test (trivial commutant).
//
// Equivalence classes and the dominated interval [0, Phi] are never
// materialized; they are represented by these predicates and witnesses.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpmod/dilation.hpp"

namespace cpmod {

// ── Commutant ────────────────────────────────────────────────────────────────

// A pair T (+) S with pi(x) T = S pi(x) and pi(x)^* S = T pi(x)^* for all x.
struct CommutantElement {
    CMatrix T;   // dH x dH
    CMatrix S;   // dK x dK
};

struct CommutantBasis {
    Eigen::Index dH = 0, dK = 0;
    std::vector<CommutantElement> elements;   // orthonormal in the trace inner product
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(elements.size()); }
};

// ── Radon-Nikodym derivative ─────────────────────────────────────────────────

// J : H_Phi -> H_Psi and Imap : K_Phi -> K_Psi are the contractions fitted on
// the minimality spanning sets; Delta1 = J^* J, Delta2 = Imap^* Imap form a
// commutant element with 0 <= Delta <= I.
struct RNDerivative {
    CMatrix J;
    CMatrix Imap;
    CMatrix Delta1;
    CMatrix Delta2;
};

// ── Operations ───────────────────────────────────────────────────────────────

// Phi ~ Psi iff the derived underlying maps agree on all matrix units.
bool equivalent(const ModuleCPMap& a, const ModuleCPMap& b, const TolerancePolicy& tol);

// The unique V in L(K) with V Psi(x) = Phi(x), V V^* the projector onto
// [Phi(X)H] and V^* V the projector onto [Psi(X)H]; it maps Psi(x)h to
// Phi(x)h and vanishes on the complement. Throws NotEquivalent.
CMatrix connecting_partial_isometry(const ModuleCPMap& phi, const ModuleCPMap& psi,
                                    const TolerancePolicy& tol);

enum class DominationMode { complete, pointwise_sampled };

struct DominationVerdict {
    bool dominated = false;
    DominationMode mode = DominationMode::complete;
    double margin = 0.0;   // least eigenvalue observed in the order test
};

// Decides Psi =< Phi. `complete` tests the Choi matrix of phi - psi (the
// order the Radon-Nikodym construction needs); `pointwise_sampled` tests
// Psi(x)^* Psi(x) <= Phi(x)^* Phi(x) on seeded samples, a necessary
// condition.
DominationVerdict dominates(const ModuleCPMap& psi, const ModuleCPMap& phi, DominationMode mode,
                            const TolerancePolicy& tol, std::uint64_t seed = 0, int samples = 64);

// Orthonormal basis of the commutant of pi_Phi, computed as the null space
// of the stacked intertwining equations over pairs (T, S).
CommutantBasis commutant(const ModuleStinespring& q, const TolerancePolicy& tol);

// The unique S completing T to a commutant element (pi_Phi is
// non-degenerate, so S is determined on [pi_Phi(X) H_Phi] = K_Phi). Throws
// NoCompatibleS when the fit residual exceeds tolerance.
CMatrix complete_commutant_element(const ModuleStinespring& q, const CMatrix& t,
                                   const TolerancePolicy& tol);

// Entrywise pair (sqrt(T), sqrt(S)); stays in the commutant for PSD input.
CommutantElement commutant_element_sqrt(const CommutantElement& e, const TolerancePolicy& tol);

// Phi_{T(+)S}(x) = W^* sqrt(S) pi_Phi(x) sqrt(T) V on all basis elements;
// the result is a valid module CP map with underlying phi_{T^2}. Throws
// NotPSD / NotInCommutant.
ModuleCPMap compress(const ModuleStinespring& q, const CommutantElement& e,
                     const TolerancePolicy& tol);

// Radon-Nikodym derivative of Psi with respect to Phi; requires Psi =< Phi
// in the complete order and intertwiner residuals below the acceptance gate
// (NotDominated otherwise). Psi ~ compress(Q, sqrt(Delta)) and the
// underlying maps satisfy psi = phi_{Delta1}.
RNDerivative rn_derivative(const ModuleCPMap& psi, const ModuleCPMap& phi,
                           const TolerancePolicy& tol);

struct Reconstruction {
    ModuleStinespring quintuple;
    std::vector<std::string> warnings;   // borderline rank decisions
};

// Compression of Q to the orthogonal complements of ker Delta1 and
// ker Delta2: (p2 pi_Phi(.) p1, H (-) ker Delta1, K (-) ker Delta2,
// p1 sqrt(Delta1) V, p2 W) in compressed coordinates. Unitarily equivalent
// to the Stinespring construction of the dominated map the derivative came
// from. Throws InvalidDerivative.
Reconstruction reconstruct_stinespring(const ModuleStinespring& q, const RNDerivative& d,
                                       const TolerancePolicy& tol);

struct PurityReport {
    bool pure = false;
    Eigen::Index commutant_dim = 0;
};

// Pure iff the commutant of the constructed quintuple is trivial. Throws
// ZeroMap for the zero map (purity is undefined there).
PurityReport is_pure(const ModuleCPMap& phi, const TolerancePolicy& tol);

} // namespace cpmod
