// numerics.hpp — Dense complex-matrix kernel and tolerance policy.
//
// Every rank, span, square-root, positivity, and least-squares decision made
// elsewhere in the library goes through this header, so that a single
// tolerance policy controls all verdicts. Decompositions are Eigen's; the
// deterministic ordering/phase conventions layered on top make constructed
// bases and dilations stable from run to run:
//
//   * eigenvalues / singular values are ordered descending,
//   * each basis column is phased so its first nonzero entry is real
//     positive.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "cpmod/errors.hpp"

namespace cpmod {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// ── Tolerance policy ─────────────────────────────────────────────────────────

// rank_rel_tol: rank cut, relative to the largest singular value.
// psd_tol:      positivity slack, relative to the operator norm.
// eq_abs_tol:   absolute entrywise bound for operator equalities.
struct TolerancePolicy {
    double rank_rel_tol = 1e-9;
    double psd_tol      = 1e-9;
    double eq_abs_tol   = 1e-8;
};

// Policy with eq_abs_tol = eq_abs and the other tolerances scaled by the same
// factor relative to the defaults. Throws std::invalid_argument unless
// eq_abs > 0.
TolerancePolicy scaled_tolerances(double eq_abs);

// ── Elementary predicates and norms ──────────────────────────────────────────

bool is_hermitian(const CMatrix& m, double abs_tol);

// Largest singular value (0 for empty matrices).
double operator_norm(const CMatrix& m);

// Largest entrywise modulus (0 for empty matrices).
double max_abs(const CMatrix& m);

// ── Hermitian eigendecompositions ────────────────────────────────────────────

// Eigenvalues descending, eigenvectors phase-fixed as described above.
struct HermitianEigen {
    Eigen::VectorXd values;
    CMatrix vectors;   // columns
};
HermitianEigen hermitian_eigs(const CMatrix& m);

// Square root of a Hermitian PSD matrix. Eigenvalues in
// [-psd_tol*||m||, 0) are clamped to 0. Throws NotHermitian / NotPSD.
CMatrix hermitian_sqrt(const CMatrix& m, const TolerancePolicy& tol);

// Projector onto the eigenspaces of a Hermitian PSD matrix with eigenvalue
// <= rank_rel_tol * ||m||; I - kernel_projector(m) projects onto the range.
CMatrix kernel_projector(const CMatrix& m, const TolerancePolicy& tol);

// Orthonormal eigenbasis of the complement of that kernel, i.e. of range(m).
CMatrix range_basis(const CMatrix& m, const TolerancePolicy& tol);

// ── Spans and least squares ──────────────────────────────────────────────────

// Orthonormal basis of the column span of `columns` (an n x N matrix whose
// columns are the input vectors; N = 0 and rank 0 are fine).
CMatrix orthonormal_span(const CMatrix& columns, const TolerancePolicy& tol);

// Hermitian idempotent with range equal to the column span.
CMatrix projector_onto_span(const CMatrix& columns, const TolerancePolicy& tol);

struct LeastSquaresFit {
    CMatrix map;
    double residual = 0.0;   // ||map*from - to||_F
};

// Minimal-norm L minimizing ||L*from - to||_F over all linear maps; when the
// correspondence from_i -> to_i is consistent, L is its exact linear
// extension and vanishes on the orthogonal complement of span(from).
LeastSquaresFit least_squares_intertwiner(const CMatrix& from, const CMatrix& to,
                                          const TolerancePolicy& tol);

// Loewner order a <= b: min eig(b - a) >= -psd_tol * max(||a||, ||b||, 1).
bool psd_order_leq(const CMatrix& a, const CMatrix& b, const TolerancePolicy& tol);

// ── Gram quotients ───────────────────────────────────────────────────────────

// Orthonormal coordinates for the inner-product space a PSD Gram matrix G
// defines on coefficient vectors: (to_ortho x)^*(to_ortho y) = x^* G y up to
// the rank cut, and to_ortho * lift = I on the quotient. This is the single
// code path used to realize GNS-type quotient spaces.
struct GramQuotient {
    Eigen::Index dim = 0;
    CMatrix to_ortho;   // dim x n
    CMatrix lift;       // n x dim
};
GramQuotient gram_quotient(const CMatrix& gram, const TolerancePolicy& tol);

} // namespace cpmod
