// modspace.hpp — The canonical finite-dimensional Hilbert C*-module:
// X = M_{k x m}(C) over A = M_m(C), with <x,y> = x^* y and right
// multiplication as the module action. This family is always full.

#pragma once

#include <vector>

#include "cpmod/numerics.hpp"

namespace cpmod {

struct MatrixAlgebra {
    Eigen::Index m = 1;   // A = M_m(C), unital
    bool operator==(const MatrixAlgebra&) const = default;
};

struct HilbertModule {
    Eigen::Index k = 1;   // elements are k x m matrices
    Eigen::Index m = 1;
    MatrixAlgebra algebra() const { return {m}; }
    Eigen::Index basis_size() const { return k * m; }
    bool operator==(const HilbertModule&) const = default;
};

struct ModuleElement {
    HilbertModule module;
    CMatrix value;   // k x m
    ModuleElement(HilbertModule mod, CMatrix v);
};

struct AlgebraElement {
    MatrixAlgebra algebra;
    CMatrix value;   // m x m
    AlgebraElement(MatrixAlgebra alg, CMatrix v);
};

// E_{rs} with 0-based indices, as a rows x cols matrix.
CMatrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index r, Eigen::Index s);

// <x,y> = x^* y; conjugate-linear in x, A-linear in y.
AlgebraElement module_inner(const ModuleElement& x, const ModuleElement& y);

// x . a = x a.
ModuleElement right_action(const ModuleElement& x, const AlgebraElement& a);

// True iff span{ <E_i, E_j> } over all matrix-unit pairs is all of A.
bool fullness_check(const HilbertModule& x, const TolerancePolicy& tol);

// The k*m matrix units of X in row-major order.
std::vector<ModuleElement> matrix_unit_basis(const HilbertModule& x);

} // namespace cpmod
