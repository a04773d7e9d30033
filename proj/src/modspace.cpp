#include "cpmod/modspace.hpp"

namespace cpmod {

ModuleElement::ModuleElement(HilbertModule mod, CMatrix v) : module(mod), value(std::move(v)) {
    if (value.rows() != module.k || value.cols() != module.m)
        throw ModuleMismatch("ModuleElement: value shape does not match the module");
}

AlgebraElement::AlgebraElement(MatrixAlgebra alg, CMatrix v) : algebra(alg), value(std::move(v)) {
    if (value.rows() != algebra.m || value.cols() != algebra.m)
        throw ModuleMismatch("AlgebraElement: value shape does not match the algebra");
}

CMatrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index r, Eigen::Index s) {
    if (r < 0 || r >= rows || s < 0 || s >= cols)
        throw DimensionMismatch("matrix_unit: index out of range");
    CMatrix e = CMatrix::Zero(rows, cols);
    e(r, s) = 1.0;
    return e;
}

AlgebraElement module_inner(const ModuleElement& x, const ModuleElement& y) {
    if (!(x.module == y.module))
        throw ModuleMismatch("module_inner: elements live in different modules");
    return AlgebraElement(x.module.algebra(), x.value.adjoint() * y.value);
}

ModuleElement right_action(const ModuleElement& x, const AlgebraElement& a) {
    if (!(x.module.algebra() == a.algebra))
        throw ModuleMismatch("right_action: algebra does not act on this module");
    return ModuleElement(x.module, x.value * a.value);
}

bool fullness_check(const HilbertModule& x, const TolerancePolicy& tol) {
    const auto basis = matrix_unit_basis(x);
    const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
    CMatrix columns(x.m * x.m, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const CMatrix ip = module_inner(basis[i], basis[j]).value;
            columns.col(i * n + j) = Eigen::Map<const CVector>(ip.data(), ip.size());
        }
    return orthonormal_span(columns, tol).cols() == x.m * x.m;
}

std::vector<ModuleElement> matrix_unit_basis(const HilbertModule& x) {
    std::vector<ModuleElement> basis;
    basis.reserve(static_cast<std::size_t>(x.basis_size()));
    for (Eigen::Index r = 0; r < x.k; ++r)
        for (Eigen::Index s = 0; s < x.m; ++s)
            basis.emplace_back(x, matrix_unit(x.k, x.m, r, s));
    return basis;
}

} // namespace cpmod
