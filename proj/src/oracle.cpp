#include "cpmod/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace cpmod {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr double kPi = 3.14159265358979323846;

} // namespace

double GaussianStream::next() {
    const std::uint64_t za = mix64(seed_ + (++counter_) * kGolden);
    const std::uint64_t zb = mix64(seed_ + (++counter_) * kGolden);
    const double u1 = static_cast<double>((za >> 11) + 1) * 0x1.0p-53;   // (0, 1]
    const double u2 = static_cast<double>((zb >> 11) + 1) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Complex GaussianStream::next_complex() {
    const double re = next();
    const double im = next();
    return {re, im};
}

std::vector<ModuleElement> sample_module_elements(const HilbertModule& x, const SampleConfig& cfg) {
    if (cfg.samples < 1)
        throw std::invalid_argument("sample_module_elements: samples must be >= 1");
    GaussianStream stream(cfg.seed);
    std::vector<ModuleElement> out;
    out.reserve(static_cast<std::size_t>(cfg.samples));
    for (int n = 0; n < cfg.samples; ++n) {
        CMatrix value(x.k, x.m);
        for (Eigen::Index r = 0; r < x.k; ++r)
            for (Eigen::Index s = 0; s < x.m; ++s)
                value(r, s) = cfg.scale * stream.next_complex();
        out.emplace_back(x, std::move(value));
    }
    return out;
}

double verify_equivalence_pointwise(const ModuleCPMap& phi, const ModuleCPMap& psi,
                                    const SampleConfig& cfg) {
    if (!phi.same_shape(psi))
        throw ShapeMismatch("verify_equivalence_pointwise: maps have different shapes");
    double worst = 0.0;
    for (const ModuleElement& x : sample_module_elements(phi.module, cfg)) {
        const CMatrix a = phi.apply(x.value);
        const CMatrix b = psi.apply(x.value);
        worst = std::max(worst, operator_norm(a.adjoint() * a - b.adjoint() * b));
    }
    return worst;
}

double verify_factorization(const ModuleStinespring& q, const ModuleCPMap& phi,
                            const SampleConfig& cfg) {
    if (!(q.module == phi.module) || q.p != phi.p || q.q != phi.q)
        throw ShapeMismatch("verify_factorization: quintuple and map have different shapes");
    double worst = 0.0;
    for (const ModuleElement& x : sample_module_elements(phi.module, cfg))
        worst = std::max(worst, operator_norm(phi.apply(x.value) -
                                              q.W.adjoint() * q.piX_apply(x.value) * q.V));
    return worst;
}

} // namespace cpmod
