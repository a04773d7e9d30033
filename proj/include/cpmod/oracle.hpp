// oracle.hpp — Sampled brute-force verifiers.
//
// These re-check defining identities on pseudo-random module elements,
// bypassing the constructions they certify. Everything in `compare` is exact
// on the matrix-unit basis, so by linearity the sampled checks are redundant
// in exact arithmetic; their role is to catch implementation bugs.
//
// Generator contract (so results are reproducible across implementations):
// draw j of a stream with seed s is splitmix64's finalizer applied to
// s + (j+1) * 0x9E3779B97F4A7C15; uniforms in (0,1] are ((z >> 11)+1) * 2^-53;
// normals come from the Box-Muller transform, one per uniform pair, and a
// complex sample is (normal, normal). No state beyond the draw counter.

#pragma once

#include <cstdint>

#include "cpmod/dilation.hpp"

namespace cpmod {

class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}
    double next();            // standard normal
    Complex next_complex();   // independent standard normal real and imaginary parts

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

struct SampleConfig {
    std::uint64_t seed = 0;
    int samples = 64;
    double scale = 1.0;
};

// `samples` elements of X with entries scale * (complex Gaussian).
std::vector<ModuleElement> sample_module_elements(const HilbertModule& x, const SampleConfig& cfg);

// max over samples of || Phi(x)^* Phi(x) - Psi(x)^* Psi(x) ||.
double verify_equivalence_pointwise(const ModuleCPMap& phi, const ModuleCPMap& psi,
                                    const SampleConfig& cfg);

// max over samples of || Phi(x) - W^* pi_Phi(x) V ||.
double verify_factorization(const ModuleStinespring& q, const ModuleCPMap& phi,
                            const SampleConfig& cfg);

} // namespace cpmod
