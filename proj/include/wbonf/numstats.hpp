#pragma once

#include <cstdint>
#include <vector>

#include "wbonf/error.hpp"

// Scalar probability kernels and reproducible sampling shared by every other
// module: standard normal tail and inverse tail, chi-square(1) tail, and
// two-component mixture draws.

namespace wbonf {

enum class Model : int {
    normal = 0,
    chisq = 1,
};

namespace numstats {

// Phi-bar(t) = P(Z >= t) for Z ~ N(0,1), computed as erfc(t/sqrt(2))/2 so the
// far tail keeps full relative accuracy (naive 1 - CDF cancels around t > 6).
double upper_tail_normal(double t);

// Inverse of upper_tail_normal on (0,1). Rational initial guess refined by
// Newton steps against upper_tail_normal itself, so round-trips hold to a
// few ulps of p across the whole tail.
double upper_tail_normal_inv(double p);

// Standard normal density.
double normal_pdf(double t);

// Two-sided p-value 2*Phi-bar(|t|), clamped to [0,1].
double pvalue_normal_two_sided(double t);

// Upper tail of a central chi-square with 1 df, x >= 0. Routed through the
// squared-normal identity so it matches pvalue_normal_two_sided(sqrt(x))
// bit for bit.
double pvalue_chisq_1df(double x);

// Deterministic 64-bit stream (splitmix64). The state advances by a fixed
// odd constant and the output is a bijective mix of the state, so distinct
// seeds give independent-looking streams and the sequence is a pure function
// of the seed on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1): (k + 0.5) * 2^-53 for a 53-bit k.
    double next_uniform();

    // Standard normal via the inverse-CDF transform of one uniform draw.
    double next_normal();

private:
    std::uint64_t state_;
};

// Per-replicate seed derivation: a splitmix64-style hash of (master, index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// Draws `count` statistics from the two-component mixture. Normal model:
// N(0,1) w.p. 1-pi, N(xi,1) w.p. pi. Chi-square model: the square of that
// draw, i.e. chi^2_1 with non-centrality 0 or xi^2.
std::vector<double> sample_mixture(std::size_t count, double pi, double xi,
                                   Model model, Rng& rng);

}  // namespace numstats
}  // namespace wbonf
