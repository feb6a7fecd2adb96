#include "wbonf/numstats.hpp"

#include <cmath>

namespace wbonf {
namespace numstats {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Acklam's rational approximation to the standard normal quantile,
// evaluated here for an upper-tail probability q in (0, 0.5].
// Relative error of the raw approximation is about 1.15e-9; callers refine.
double acklam_upper_tail(double q) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (q < p_low) {
        // Tail branch; q is the upper-tail mass, result is positive.
        double r = std::sqrt(-2.0 * std::log(q));
        return -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
               ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    }
    // Central branch: Phi-inverse of the lower-tail p = 1 - q in [0.5, 1 - p_low].
    double u = 0.5 - q;  // p - 0.5, >= 0
    double r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double upper_tail_normal(double t) {
    if (!std::isfinite(t)) {
        raise(Status::domain_error, "upper_tail_normal: non-finite input");
    }
    return 0.5 * std::erfc(t * kInvSqrt2);
}

double normal_pdf(double t) {
    return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

double upper_tail_normal_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        raise(Status::domain_error, "upper_tail_normal_inv: p must lie in (0,1)");
    }
    bool flip = p > 0.5;
    double q = flip ? 1.0 - p : p;
    double t = acklam_upper_tail(q);
    if (flip) t = -t;

    // Newton on f(t) = Phi-bar(t) - p; f'(t) = -pdf(t).
    for (int i = 0; i < 4; ++i) {
        double pdf = normal_pdf(t);
        if (pdf <= 0.0) break;
        double step = (upper_tail_normal(t) - p) / pdf;
        t += step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(t))) break;
    }
    return t;
}

double pvalue_normal_two_sided(double t) {
    if (!std::isfinite(t)) {
        raise(Status::domain_error, "pvalue_normal_two_sided: non-finite input");
    }
    double p = std::erfc(std::abs(t) * kInvSqrt2);
    if (p > 1.0) p = 1.0;
    return p;
}

double pvalue_chisq_1df(double x) {
    if (!(x >= 0.0)) {
        raise(Status::domain_error, "pvalue_chisq_1df: x must be >= 0");
    }
    return pvalue_normal_two_sided(std::sqrt(x));
}

std::uint64_t Rng::next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::next_normal() {
    return upper_tail_normal_inv(next_uniform());
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<double> sample_mixture(std::size_t count, double pi, double xi,
                                   Model model, Rng& rng) {
    if (count < 1) {
        raise(Status::invalid_argument, "sample_mixture: count must be >= 1");
    }
    if (!(pi >= 0.0 && pi <= 1.0)) {
        raise(Status::invalid_argument, "sample_mixture: pi must lie in [0,1]");
    }
    if (!std::isfinite(xi)) {
        raise(Status::invalid_argument, "sample_mixture: xi must be finite");
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        // One uniform decides the component, a second one feeds the
        // inverse-CDF transform; the discrete path is a plain comparison.
        bool alt = rng.next_uniform() < pi;
        double z = rng.next_normal() + (alt ? xi : 0.0);
        out[i] = (model == Model::chisq) ? z * z : z;
    }
    return out;
}

}  // namespace numstats

const char* status_name(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::null_pointer: return "null pointer";
        case Status::invalid_argument: return "invalid argument";
        case Status::domain_error: return "domain error";
        case Status::group_too_small: return "group too small";
        case Status::no_signal: return "no signal";
        case Status::solver_failure: return "solver failure";
        case Status::length_mismatch: return "length mismatch";
        case Status::parse_error: return "parse error";
        case Status::io_error: return "io error";
    }
    return "unknown";
}

}  // namespace wbonf
