#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "wbonf/numstats.hpp"

using namespace wbonf;
using namespace wbonf::numstats;

TEST_CASE("upper tail at zero is exactly one half") {
    CHECK(upper_tail_normal(0.0) == 0.5);
}

TEST_CASE("upper tail matches the long-double erfc oracle to 1e-12") {
    for (double t = -8.0; t <= 8.0; t += 0.0625) {
        long double ref = oracle::upper_tail_normal_ld(t);
        double got = upper_tail_normal(t);
        CHECK(std::abs(got - static_cast<double>(ref)) <=
              1e-12 * static_cast<double>(ref));
    }
    // Far tail: still accurate in relative terms where representable.
    for (double t : {10.0, 15.0, 20.0, 26.0}) {
        long double ref = oracle::upper_tail_normal_ld(t);
        CHECK(std::abs(upper_tail_normal(t) - static_cast<double>(ref)) <=
              1e-11 * static_cast<double>(ref));
    }
    CHECK(upper_tail_normal(40.0) <= 1e-300);
}

TEST_CASE("upper tail frozen value at z=1.959963985") {
    // Oracle value: Phibar(1.959963985) = 0.02499999997...
    CHECK(std::abs((upper_tail_normal(1.959963985)) - (0.025)) <= (1e-9));
}

TEST_CASE("large negative argument equals the complement") {
    CHECK(upper_tail_normal(-10.0) == 1.0 - upper_tail_normal(10.0));
}

TEST_CASE("complement identity within 1e-14") {
    for (double t = 0.0; t <= 8.0; t += 0.125) {
        CHECK(std::abs(upper_tail_normal(t) + upper_tail_normal(-t) - 1.0) <= 1e-14);
    }
}

TEST_CASE("upper tail strictly decreasing on a grid") {
    // Below t ~ -8.3 the value saturates to 1 in double precision, so the
    // strict ordering is checked on the representable range.
    double prev = upper_tail_normal(-8.0);
    for (double t = -7.5; t <= 12.0; t += 0.5) {
        double cur = upper_tail_normal(t);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("upper tail rejects non-finite input") {
    CHECK_THROWS_AS(upper_tail_normal(std::nan("")), Error);
    CHECK_THROWS_AS(upper_tail_normal(INFINITY), Error);
}

TEST_CASE("inverse upper tail: anchors and round trips") {
    CHECK(upper_tail_normal_inv(0.5) == 0.0);
    CHECK(std::abs((upper_tail_normal_inv(0.025)) - (1.959963985)) <= (1e-8));

    // Round trip |Phibar(inv(p)) - p| <= 1e-12 p across the tail.
    for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 1e-3, 0.1, 0.3, 0.5, 0.7,
                     0.9, 0.99, 0.999999, 1.0 - 1e-12}) {
        double t = upper_tail_normal_inv(p);
        CHECK(std::abs(upper_tail_normal(t) - p) <= 1e-12 * p);
    }
    double t8 = upper_tail_normal_inv(1e-8);
    CHECK(std::abs(upper_tail_normal(t8) - 1e-8) <= 1e-20);
}

TEST_CASE("inverse upper tail domain errors") {
    CHECK_THROWS_AS(upper_tail_normal_inv(0.0), Error);
    CHECK_THROWS_AS(upper_tail_normal_inv(1.0), Error);
    CHECK_THROWS_AS(upper_tail_normal_inv(-0.1), Error);
    CHECK_THROWS_AS(upper_tail_normal_inv(1.5), Error);
}

TEST_CASE("two-sided normal p-value") {
    CHECK(pvalue_normal_two_sided(0.0) == 1.0);
    CHECK(std::abs((pvalue_normal_two_sided(1.959963985)) - (0.05)) <= (1e-9));
    for (double t : {0.3, 1.7, 4.2, 9.0}) {
        CHECK(pvalue_normal_two_sided(t) == pvalue_normal_two_sided(-t));
    }
    CHECK_THROWS_AS(pvalue_normal_two_sided(std::nan("")), Error);
}

TEST_CASE("chi-square(1) p-value") {
    CHECK(pvalue_chisq_1df(0.0) == 1.0);
    // 0.05 critical value of chi^2_1.
    CHECK(std::abs((pvalue_chisq_1df(3.841458821)) - (0.05)) <= (1e-9));
    CHECK_THROWS_AS(pvalue_chisq_1df(-0.5), Error);
}

TEST_CASE("chi-square / normal bridge is bit exact") {
    Rng rng(2024);
    for (int i = 0; i < 5000; ++i) {
        double t = 6.0 * (rng.next_uniform() - 0.5);
        double via_chisq = pvalue_chisq_1df(t * t);
        double via_normal = pvalue_normal_two_sided(t);
        CHECK(via_chisq == via_normal);
    }
}

TEST_CASE("sampler determinism: same seed, same sequence") {
    Rng a(99), b(99);
    auto xs = sample_mixture(1000, 0.3, 2.0, Model::normal, a);
    auto ys = sample_mixture(1000, 0.3, 2.0, Model::normal, b);
    CHECK(xs == ys);
    // Distinct seeds diverge.
    Rng c(100);
    auto zs = sample_mixture(1000, 0.3, 2.0, Model::normal, c);
    CHECK(xs != zs);
}

TEST_CASE("derived seeds differ across replicate indices") {
    auto s0 = derive_seed(42, 0);
    auto s1 = derive_seed(42, 1);
    auto t0 = derive_seed(43, 0);
    CHECK(s0 != s1);
    CHECK(s0 != t0);
}

TEST_CASE("pure null sample mean near zero") {
    Rng rng(7);
    std::size_t n = 40000;
    auto xs = sample_mixture(n, 0.0, 5.0, Model::normal, rng);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("pure alternative sample mean near xi") {
    Rng rng(8);
    std::size_t n = 40000;
    auto xs = sample_mixture(n, 1.0, 2.0, Model::normal, rng);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean - 2.0) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("chi-square mixture mean matches 1 + pi xi^2") {
    Rng rng(9);
    std::size_t n = 1000000;
    auto xs = sample_mixture(n, 0.2, 2.0, Model::chisq, rng);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    CHECK(std::abs((mean) - (1.8)) <= (0.01));
}

TEST_CASE("sample_mixture input validation") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_mixture(0, 0.5, 1.0, Model::normal, rng), Error);
    CHECK_THROWS_AS(sample_mixture(10, -0.1, 1.0, Model::normal, rng), Error);
    CHECK_THROWS_AS(sample_mixture(10, 1.1, 1.0, Model::normal, rng), Error);
}
