#include <doctest.h>

#include <cmath>
#include <set>

#include "ecggen/rng.hpp"

using namespace ecggen;

TEST_CASE("same seed gives the same stream") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("derive_seed separates streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 50; ++r)
        for (std::uint64_t s = 0; s < 8; ++s) seen.insert(derive_seed(99, r, s));
    CHECK(seen.size() == 400);
}

TEST_CASE("next_double stays in [0, 1)") {
    Rng rng(7);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_double();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("next_int covers the inclusive range uniformly") {
    Rng rng(11);
    int counts[6] = {0};
    for (int i = 0; i < 60000; ++i) ++counts[rng.next_int(0, 5)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
    CHECK_THROWS(rng.next_int(3, 2));
}

TEST_CASE("next_normal has unit variance") {
    Rng rng(5);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.next_normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("next_poisson matches its mean and variance") {
    Rng rng(17);
    for (double lambda : {0.5, 5.0, 120.0}) {
        const int n = 50000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.next_poisson(lambda));
            sum += k;
            sq += k * k;
        }
        const double mean = sum / n;
        const double var = sq / n - mean * mean;
        CHECK(std::abs(mean - lambda) < 4.0 * std::sqrt(lambda / n) + 0.01);
        CHECK(std::abs(var - lambda) / lambda < 0.1);
    }
    CHECK(Rng(1).next_poisson(0.0) == 0);
    CHECK_THROWS(Rng(1).next_poisson(-1.0));
}
