#include <doctest.h>

#include <array>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qnorm/arith.hpp"

using namespace qnorm;

TEST_CASE("is_prime agrees with trial division below 5000") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK(is_prime(67));
    CHECK(is_prime(113));
    for (u64 n = 0; n < 5000; ++n) CHECK(is_prime(n) == oracle::is_prime(n));
}

TEST_CASE("is_prime on large primes and strong pseudoprimes") {
    CHECK_FALSE(is_prime(kMaxInput));  // 7^2 * 73 * 127 * 337 * 92737 * 649657
    CHECK(is_prime(2305843009213693951ULL));       // 2^61 - 1
    CHECK_FALSE(is_prime(3215031751ULL));          // spsp(2, 3, 5, 7)
    CHECK_FALSE(is_prime(3825123056546413051ULL)); // spsp to bases 2..23
    CHECK(is_prime(18446744073709551557ULL));      // largest prime below 2^64
    CHECK_FALSE(is_prime(1000000007ULL * 998244353ULL));
}

TEST_CASE("factorize examples") {
    CHECK(factorize(12).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
    CHECK(factorize(1).factors.empty());
    CHECK(factorize(986).factors == std::vector<PrimePower>{{2, 1}, {17, 1}, {29, 1}});
    CHECK(factorize(kMaxInput).factors ==
          std::vector<PrimePower>{{7, 2}, {73, 1}, {127, 1}, {337, 1}, {92737, 1}, {649657, 1}});
    const u64 semiprime = 1000000007ULL * 998244353ULL;
    CHECK(factorize(semiprime).factors ==
          std::vector<PrimePower>{{998244353ULL, 1}, {1000000007ULL, 1}});
    CHECK_THROWS_AS(factorize(0), std::domain_error);
    CHECK(prime_divisors(3 * 67 * 67) == std::vector<u64>{3, 67});
}

TEST_CASE("isqrt and perfect_square_root") {
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(24) == 4);
    CHECK(isqrt(4489) == 67);
    CHECK(isqrt(kMaxInput) == 3037000499ULL);
    CHECK(perfect_square_root(9) == 3u);
    CHECK_FALSE(perfect_square_root(10).has_value());
    CHECK(perfect_square_root(0) == 0u);
}

TEST_CASE("square classes") {
    CHECK(SquareClass::of(-8) == SquareClass(true, {2}));
    CHECK(SquareClass::of(-4) == SquareClass(true, {}));
    CHECK(SquareClass::of(18) == SquareClass(false, {2}));
    CHECK(SquareClass::of(1).is_trivial());
    CHECK(SquareClass::of(-2 * 3 * 5 * 23).representative() == -690);
    CHECK(SquareClass::of(-6) * SquareClass::of(-2) == SquareClass::of(3));
    CHECK_THROWS_WITH_AS(SquareClass::of(0), "zero has no square class", std::domain_error);
}

TEST_CASE("kronecker examples") {
    CHECK(kronecker(-1, 13) == 1);
    CHECK(kronecker(5, 1) == 1);
    CHECK(kronecker(-7, 1) == 1);
    CHECK(kronecker(-7, 113) == oracle::legendre(-7, 113));
    CHECK(kronecker(-7, 113) == 1);
    CHECK(kronecker(2, 8) == 0);
    CHECK(kronecker(5, 2) == -1);   // 5 = 5 mod 8
    CHECK(kronecker(7, 2) == 1);    // 7 = 7 mod 8
    CHECK(kronecker(3, -1) == 1);
    CHECK(kronecker(-3, -1) == -1);
}

TEST_CASE("crt examples") {
    const std::array<Congruence, 2> a{{{1, 2}, {2, 3}}};
    CHECK(crt(a) == 5);
    const std::array<Congruence, 1> b{{{0, 5}}};
    CHECK(crt(b) == 0);
    const std::array<Congruence, 2> c{{{3, 7}, {4, 11}}};
    CHECK(crt(c) == oracle::crt_scan({{3, 7}, {4, 11}}));
    CHECK(crt(c) == 59);
    const std::array<Congruence, 2> negative{{{-1, 7}, {-2, 11}}};
    CHECK(crt(negative) == oracle::crt_scan({{-1, 7}, {-2, 11}}));
    const std::array<Congruence, 2> bad{{{1, 4}, {1, 6}}};
    CHECK_THROWS_AS(crt(bad), std::domain_error);
}

TEST_CASE("property: factorization reconstructs n with prime factors") {
    std::mt19937_64 gen(1);
    std::uniform_int_distribution<u64> small(1, 1'000'000);
    std::uniform_int_distribution<u64> large(1, kMaxInput);
    for (int i = 0; i < 400; ++i) {
        const u64 n = i % 2 ? small(gen) : large(gen);
        const Factorization f = factorize(n);
        CHECK(f.product() == n);
        for (std::size_t j = 0; j < f.factors.size(); ++j) {
            CHECK(is_prime(f.factors[j].prime));
            CHECK(f.factors[j].exponent >= 1);
            if (j > 0) CHECK(f.factors[j - 1].prime < f.factors[j].prime);
        }
    }
}

TEST_CASE("property: kronecker is multiplicative in the top argument") {
    std::mt19937_64 gen(2);
    std::uniform_int_distribution<i64> arg(-100000, 100000);
    std::uniform_int_distribution<i64> odd(0, 5000);
    for (int i = 0; i < 2000; ++i) {
        const i64 a = arg(gen), b = arg(gen), n = 2 * odd(gen) + 1;
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
    }
}

TEST_CASE("property: kronecker matches residue enumeration for odd primes up to 200") {
    for (u64 p = 3; p <= 200; p += 2) {
        if (!oracle::is_prime(p)) continue;
        for (i64 a = -200; a <= 200; ++a) {
            if (a % i64(p) == 0) continue;
            CHECK(kronecker(a, i64(p)) == oracle::legendre(a, p));
        }
    }
}

TEST_CASE("property: squarefree kernel ignores square factors") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<i64> arg(-1000000, 1000000);
    std::uniform_int_distribution<i64> root(1, 3000);
    for (int i = 0; i < 2000; ++i) {
        i64 n = arg(gen);
        if (n == 0) n = 1;
        const i64 k = root(gen);
        CHECK(squarefree_kernel(n * k * k) == squarefree_kernel(n));
    }
}

TEST_CASE("property: isqrt brackets n") {
    std::mt19937_64 gen(4);
    std::uniform_int_distribution<u64> arg(0, kMaxInput);
    for (int i = 0; i < 5000; ++i) {
        const u64 n = i < 1000 ? u64(i) : arg(gen);
        const unsigned __int128 r = isqrt(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }
}
