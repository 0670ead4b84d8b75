#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Exact integer arithmetic on inputs below 2^63.

namespace qnorm {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline constexpr u64 kMaxInput = (u64{1} << 63) - 1;

u64 mul_mod(u64 a, u64 b, u64 mod);
u64 pow_mod(u64 base, u64 exp, u64 mod);
u64 gcd(u64 a, u64 b);

/// Deterministic Miller-Rabin; exact for every n < 2^64.
bool is_prime(u64 n);

struct PrimePower {
    u64 prime;
    int exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors;  // primes strictly increasing

    u64 product() const;
};

/// Trial division below 10^6, then Brent's variant of Pollard rho.
Factorization factorize(u64 n);

/// Distinct prime divisors of n, increasing.
std::vector<u64> prime_divisors(u64 n);

u64 isqrt(u64 n);

/// k with k*k == n, if n is a perfect square.
std::optional<u64> perfect_square_root(u64 n);

/// Kronecker symbol (a/n). Reduces to the Legendre symbol for odd prime n.
int kronecker(i64 a, i64 n);

/// Element of Q*/(Q*)^2, stored as a sign and its squarefree support.
class SquareClass {
public:
    SquareClass() = default;
    SquareClass(bool negative, std::vector<u64> primes);

    /// Square class of a nonzero integer; throws std::domain_error for 0.
    static SquareClass of(i64 n);

    bool negative() const noexcept { return negative_; }
    const std::vector<u64>& primes() const noexcept { return primes_; }
    bool is_trivial() const noexcept { return !negative_ && primes_.empty(); }

    /// The squarefree integer (-1)^negative * prod(primes).
    i64 representative() const;
    std::string to_string() const;

    friend SquareClass operator*(const SquareClass& x, const SquareClass& y);
    friend auto operator<=>(const SquareClass&, const SquareClass&) = default;
    friend bool operator==(const SquareClass&, const SquareClass&) = default;

private:
    bool negative_ = false;
    std::vector<u64> primes_;
};

inline SquareClass squarefree_kernel(i64 n) { return SquareClass::of(n); }

struct Congruence {
    i64 remainder;
    u64 modulus;
};

/// Unique x in [0, prod moduli) with x = remainder_i mod modulus_i.
/// Throws std::domain_error on non-coprime moduli or a product >= 2^63.
u64 crt(std::span<const Congruence> system);

}  // namespace qnorm
