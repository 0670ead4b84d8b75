#include "qnorm/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qnorm {

namespace {

using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 1'000'000;

u64 magnitude(i64 x) {
    return x < 0 ? u64(-(x + 1)) + 1 : u64(x);
}

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    // Fixed seeds keep factorizations reproducible.
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        for (u64 r = 1; g == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = gcd(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

// Jacobi symbol for odd n > 0 and 0 <= a < n.
int jacobi(u64 a, u64 n) {
    int result = 1;
    while (a != 0) {
        const int tz = std::countr_zero(a);
        a >>= tz;
        if ((tz & 1) && (n % 8 == 3 || n % 8 == 5)) result = -result;
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? result : 0;
}

}  // namespace

u64 mul_mod(u64 a, u64 b, u64 mod) {
    return u64(u128(a) * b % mod);
}

u64 pow_mod(u64 base, u64 exp, u64 mod) {
    u64 result = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, mod);
        base = mul_mod(base, base, mod);
        exp >>= 1;
    }
    return result;
}

u64 gcd(u64 a, u64 b) {
    return std::gcd(a, b);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : kBases) {
        if (n % p == 0) return n == p;
    }
    const int s = std::countr_zero(n - 1);
    const u64 d = (n - 1) >> s;
    for (u64 a : kBases) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 Factorization::product() const {
    u64 p = 1;
    for (const auto& [prime, exponent] : factors) {
        for (int i = 0; i < exponent; ++i) p *= prime;
    }
    return p;
}

Factorization factorize(u64 n) {
    if (n == 0) throw std::domain_error("factorize: zero has no factorization");
    Factorization result{n, {}};
    u64 rest = n;
    auto take = [&](u64 p) {
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (e) result.factors.push_back({p, e});
    };
    take(2);
    take(3);
    for (u64 p = 5; p < kTrialLimit && p * p <= rest; p += 6) {
        take(p);
        take(p + 2);
    }
    if (rest > 1) {
        std::vector<u64> big;
        factor_into(rest, big);
        std::sort(big.begin(), big.end());
        for (std::size_t i = 0; i < big.size();) {
            std::size_t j = i;
            while (j < big.size() && big[j] == big[i]) ++j;
            result.factors.push_back({big[i], int(j - i)});
            i = j;
        }
    }
    return result;
}

std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (const auto& pp : factorize(n).factors) out.push_back(pp.prime);
    return out;
}

u64 isqrt(u64 n) {
    u64 r = u64(std::sqrt(static_cast<long double>(n)));
    while (u128(r) * r > n) --r;
    while (u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::optional<u64> perfect_square_root(u64 n) {
    const u64 r = isqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0 && a < 0) result = -1;
    u64 un = magnitude(n);
    if (a % 2 == 0 && un % 2 == 0) return 0;
    const int v = std::countr_zero(un);
    un >>= v;
    if (v & 1) {
        const i64 a8 = ((a % 8) + 8) % 8;
        if (a8 == 3 || a8 == 5) result = -result;
    }
    if (un == 1) return result;
    const i64 r = i64(__int128(a) % __int128(un));
    const u64 reduced = r < 0 ? u64(r + i64(un)) : u64(r);
    return result * jacobi(reduced, un);
}

SquareClass::SquareClass(bool negative, std::vector<u64> primes)
    : negative_(negative), primes_(std::move(primes)) {
    std::sort(primes_.begin(), primes_.end());
    if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end())
        throw std::invalid_argument("SquareClass: repeated prime");
}

SquareClass SquareClass::of(i64 n) {
    if (n == 0) throw std::domain_error("zero has no square class");
    std::vector<u64> odd;
    for (const auto& [p, e] : factorize(magnitude(n)).factors) {
        if (e % 2) odd.push_back(p);
    }
    SquareClass c;
    c.negative_ = n < 0;
    c.primes_ = std::move(odd);
    return c;
}

i64 SquareClass::representative() const {
    i64 v = 1;
    for (u64 p : primes_) {
        if (__builtin_mul_overflow(v, i64(p), &v))
            throw std::overflow_error("square class representative exceeds 63 bits");
    }
    return negative_ ? -v : v;
}

std::string SquareClass::to_string() const {
    return std::to_string(representative());
}

SquareClass operator*(const SquareClass& x, const SquareClass& y) {
    std::vector<u64> primes;
    std::set_symmetric_difference(x.primes_.begin(), x.primes_.end(), y.primes_.begin(),
                                  y.primes_.end(), std::back_inserter(primes));
    SquareClass c;
    c.negative_ = x.negative_ != y.negative_;
    c.primes_ = std::move(primes);
    return c;
}

u64 crt(std::span<const Congruence> system) {
    u64 value = 0;
    u64 modulus = 1;
    for (const auto& [remainder, m] : system) {
        if (m == 0) throw std::domain_error("crt: zero modulus");
        if (gcd(modulus, m) != 1) throw std::domain_error("crt: moduli are not pairwise coprime");
        if (u128(modulus) * m > kMaxInput) throw std::domain_error("crt: modulus product exceeds 63 bits");
        const i64 rr = i64(__int128(remainder) % __int128(m));
        const u64 r = rr < 0 ? u64(rr + i64(m)) : u64(rr);
        // value + modulus * t = r (mod m); t = (r - value) * modulus^{-1} (mod m)
        const u64 mod_m = modulus % m;
        u64 inv = 0;
        if (m > 1) {
            // extended Euclid on (mod_m, m)
            __int128 old_r = mod_m, cur_r = m, old_s = 1, cur_s = 0;
            while (cur_r != 0) {
                const __int128 q = old_r / cur_r;
                std::swap(old_r, cur_r);
                cur_r -= q * old_r;
                std::swap(old_s, cur_s);
                cur_s -= q * old_s;
            }
            inv = u64(((old_s % __int128(m)) + m) % m);
        }
        const u64 diff = (r + m - value % m) % m;
        const u64 t = mul_mod(diff, inv, m);
        value = value + modulus * t;
        modulus *= m;
    }
    return value;
}

}  // namespace qnorm
