#include "qnorm/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>

#include "qnorm/error.hpp"

namespace qnorm {

namespace {

struct SplitByPrime {
    int valuation = 0;
    i64 unit = 0;
};

SplitByPrime split(i64 x, u64 p) {
    SplitByPrime s{0, x};
    while (s.unit % i64(p) == 0) {
        s.unit /= i64(p);
        ++s.valuation;
    }
    return s;
}

int hilbert_at_two(i64 a, i64 b) {
    const auto [alpha, u] = split(a, 2);
    const auto [beta, v] = split(b, 2);
    auto mod8 = [](i64 x) { return ((x % 8) + 8) % 8; };
    const i64 u8 = mod8(u), v8 = mod8(v);
    const int eps_u = ((u8 - 1) / 2) & 1;
    const int eps_v = ((v8 - 1) / 2) & 1;
    const int omega_u = ((u8 * u8 - 1) / 8) & 1;
    const int omega_v = ((v8 * v8 - 1) / 8) & 1;
    const int exponent = eps_u * eps_v + alpha * omega_v + beta * omega_u;
    return exponent % 2 ? -1 : 1;
}

int hilbert_at_odd(i64 a, i64 b, u64 p) {
    const auto [alpha, u] = split(a, p);
    const auto [beta, v] = split(b, p);
    int result = 1;
    if ((alpha * beta) % 2 && (p % 4 == 3)) result = -result;
    if (beta % 2) result *= kronecker(u, i64(p));
    if (alpha % 2) result *= kronecker(v, i64(p));
    return result;
}

u64 magnitude(i64 x) {
    return x < 0 ? u64(-(x + 1)) + 1 : u64(x);
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t offset, std::string_view spec) {
    Int value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw ParseError("algebra spec '" + std::string(spec) + "': expected an integer", offset);
    return value;
}

}  // namespace

int hilbert_symbol(i64 a, i64 b, Place place) {
    if (a == 0 || b == 0) throw std::domain_error("hilbert symbol of zero");
    if (place.is_real()) return (a < 0 && b < 0) ? -1 : 1;
    if (place.prime == 2) return hilbert_at_two(a, b);
    return hilbert_at_odd(a, b, place.prime);
}

int CsaLocalProfile::local_degree(Place place) const {
    if (place.is_real()) return infinite_local_degree;
    auto it = finite_local_degrees.find(place.prime);
    return it == finite_local_degrees.end() ? 1 : it->second;
}

void CsaLocalProfile::validate() const {
    if (degree < 1) throw std::invalid_argument("csa profile: degree must be positive");
    if (infinite_local_degree != 1 && infinite_local_degree != 2)
        throw std::invalid_argument("csa profile: real local degree must be 1 or 2");
    if (degree % infinite_local_degree)
        throw std::invalid_argument("csa profile: real local degree must divide the degree");
    for (const auto& [p, nv] : finite_local_degrees) {
        if (!is_prime(p)) throw std::invalid_argument("csa profile: " + std::to_string(p) + " is not prime");
        if (nv < 1 || degree % nv)
            throw std::invalid_argument("csa profile: local degree at " + std::to_string(p) +
                                        " must divide the degree");
    }
}

QuaternionAlgebra::QuaternionAlgebra(std::vector<u64> finite, bool infinite,
                                     std::optional<std::pair<i64, i64>> symbol)
    : finite_(std::move(finite)), infinite_(infinite), symbol_(symbol) {}

QuaternionAlgebra QuaternionAlgebra::from_symbol(i64 a, i64 b) {
    if (a == 0 || b == 0) throw std::domain_error("quaternion symbol entries must be nonzero");
    std::set<u64> places{2};
    for (u64 p : prime_divisors(magnitude(a))) places.insert(p);
    for (u64 p : prime_divisors(magnitude(b))) places.insert(p);
    std::vector<u64> finite;
    for (u64 p : places) {
        if (hilbert_symbol(a, b, Place::finite(p)) == -1) finite.push_back(p);
    }
    const bool infinite = hilbert_symbol(a, b, Place::real()) == -1;
    if (finite.empty() && !infinite)
        throw std::domain_error("matrix algebra: no division algebra");
    if ((finite.size() + (infinite ? 1 : 0)) % 2)
        throw std::logic_error("hilbert symbols violate the product formula");
    return QuaternionAlgebra(std::move(finite), infinite, std::make_pair(a, b));
}

QuaternionAlgebra QuaternionAlgebra::from_ramification(std::vector<u64> finite, bool infinite) {
    std::sort(finite.begin(), finite.end());
    if (std::adjacent_find(finite.begin(), finite.end()) != finite.end())
        throw std::domain_error("ramified primes must be distinct");
    for (u64 p : finite) {
        if (!is_prime(p)) throw std::domain_error(std::to_string(p) + " is not prime");
    }
    if (finite.empty() && !infinite) throw std::domain_error("matrix algebra: no division algebra");
    if ((finite.size() + (infinite ? 1 : 0)) % 2)
        throw std::domain_error("no such algebra over Q: odd number of ramified places");
    return QuaternionAlgebra(std::move(finite), infinite, std::nullopt);
}

QuaternionAlgebra QuaternionAlgebra::a_r(u64 r) {
    if (!is_prime(r)) throw std::domain_error(std::to_string(r) + " is not prime");
    return QuaternionAlgebra({r}, true, std::nullopt);
}

bool QuaternionAlgebra::ramifies_at(u64 p) const {
    return std::binary_search(finite_.begin(), finite_.end(), p);
}

u64 QuaternionAlgebra::discriminant() const {
    u64 c = 1;
    for (u64 p : finite_) {
        if (__builtin_mul_overflow(c, p, &c) || c > kMaxInput)
            throw std::overflow_error("ramified prime product exceeds 63 bits");
    }
    return c;
}

u64 QuaternionAlgebra::outlier_bound() const {
    const unsigned __int128 c = discriminant();
    const unsigned __int128 m = c * c / 16;
    if (m > kMaxInput) throw std::overflow_error("outlier bound exceeds 63 bits");
    return u64(m);
}

CsaLocalProfile QuaternionAlgebra::profile() const {
    CsaLocalProfile profile;
    profile.degree = 2;
    profile.infinite_local_degree = infinite_ ? 2 : 1;
    for (u64 p : finite_) profile.finite_local_degrees[p] = 2;
    return profile;
}

std::string QuaternionAlgebra::canonical() const {
    std::string s = "ram:";
    for (std::size_t i = 0; i < finite_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(finite_[i]);
    }
    if (infinite_) s += finite_.empty() ? "inf" : ";inf";
    return s;
}

QuaternionAlgebra parse_algebra_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("algebra spec '" + std::string(spec) + "': expected p:, ram: or sym:", 0);
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view body = spec.substr(colon + 1);
    const std::size_t base = colon + 1;

    std::vector<std::pair<std::string_view, std::size_t>> items;
    std::size_t start = 0;
    while (true) {
        const auto comma = body.find(',', start);
        const auto end = comma == std::string_view::npos ? body.size() : comma;
        items.emplace_back(body.substr(start, end - start), base + start);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    if (kind == "p") {
        if (items.size() != 1) throw ParseError("algebra spec p: takes one prime", base);
        return QuaternionAlgebra::a_r(parse_int<u64>(items[0].first, items[0].second, spec));
    }
    if (kind == "ram") {
        std::vector<u64> primes;
        for (const auto& [text, offset] : items) primes.push_back(parse_int<u64>(text, offset, spec));
        const bool infinite = primes.size() % 2 == 1;
        return QuaternionAlgebra::from_ramification(std::move(primes), infinite);
    }
    if (kind == "sym") {
        if (items.size() != 2) throw ParseError("algebra spec sym: takes two integers a,b", base);
        const i64 a = parse_int<i64>(items[0].first, items[0].second, spec);
        const i64 b = parse_int<i64>(items[1].first, items[1].second, spec);
        return QuaternionAlgebra::from_symbol(a, b);
    }
    throw ParseError("algebra spec '" + std::string(spec) + "': unknown kind '" + std::string(kind) + "'", 0);
}

GateVerdict eichler_gate(const CsaLocalProfile& profile) {
    profile.validate();
    if (profile.degree > 2) return {true, "degree > 2"};
    if (profile.degree == 1) return {true, "degree 1"};
    if (profile.degree == 2) {
        std::size_t ramified = profile.infinite_local_degree == 2 ? 1 : 0;
        for (const auto& [p, nv] : profile.finite_local_degrees) {
            if (nv > 1) ++ramified;
        }
        if (ramified % 2) throw std::domain_error("no such algebra over Q: odd number of ramified places");
    }
    if (profile.infinite_local_degree == 1) return {true, "indefinite"};
    const bool finite = std::any_of(profile.finite_local_degrees.begin(), profile.finite_local_degrees.end(),
                                    [](const auto& kv) { return kv.second > 1; });
    if (!finite) return {true, "no finite ramification"};
    return {false, ""};
}

bool local_divides(const CsaLocalProfile& a, const CsaLocalProfile& b) {
    if (a.degree != b.degree) throw std::domain_error("local_divides: degrees differ");
    if (b.infinite_local_degree % a.infinite_local_degree) return false;
    for (const auto& [p, nv] : a.finite_local_degrees) {
        if (b.local_degree(Place::finite(p)) % nv) return false;
    }
    return true;
}

}  // namespace qnorm
