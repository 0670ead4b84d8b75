#include "qnorm/padic.hpp"

#include <stdexcept>

namespace qnorm {

namespace {

void require_prime_place(u64 p) {
    if (p < 2) throw std::domain_error("p-adic test needs a prime, got " + std::to_string(p));
}

}  // namespace

std::string to_string(SquareReason reason) {
    switch (reason) {
        case SquareReason::square: return "square";
        case SquareReason::odd_valuation: return "odd_valuation";
        case SquareReason::unit_non_residue: return "unit_non_residue";
        case SquareReason::negative_at_real: return "negative_at_real";
    }
    return "unknown";
}

int valuation(u64 p, i64 x) {
    if (x == 0) throw std::domain_error("valuation of zero is infinite");
    require_prime_place(p);
    const i64 sp = i64(p);
    int v = 0;
    while (x % sp == 0) {
        x /= sp;
        ++v;
    }
    return v;
}

LocalSquareCertificate local_square_certificate(Place place, i64 x) {
    if (x == 0) throw std::domain_error("zero has no square class");
    LocalSquareCertificate cert;
    cert.place = place;
    cert.value = x;
    if (place.is_real()) {
        cert.square = x > 0;
        cert.reason = cert.square ? SquareReason::square : SquareReason::negative_at_real;
        return cert;
    }
    const u64 p = place.prime;
    require_prime_place(p);
    const i64 sp = i64(p);
    i64 unit = x;
    while (unit % sp == 0) {
        unit /= sp;
        ++cert.valuation;
    }
    if (cert.valuation % 2) {
        cert.square = false;
        cert.reason = SquareReason::odd_valuation;
        return cert;
    }
    if (p == 2) {
        const i64 r = ((unit % 8) + 8) % 8;
        cert.unit_residue = r;
        cert.square = r == 1;
    } else {
        const i64 r = ((unit % sp) + sp) % sp;
        cert.unit_residue = r;
        cert.square = kronecker(r, sp) == 1;
    }
    cert.reason = cert.square ? SquareReason::square : SquareReason::unit_non_residue;
    return cert;
}

bool is_square_in_qp(u64 p, i64 x) {
    return local_square_certificate(Place::finite(p), x).square;
}

i64 quadratic_discriminant(i64 b, i64 m) {
    const __int128 d = __int128(b) * b - __int128(4) * m;
    if (d > INT64_MAX || d < INT64_MIN) throw std::overflow_error("discriminant exceeds 64 bits");
    return i64(d);
}

bool quadratic_irreducible_over_qp(u64 p, i64 b, i64 m) {
    const i64 d = quadratic_discriminant(b, m);
    if (d == 0) throw std::domain_error("degenerate discriminant");
    return !is_square_in_qp(p, d);
}

bool quadratic_irreducible_over_reals(i64 b, i64 m) {
    return quadratic_discriminant(b, m) < 0;
}

}  // namespace qnorm
