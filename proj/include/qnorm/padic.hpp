#pragma once

#include <optional>
#include <string>

#include "qnorm/arith.hpp"

namespace qnorm {

/// A place of Q: a finite prime, or the real place (prime == 0).
struct Place {
    u64 prime = 0;

    static constexpr Place real() { return Place{0}; }
    static constexpr Place finite(u64 p) { return Place{p}; }

    constexpr bool is_real() const { return prime == 0; }
    std::string to_string() const { return is_real() ? "inf" : std::to_string(prime); }

    friend constexpr auto operator<=>(const Place&, const Place&) = default;
};

enum class SquareReason {
    square,
    odd_valuation,
    unit_non_residue,
    negative_at_real,
};

std::string to_string(SquareReason reason);

// Why a nonzero integer is or is not a square in Q_p or R.
// For odd p the unit residue is recorded mod p, for p = 2 mod 8.
struct LocalSquareCertificate {
    Place place;
    i64 value = 0;
    int valuation = 0;
    bool square = false;
    SquareReason reason = SquareReason::square;
    std::optional<i64> unit_residue;
};

/// Largest v with p^v | x. Throws std::domain_error for x == 0.
int valuation(u64 p, i64 x);

/// Square test in Q_p (p prime, caller's responsibility) or in R.
LocalSquareCertificate local_square_certificate(Place place, i64 x);

bool is_square_in_qp(u64 p, i64 x);
inline bool is_square_in_reals(i64 x) { return x > 0; }

/// t^2 + b t + m irreducible over Q_p, i.e. b^2 - 4m is not a p-adic square.
/// Throws std::domain_error("degenerate discriminant") when b^2 == 4m.
bool quadratic_irreducible_over_qp(u64 p, i64 b, i64 m);

/// t^2 + b t + m has no real root.
bool quadratic_irreducible_over_reals(i64 b, i64 m);

/// b^2 - 4m, checked against overflow.
i64 quadratic_discriminant(i64 b, i64 m);

}  // namespace qnorm
