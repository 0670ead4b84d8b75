#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qnorm/algebra.hpp"
#include "qnorm/padic.hpp"

// Deciding which positive integers are reduced norms of integral elements of
// a definite quaternion algebra over Q.
//
// A non-square m > 0 is the reduced norm of an integer iff some monic
// t^2 + b t + m with 0 <= b <= floor(2 sqrt m) has negative discriminant and
// stays irreducible over Q_q for every finite ramified q. Its root field then
// splits the algebra and embeds in it. Perfect squares are norms of rational
// integers.

namespace qnorm {

/// Largest m accepted by the decision procedures (keeps b^2 - 4m in 64 bits).
inline constexpr u64 kMaxNorm = u64{1} << 60;

struct RationalSquareWitness {
    u64 root = 0;
};

struct QuadraticWitness {
    i64 b = 0;
    i64 discriminant = 0;
    // One per finite ramified prime, then the real place.
    std::vector<LocalSquareCertificate> local_certificates;
};

struct NormWitness {
    u64 m = 0;
    std::variant<RationalSquareWitness, QuadraticWitness> kind;

    bool is_rational_square() const { return std::holds_alternative<RationalSquareWitness>(kind); }
};

/// Re-checks a witness from scratch against the algebra.
bool verify_witness(const NormWitness& witness, const QuaternionAlgebra& algebra);

// Failed candidate of an exhausted search: d is a square at `square_at`.
struct FailedCandidate {
    i64 b = 0;
    i64 discriminant = 0;
    u64 square_at = 0;
};

struct ExhaustedSearch {
    u64 m = 0;
    u64 b_max = 0;
    std::vector<FailedCandidate> candidates;
};

struct NormDecision {
    u64 m = 0;
    bool is_norm = false;
    std::optional<NormWitness> witness;       // set iff is_norm
    std::optional<ExhaustedSearch> exhausted; // set iff !is_norm

    bool outlier() const { return !is_norm; }
};

/// Smallest b in [0, floor(2 sqrt m)] giving a witness, if any.
/// Throws std::domain_error for perfect squares or indefinite algebras.
std::optional<NormWitness> find_witness(u64 m, const QuaternionAlgebra& algebra);

/// Every b fails; lists the place where each discriminant is a square.
ExhaustedSearch exhaust_witness_search(u64 m, const QuaternionAlgebra& algebra);

/// Throws std::domain_error("not a norm: HMS positivity") for m <= 0.
NormDecision decide_norm(i64 m, const QuaternionAlgebra& algebra);

inline bool is_norm_of_integer(i64 m, const QuaternionAlgebra& algebra) {
    return decide_norm(m, algebra).is_norm;
}

bool is_outlier(i64 m, const QuaternionAlgebra& algebra);

struct SquareReduction {
    u64 reduced = 0;
    std::map<u64, int> exponents;  // q -> n_q with m = reduced * prod q^(2 n_q)
};

/// Strips squares of ramified primes until every v_q(reduced) <= 1.
SquareReduction reduce_by_ramified_squares(u64 m, const QuaternionAlgebra& algebra);

struct BandCheck {
    u64 lower = 0;  // exclusive
    u64 upper = 0;  // inclusive
    std::vector<u64> new_outliers;
};

struct OutlierClassification {
    QuaternionAlgebra algebra;
    GateVerdict gate;
    u64 discriminant = 0;  // C
    u64 bound = 0;         // M
    std::vector<u64> base_outliers;
    std::optional<BandCheck> band;

    /// "m0 * 2^(2 n_2) * 17^(2 n_17) * ..." over the ramified primes.
    std::string closure_rule() const;
    /// Membership in { m0 * prod q^(2 n_q) : m0 in base }.
    bool in_closure(u64 m) const;
};

/// Scans [1, M] for outliers with v_q(m) <= 1 for all ramified q.
OutlierClassification enumerate_base_outliers(const QuaternionAlgebra& algebra, unsigned threads = 1);

/// Brute-force scan of reduced m in (M, factor * M]; records the result in `classification.band`.
BandCheck verify_band(OutlierClassification& classification, u64 factor, unsigned threads = 1);

/// Builds a witness by Chinese remaindering per-prime residues.
/// Requires v_q(m) <= 1 for all ramified q and m > M; throws std::domain_error otherwise.
NormWitness certify_not_outlier_large(u64 m, const QuaternionAlgebra& algebra);

struct SupersingularReport {
    u64 m = 0;
    u64 p = 0;
    NormDecision decision;
    std::string text;

    bool endomorphism_exists() const { return decision.is_norm; }
};

/// Outlier verdict for A_p phrased as endomorphism degrees of supersingular curves.
SupersingularReport supersingular_report(i64 m, u64 p);

}  // namespace qnorm
