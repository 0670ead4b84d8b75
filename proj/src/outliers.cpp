#include "qnorm/outliers.hpp"

#include <algorithm>
#include <stdexcept>

#include "qnorm/parallel.hpp"

namespace qnorm {

namespace {

void require_definite(const QuaternionAlgebra& algebra) {
    if (!algebra.is_definite())
        throw std::domain_error("Eichler condition holds: indefinite algebra has no outliers");
}

void require_in_range(u64 m) {
    if (m == 0) throw std::domain_error("not a norm: HMS positivity");
    if (m > kMaxNorm) throw std::domain_error("m exceeds the supported range (2^60)");
}

// First ramified prime at which d is a square, or 0 if d is a non-square at all of them.
u64 first_square_place(i64 d, const std::vector<u64>& primes) {
    for (u64 q : primes) {
        if (is_square_in_qp(q, d)) return q;
    }
    return 0;
}

QuadraticWitness make_quadratic(i64 b, i64 m, const QuaternionAlgebra& algebra) {
    QuadraticWitness w;
    w.b = b;
    w.discriminant = quadratic_discriminant(b, m);
    for (u64 q : algebra.finite_ramified())
        w.local_certificates.push_back(local_square_certificate(Place::finite(q), w.discriminant));
    w.local_certificates.push_back(local_square_certificate(Place::real(), w.discriminant));
    return w;
}

bool reduced_at_ramified(u64 m, const std::vector<u64>& primes) {
    for (u64 q : primes) {
        if (q <= m / q && m % (q * q) == 0) return false;
    }
    return true;
}

}  // namespace

bool verify_witness(const NormWitness& witness, const QuaternionAlgebra& algebra) {
    if (const auto* sq = std::get_if<RationalSquareWitness>(&witness.kind)) {
        return (unsigned __int128)sq->root * sq->root == witness.m;
    }
    const auto& w = std::get<QuadraticWitness>(witness.kind);
    const i64 m = i64(witness.m);
    if (w.b < 0 || quadratic_discriminant(w.b, m) != w.discriminant) return false;
    if (w.discriminant >= 0) return false;
    const auto& primes = algebra.finite_ramified();
    if (w.local_certificates.size() != primes.size() + 1) return false;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const auto& cert = w.local_certificates[i];
        if (cert.place != Place::finite(primes[i]) || cert.value != w.discriminant || cert.square) return false;
        if (is_square_in_qp(primes[i], w.discriminant)) return false;
    }
    const auto& real = w.local_certificates.back();
    return real.place.is_real() && !real.square && !is_square_in_reals(w.discriminant);
}

std::optional<NormWitness> find_witness(u64 m, const QuaternionAlgebra& algebra) {
    require_in_range(m);
    require_definite(algebra);
    if (perfect_square_root(m)) throw std::domain_error("use square shortcut: m is a perfect square");
    const u64 b_max = isqrt(4 * m);
    const auto& primes = algebra.finite_ramified();
    for (u64 b = 0; b <= b_max; ++b) {
        const i64 d = i64(b * b) - i64(4 * m);
        if (first_square_place(d, primes) == 0)
            return NormWitness{m, make_quadratic(i64(b), i64(m), algebra)};
    }
    return std::nullopt;
}

ExhaustedSearch exhaust_witness_search(u64 m, const QuaternionAlgebra& algebra) {
    require_in_range(m);
    require_definite(algebra);
    ExhaustedSearch search{m, isqrt(4 * m), {}};
    for (u64 b = 0; b <= search.b_max; ++b) {
        const i64 d = i64(b * b) - i64(4 * m);
        const u64 q = first_square_place(d, algebra.finite_ramified());
        if (q == 0) throw std::logic_error("exhaust_witness_search: m has a witness");
        search.candidates.push_back({i64(b), d, q});
    }
    return search;
}

NormDecision decide_norm(i64 m, const QuaternionAlgebra& algebra) {
    if (m <= 0) throw std::domain_error("not a norm: HMS positivity");
    const u64 um = u64(m);
    require_in_range(um);
    require_definite(algebra);
    NormDecision decision;
    decision.m = um;
    if (auto root = perfect_square_root(um)) {
        decision.is_norm = true;
        decision.witness = NormWitness{um, RationalSquareWitness{*root}};
        return decision;
    }
    decision.witness = find_witness(um, algebra);
    decision.is_norm = decision.witness.has_value();
    if (!decision.is_norm) decision.exhausted = exhaust_witness_search(um, algebra);
    return decision;
}

bool is_outlier(i64 m, const QuaternionAlgebra& algebra) {
    if (m <= 0) throw std::domain_error("not a norm: HMS positivity");
    const u64 um = u64(m);
    if (perfect_square_root(um)) {
        require_definite(algebra);
        return false;
    }
    return !find_witness(um, algebra).has_value();
}

SquareReduction reduce_by_ramified_squares(u64 m, const QuaternionAlgebra& algebra) {
    if (m == 0) throw std::domain_error("reduce_by_ramified_squares: m must be positive");
    SquareReduction r{m, {}};
    for (u64 q : algebra.finite_ramified()) {
        if (q > r.reduced / q) continue;
        const u64 q2 = q * q;
        int n = 0;
        while (r.reduced % q2 == 0) {
            r.reduced /= q2;
            ++n;
        }
        if (n) r.exponents[q] = n;
    }
    return r;
}

std::string OutlierClassification::closure_rule() const {
    std::string rule = "m0";
    for (u64 q : algebra.finite_ramified()) {
        const auto s = std::to_string(q);
        rule += " * " + s + "^(2n_" + s + ")";
    }
    return rule;
}

bool OutlierClassification::in_closure(u64 m) const {
    const auto reduced = reduce_by_ramified_squares(m, algebra).reduced;
    return std::binary_search(base_outliers.begin(), base_outliers.end(), reduced);
}

OutlierClassification enumerate_base_outliers(const QuaternionAlgebra& algebra, unsigned threads) {
    OutlierClassification result{algebra, eichler_gate(algebra.profile()), algebra.discriminant(), 0, {}, {}};
    if (result.gate.no_outliers) return result;
    result.bound = algebra.outlier_bound();
    if (result.bound > kMaxNorm) throw std::domain_error("outlier bound exceeds the supported range");
    const auto& primes = algebra.finite_ramified();
    result.base_outliers = parallel_collect(1, result.bound + 1, threads, [&](u64 lo, u64 hi) {
        std::vector<u64> found;
        for (u64 m = lo; m < hi; ++m) {
            if (reduced_at_ramified(m, primes) && is_outlier(i64(m), algebra)) found.push_back(m);
        }
        return found;
    });
    return result;
}

BandCheck verify_band(OutlierClassification& classification, u64 factor, unsigned threads) {
    if (factor < 1) throw std::domain_error("band factor must be at least 1");
    BandCheck band{classification.bound, 0, {}};
    if (classification.gate.no_outliers) {
        classification.band = band;
        return band;
    }
    const unsigned __int128 upper = (unsigned __int128)classification.bound * factor;
    if (upper > kMaxNorm) throw std::domain_error("band exceeds the supported range");
    band.upper = u64(upper);
    const auto& algebra = classification.algebra;
    const auto& primes = algebra.finite_ramified();
    band.new_outliers = parallel_collect(band.lower + 1, band.upper + 1, threads, [&](u64 lo, u64 hi) {
        std::vector<u64> found;
        for (u64 m = lo; m < hi; ++m) {
            if (reduced_at_ramified(m, primes) && is_outlier(i64(m), algebra)) found.push_back(m);
        }
        return found;
    });
    classification.band = band;
    return band;
}

NormWitness certify_not_outlier_large(u64 m, const QuaternionAlgebra& algebra) {
    require_in_range(m);
    require_definite(algebra);
    if (!reduce_by_ramified_squares(m, algebra).exponents.empty())
        throw std::domain_error("certify_not_outlier_large: m is divisible by a ramified square");
    if (m <= algebra.outlier_bound())
        throw std::domain_error("certify_not_outlier_large: m does not exceed the bound M");

    // Residues of b modulo each odd ramified prime: b = 0 when q | m (odd
    // valuation of d), otherwise +-c with (c^2 - 4m / q) = -1.
    struct Choice {
        u64 q;
        u64 c;
    };
    std::vector<Choice> choices;
    u64 odd_modulus = 1;
    bool has_two = false;
    for (u64 q : algebra.finite_ramified()) {
        if (q == 2) {
            has_two = true;
            continue;
        }
        odd_modulus *= q;
        if (m % q == 0) {
            choices.push_back({q, 0});
            continue;
        }
        const i64 four_m = i64((4 * (m % q)) % q);
        u64 c = 0;
        while (kronecker(i64(c * c % q) - four_m, i64(q)) != -1) {
            if (++c > q / 2) throw std::logic_error("no non-residue discriminant mod " + std::to_string(q));
        }
        choices.push_back({q, c});
    }
    if (choices.size() > 20) throw std::domain_error("certify_not_outlier_large: too many ramified primes");

    // Two-adic condition is a parity: odd b when m is odd (d = 5 mod 8),
    // even b when m = 2 mod 4 (v_2(d) = 3, or d/4 = 3 mod 4).
    const u64 parity = m % 2;

    u64 best = UINT64_MAX;
    const u64 combos = u64{1} << choices.size();
    std::vector<Congruence> system(choices.size());
    for (u64 signs = 0; signs < combos; ++signs) {
        for (std::size_t i = 0; i < choices.size(); ++i) {
            const auto [q, c] = choices[i];
            const bool flip = (signs >> i) & 1;
            system[i] = {i64(flip ? (q - c) % q : c), q};
        }
        u64 b = crt(system);
        if (has_two && b % 2 != parity) b += odd_modulus;
        best = std::min(best, b);
    }

    const i64 d = quadratic_discriminant(i64(best), i64(m));
    NormWitness witness{m, make_quadratic(i64(best), i64(m), algebra)};
    if (d >= 0 || !verify_witness(witness, algebra))
        throw std::logic_error("certify_not_outlier_large: constructed b = " + std::to_string(best) +
                               " is not a witness");
    return witness;
}

SupersingularReport supersingular_report(i64 m, u64 p) {
    const auto algebra = QuaternionAlgebra::a_r(p);
    SupersingularReport report;
    report.decision = decide_norm(m, algebra);
    report.m = u64(m);
    report.p = p;
    const std::string field = "the algebraic closure of GF(" + std::to_string(p) + ")";
    const std::string deg = std::to_string(m);
    if (!report.decision.is_norm) {
        report.text = "no supersingular elliptic curve over " + field + " has an endomorphism of degree " + deg;
    } else if (report.decision.witness->is_rational_square()) {
        const auto k = std::get<RationalSquareWitness>(report.decision.witness->kind).root;
        report.text = "endomorphism of degree " + deg + " exists (multiplication by " + std::to_string(k) + ")";
    } else {
        const auto& w = std::get<QuadraticWitness>(report.decision.witness->kind);
        report.text = "some supersingular elliptic curve over " + field + " has an endomorphism of degree " +
                      deg + " (minimal polynomial t^2 + " + std::to_string(w.b) + "t + " + deg + ")";
    }
    return report;
}

}  // namespace qnorm
