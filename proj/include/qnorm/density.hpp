#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnorm/arith.hpp"

// Dirichlet densities of sets of primes r defined by boolean combinations of
// quadratic-character conditions (d / r) = +-1.
//
// Distinct nontrivial square classes give distinct quadratic characters, so
// for a GF(2)-independent family of classes every sign pattern occurs with
// density 2^-rank. The density of an expression is therefore the fraction of
// sign assignments to a basis of the span of its classes that satisfy it.

namespace qnorm {

/// Boolean expression over atoms "kronecker(d, r) = target". An outlier(m)
/// atom is stored as the conjunction of its discriminant conditions.
class ConditionExpr {
public:
    enum class Kind { constant, sym, conjunction, disjunction, negation };

    static ConditionExpr constant(bool value);
    /// Throws std::domain_error for d == 0 or a target other than +-1.
    static ConditionExpr sym(i64 d, int target = 1);
    static ConditionExpr sym(SquareClass cls, int target = 1);
    /// m is an outlier for A_r. Throws std::domain_error for perfect squares.
    static ConditionExpr outlier(u64 m);

    Kind kind() const noexcept { return kind_; }
    bool constant_value() const noexcept { return value_; }
    const SquareClass& square_class() const noexcept { return class_; }
    int target() const noexcept { return target_; }
    const std::vector<ConditionExpr>& children() const noexcept { return children_; }
    /// Set when this node is the expansion of outlier(m).
    std::optional<u64> outlier_of() const noexcept { return outlier_of_; }

    /// Distinct square classes of all atoms, in first-occurrence order.
    std::vector<SquareClass> square_classes() const;

    /// Evaluates with atom values supplied by `character(cls)` in {-1, +1}.
    template <typename Character>
    bool evaluate(Character&& character) const;

    std::string to_string() const;

    friend ConditionExpr operator&(ConditionExpr x, ConditionExpr y);
    friend ConditionExpr operator|(ConditionExpr x, ConditionExpr y);
    friend ConditionExpr operator!(ConditionExpr x);

private:
    Kind kind_ = Kind::constant;
    bool value_ = true;
    SquareClass class_;
    int target_ = 1;
    std::vector<ConditionExpr> children_;
    std::optional<u64> outlier_of_;
};

template <typename Character>
bool ConditionExpr::evaluate(Character&& character) const {
    switch (kind_) {
        case Kind::constant: return value_;
        case Kind::sym: return character(class_) == target_;
        case Kind::conjunction:
            for (const auto& c : children_) {
                if (!c.evaluate(character)) return false;
            }
            return true;
        case Kind::disjunction:
            for (const auto& c : children_) {
                if (c.evaluate(character)) return true;
            }
            return false;
        case Kind::negation: return !children_.front().evaluate(character);
    }
    return false;
}

/// Squarefree kernels of b^2 - 4m for 0 <= b <= floor(2 sqrt m), deduplicated
/// in first-occurrence order. Throws std::domain_error for perfect squares.
std::vector<SquareClass> discriminant_classes(u64 m);

ConditionExpr outlier_condition(u64 m);

/// Grammar:
///   expr := term ('|' term)*
///   term := unary ('&' unary)*
///   unary := '!' unary | '(' expr ')' | atom
///   atom := 'sym(' int ')=' ('1' | '-1') | 'outlier(' int ')' | 'true' | 'false'
/// Throws qnorm::ParseError with the offending position.
ConditionExpr parse_condition(std::string_view text);

struct Rational {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    static Rational reduced(std::uint64_t num, std::uint64_t den);
    double value() const { return double(numerator) / double(denominator); }
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

inline constexpr int kMaxDensityRank = 24;

struct DensityResult {
    std::uint64_t satisfying_count = 0;
    int rank = 0;
    std::vector<SquareClass> basis;

    Rational density() const { return Rational::reduced(satisfying_count, std::uint64_t{1} << rank); }
};

/// GF(2) rank of the span of the given classes inside Q*/(Q*)^2.
int square_class_rank(const std::vector<SquareClass>& classes);

/// Exact density. Throws std::domain_error when the rank exceeds kMaxDensityRank.
DensityResult exact_density(const ConditionExpr& expr);

inline DensityResult density_for_outlier(u64 m) { return exact_density(outlier_condition(m)); }

/// Truth value at an odd prime r dividing no atom class; atoms use kronecker(d, r).
bool evaluate_at_prime(const ConditionExpr& expr, u64 r);

/// Odd primes dividing some atom's class representative; these are skipped by scans.
std::vector<u64> atom_primes(const ConditionExpr& expr);

struct EmpiricalDensity {
    u64 prime_bound = 0;
    u64 satisfying = 0;
    u64 sample_size = 0;
    std::vector<u64> excluded_primes;

    Rational fraction() const { return Rational::reduced(satisfying, sample_size == 0 ? 1 : sample_size); }
};

/// Frequency over odd primes r <= prime_bound not dividing any atom class.
/// Throws std::domain_error for prime_bound < 100.
EmpiricalDensity empirical_density(const ConditionExpr& expr, u64 prime_bound, unsigned threads = 1);

/// Sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 bound);

}  // namespace qnorm
