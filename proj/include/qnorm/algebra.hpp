#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnorm/arith.hpp"
#include "qnorm/padic.hpp"

namespace qnorm {

/// Hilbert symbol (a, b)_v in {-1, +1}; -1 iff the quaternion algebra (a, b) ramifies at v.
int hilbert_symbol(i64 a, i64 b, Place place);

/// Local degrees of a central simple algebra over Q. Only used to express
/// the degree/definiteness gate and local-degree comparisons; it does not
/// model Brauer group arithmetic.
struct CsaLocalProfile {
    int degree = 2;
    std::map<u64, int> finite_local_degrees;  // entries equal to 1 may be omitted
    int infinite_local_degree = 1;

    int local_degree(Place place) const;
    void validate() const;
};

/// A quaternion algebra over Q, identified by its ramified places.
class QuaternionAlgebra {
public:
    /// Ramification computed from Hilbert symbols at inf and every p | 2ab.
    /// Throws std::domain_error if the symbol splits everywhere.
    static QuaternionAlgebra from_symbol(i64 a, i64 b);

    /// Throws std::domain_error for non-primes, an odd number of ramified
    /// places, or an empty ramification set.
    static QuaternionAlgebra from_ramification(std::vector<u64> finite, bool infinite);

    /// The definite algebra ramified exactly at r and inf.
    static QuaternionAlgebra a_r(u64 r);

    const std::vector<u64>& finite_ramified() const noexcept { return finite_; }
    bool infinite_ramified() const noexcept { return infinite_; }
    bool is_definite() const noexcept { return infinite_; }
    const std::optional<std::pair<i64, i64>>& symbol() const noexcept { return symbol_; }
    bool ramifies_at(u64 p) const;

    /// C: product of the finite ramified primes.
    u64 discriminant() const;
    /// M = floor(C^2 / 16).
    u64 outlier_bound() const;

    CsaLocalProfile profile() const;

    /// e.g. "ram:2,17,29;inf"
    std::string canonical() const;

    // Equality ignores the construction symbol.
    friend bool operator==(const QuaternionAlgebra& x, const QuaternionAlgebra& y) {
        return x.finite_ == y.finite_ && x.infinite_ == y.infinite_;
    }

private:
    QuaternionAlgebra(std::vector<u64> finite, bool infinite,
                      std::optional<std::pair<i64, i64>> symbol);

    std::vector<u64> finite_;
    bool infinite_ = true;
    std::optional<std::pair<i64, i64>> symbol_;
};

/// Parses `p:<prime>`, `ram:<p1,...,pk>` or `sym:<a>,<b>`.
/// For `ram:` the real place is ramified iff k is odd.
/// Throws qnorm::ParseError on malformed text; domain errors pass through.
QuaternionAlgebra parse_algebra_spec(std::string_view spec);

struct GateVerdict {
    bool no_outliers = false;
    std::string reason;  // empty when outliers are possible
};

/// Outliers can only exist for definite quaternion algebras with finite ramification.
GateVerdict eichler_gate(const CsaLocalProfile& profile);

/// True iff n_v(a) divides n_v(b) at every place. Degrees must match.
bool local_divides(const CsaLocalProfile& a, const CsaLocalProfile& b);

}  // namespace qnorm
