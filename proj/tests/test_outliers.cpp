#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qnorm/outliers.hpp"

using namespace qnorm;

namespace {

const QuaternionAlgebra& algebra_b() {
    static const QuaternionAlgebra b = QuaternionAlgebra::from_symbol(-58, -17);
    return b;
}

// Base outliers of the algebra ramified at {2, 17, 29, inf}, from the
// brute-force oracle (oracle::is_outlier over [1, M] with v_q(m) <= 1).
const std::vector<u64> kBaseOutliersB = {
    2,     6,     22,    34,    51,    87,    119,   145,   170,   174,   187,   203,
    238,   255,   290,   406,   638,   667,   731,   783,   1071,  1247,  1479,  1653,
    1938,  2006,  2146,  2407,  2610,  3654,  3910,  5423,  5626,  9367,  13311, 17255,
    21199, 29087, 33031, 36975, 40919, 44863, 48807, 52751, 56695, 60639};

}  // namespace

TEST_CASE("find_witness examples") {
    const auto a67 = QuaternionAlgebra::a_r(67);
    CHECK_FALSE(find_witness(3, a67).has_value());

    const auto w = find_witness(201, a67);
    REQUIRE(w.has_value());
    const auto& q = std::get<QuadraticWitness>(w->kind);
    CHECK(q.b == 0);
    CHECK(q.discriminant == -804);
    REQUIRE(q.local_certificates.size() == 2);
    CHECK(q.local_certificates[0].reason == SquareReason::odd_valuation);
    CHECK(q.local_certificates[1].place.is_real());
    CHECK(verify_witness(*w, a67));

    CHECK_THROWS_WITH_AS(find_witness(9, a67), doctest::Contains("use square shortcut"), std::domain_error);
    CHECK_THROWS_AS(find_witness(5, QuaternionAlgebra::from_ramification({2, 3}, false)), std::domain_error);
}

TEST_CASE("ten is a norm of an integer of B") {
    // d = 100 - 140 = -40: odd 2-adic valuation, -40 = 11 mod 17 and
    // -40 = 18 mod 29 are non-residues.
    const auto w = find_witness(10, algebra_b());
    REQUIRE(w.has_value());
    const auto& q = std::get<QuadraticWitness>(w->kind);
    CHECK(q.b == 0);
    CHECK(q.discriminant == -40);
    CHECK(oracle::legendre(-40, 17) == -1);
    CHECK(oracle::legendre(-40, 29) == -1);
    CHECK_FALSE(oracle::square_in_qp(2, -40));
    CHECK_FALSE(is_outlier(10, algebra_b()));
}

TEST_CASE("two is an outlier of B with an exhausted search") {
    const auto d = decide_norm(2, algebra_b());
    CHECK(d.outlier());
    REQUIRE(d.exhausted.has_value());
    CHECK(d.exhausted->b_max == 2);
    REQUIRE(d.exhausted->candidates.size() == 3);
    for (const auto& c : d.exhausted->candidates) CHECK(oracle::square_in_qp(c.square_at, c.discriminant));
}

TEST_CASE("decide_norm examples") {
    const auto a67 = QuaternionAlgebra::a_r(67);
    CHECK(is_norm_of_integer(12, a67));
    const auto nine = decide_norm(9, algebra_b());
    CHECK(nine.is_norm);
    REQUIRE(nine.witness.has_value());
    CHECK(nine.witness->is_rational_square());
    CHECK(std::get<RationalSquareWitness>(nine.witness->kind).root == 3);
    CHECK_FALSE(is_norm_of_integer(2, QuaternionAlgebra::a_r(113)));
    CHECK_THROWS_WITH_AS(decide_norm(0, a67), "not a norm: HMS positivity", std::domain_error);
    CHECK_THROWS_AS(decide_norm(-5, a67), std::domain_error);
}

TEST_CASE("is_outlier examples") {
    const auto a67 = QuaternionAlgebra::a_r(67);
    CHECK(is_outlier(3, a67));
    CHECK(is_outlier(3 * 67 * 67, a67));
    CHECK_FALSE(is_outlier(3 * 67, a67));
    CHECK_FALSE(is_outlier(12, a67));
}

TEST_CASE("reduce_by_ramified_squares examples") {
    const auto a67 = QuaternionAlgebra::a_r(67);
    const auto r = reduce_by_ramified_squares(u64(3) * 67 * 67 * 67 * 67, a67);
    CHECK(r.reduced == 3);
    CHECK(r.exponents == std::map<u64, int>{{67, 2}});
    const auto forty = reduce_by_ramified_squares(40, algebra_b());
    CHECK(forty.reduced == 10);
    CHECK(forty.exponents == std::map<u64, int>{{2, 1}});
    const auto twelve = reduce_by_ramified_squares(12, a67);
    CHECK(twelve.reduced == 12);
    CHECK(twelve.exponents.empty());
}

TEST_CASE("enumerate_base_outliers") {
    const auto a67 = enumerate_base_outliers(QuaternionAlgebra::a_r(67));
    CHECK(a67.base_outliers == std::vector<u64>{3});
    CHECK(a67.bound == 280);
    CHECK(a67.in_closure(3 * 67 * 67));
    CHECK_FALSE(a67.in_closure(12));
    CHECK(a67.closure_rule() == "m0 * 67^(2n_67)");

    const auto a2 = enumerate_base_outliers(QuaternionAlgebra::a_r(2));
    CHECK(a2.base_outliers.empty());
    CHECK(a2.bound == 0);
    for (u64 m = 1; m <= 100; ++m) CHECK_FALSE(oracle::is_outlier(m, {2}));

    const auto b = enumerate_base_outliers(algebra_b(), 2);
    CHECK(b.bound == 60762);
    CHECK(b.base_outliers == kBaseOutliersB);
    CHECK(b.in_closure(2 * 4));
    CHECK(b.in_closure(2 * 17 * 17));
    CHECK_FALSE(b.in_closure(10));

    const auto indefinite = enumerate_base_outliers(QuaternionAlgebra::from_ramification({2, 3}, false));
    CHECK(indefinite.gate.no_outliers);
    CHECK(indefinite.gate.reason == "indefinite");
    CHECK(indefinite.base_outliers.empty());
}

TEST_CASE("base outliers of B agree with the oracle below 3000") {
    std::vector<u64> expected;
    for (u64 m = 1; m <= 3000; ++m) {
        if (m % 4 == 0 || m % (17 * 17) == 0 || m % (29 * 29) == 0) continue;
        if (oracle::is_outlier(m, {2, 17, 29})) expected.push_back(m);
    }
    std::vector<u64> prefix;
    for (u64 m : kBaseOutliersB) {
        if (m <= 3000) prefix.push_back(m);
    }
    CHECK(expected == prefix);
}

TEST_CASE("verify_band finds no reduced outliers above M") {
    for (u64 r : {11, 23, 67}) {
        auto c = enumerate_base_outliers(QuaternionAlgebra::a_r(r));
        const BandCheck band = verify_band(c, 4, 2);
        CHECK(band.lower == c.bound);
        CHECK(band.upper == 4 * c.bound);
        CHECK(band.new_outliers.empty());
        CHECK(c.band.has_value());
    }
}

TEST_CASE("certify_not_outlier_large") {
    const auto a67 = QuaternionAlgebra::a_r(67);
    const NormWitness w = certify_not_outlier_large(300, a67);
    CHECK(verify_witness(w, a67));
    const auto& q = std::get<QuadraticWitness>(w.kind);
    CHECK(q.b < 34);
    CHECK(oracle::legendre(q.b * q.b - 1200, 67) == -1);
    const auto searched = find_witness(300, a67);
    REQUIRE(searched.has_value());
    CHECK(std::get<QuadraticWitness>(searched->kind).b <= q.b);

    CHECK_THROWS_AS(certify_not_outlier_large(10 * 61, algebra_b()), std::domain_error);
    CHECK_THROWS_AS(certify_not_outlier_large(3 * 67 * 67, a67), std::domain_error);
    CHECK_THROWS_AS(certify_not_outlier_large(200, a67), std::domain_error);

    for (u64 m = 60763; m < 62000; ++m) {
        if (m % 4 == 0 || m % (17 * 17) == 0 || m % (29 * 29) == 0) continue;
        if (perfect_square_root(m)) continue;
        const NormWitness big = certify_not_outlier_large(m, algebra_b());
        CHECK(verify_witness(big, algebra_b()));
    }
}

TEST_CASE("certified witnesses exist beyond r^2/16 for A_r") {
    for (u64 r : {3, 5, 7, 11, 13, 67, 113}) {
        const auto alg = QuaternionAlgebra::a_r(r);
        const u64 start = alg.outlier_bound() + 1;
        for (u64 m = start; m < start + 400; ++m) {
            if (m % r == 0 || perfect_square_root(m)) continue;
            CHECK(verify_witness(certify_not_outlier_large(m, alg), alg));
        }
    }
}

TEST_CASE("verify_witness rejects tampered witnesses") {
    const auto a67 = QuaternionAlgebra::a_r(67);
    auto w = *find_witness(201, a67);
    CHECK_FALSE(verify_witness(w, QuaternionAlgebra::a_r(3)));
    std::get<QuadraticWitness>(w.kind).b = 1;
    CHECK_FALSE(verify_witness(w, a67));
    NormWitness fake{10, RationalSquareWitness{3}};
    CHECK_FALSE(verify_witness(fake, a67));
}

TEST_CASE("supersingular reports") {
    const auto three = supersingular_report(3, 67);
    CHECK_FALSE(three.endomorphism_exists());
    CHECK(three.text ==
          "no supersingular elliptic curve over the algebraic closure of GF(67) has an endomorphism of degree 3");
    const auto four = supersingular_report(4, 67);
    CHECK(four.endomorphism_exists());
    CHECK(four.text == "endomorphism of degree 4 exists (multiplication by 2)");
    CHECK_FALSE(supersingular_report(2, 113).endomorphism_exists());
    CHECK(supersingular_report(12, 67).endomorphism_exists());
    CHECK_THROWS_AS(supersingular_report(3, 91), std::domain_error);
    CHECK_THROWS_AS(supersingular_report(0, 67), std::domain_error);
}

TEST_CASE("property: psquare invariance") {
    const std::vector<QuaternionAlgebra> algebras = {QuaternionAlgebra::a_r(67), QuaternionAlgebra::a_r(2),
                                                     algebra_b()};
    for (const auto& alg : algebras) {
        for (u64 q : alg.finite_ramified()) {
            for (u64 m = 1; m <= 500; ++m) {
                CAPTURE(m);
                CAPTURE(q);
                CHECK(is_outlier(i64(m), alg) == is_outlier(i64(m * q * q), alg));
            }
        }
    }
}

TEST_CASE("property: perfect squares are never outliers") {
    const auto alg = algebra_b();
    for (u64 k = 1; k * k <= 10000; ++k) {
        const auto d = decide_norm(i64(k * k), alg);
        CHECK(d.is_norm);
        CHECK(d.witness->is_rational_square());
        CHECK_FALSE(is_outlier(i64(k * k), QuaternionAlgebra::a_r(67)));
    }
}

TEST_CASE("property: single ramified prime dividing m once") {
    for (u64 r : {3, 5, 67, 113}) {
        const auto alg = QuaternionAlgebra::a_r(r);
        for (u64 m = r; m <= 500; m += r) {
            if ((m / r) % r == 0) continue;
            CHECK_FALSE(is_outlier(i64(m), alg));
        }
    }
}

TEST_CASE("property: outliers persist in algebras with more ramification") {
    const auto a2 = QuaternionAlgebra::a_r(2);
    CHECK(local_divides(a2.profile(), algebra_b().profile()));
    for (u64 m = 1; m <= 1000; ++m) {
        if (is_outlier(i64(m), a2)) CHECK(is_outlier(i64(m), algebra_b()));
    }
}

TEST_CASE("property: decisions agree with the oracle and witnesses re-verify") {
    const std::vector<std::vector<u64>> sets = {{3}, {5}, {7}, {67}, {2, 3, 5}, {2, 17, 29}};
    for (const auto& s : sets) {
        const auto alg = QuaternionAlgebra::from_ramification(s, s.size() % 2 == 1);
        if (!alg.is_definite()) continue;
        for (u64 m = 1; m <= 400; ++m) {
            const auto d = decide_norm(i64(m), alg);
            CHECK(d.outlier() == oracle::is_outlier(m, s));
            if (d.witness) CHECK(verify_witness(*d.witness, alg));
            CHECK(d.witness.has_value() != d.exhausted.has_value());
        }
    }
}

TEST_CASE("property: enumeration is independent of thread count") {
    const auto alg = QuaternionAlgebra::from_ramification({2, 3, 5}, true);
    const auto one = enumerate_base_outliers(alg, 1);
    for (unsigned t : {2u, 3u, 7u}) CHECK(enumerate_base_outliers(alg, t).base_outliers == one.base_outliers);
}
