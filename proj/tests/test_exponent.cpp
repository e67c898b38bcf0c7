#include <doctest.h>

#include "opideal/exponent.hpp"
#include "opideal/rng.hpp"

using namespace opideal;

TEST_CASE("dual exponent values") {
    CHECK(dual_exponent(Exponent::of(2)).value() == doctest::Approx(2.0));
    CHECK(dual_exponent(Exponent::of(1)).is_inf());
    CHECK(dual_exponent(Exponent::inf()).is_one());
    CHECK(dual_exponent(Exponent::of(4)).value() == doctest::Approx(4.0 / 3.0));
    CHECK(dual_exponent(Exponent::of(4)).reciprocal() == doctest::Approx(0.75));
}

TEST_CASE("dual exponent rejects u < 1") {
    CHECK_THROWS(Exponent::of(0.5));
    CHECK_THROWS(Exponent::of(-2.0));
    CHECK_THROWS(Exponent::of(std::nan("")));
}

TEST_CASE("dual exponent is an exact involution") {
    // Includes reciprocals whose complement is not representable (e.g. 1/3),
    // which a naive 1 - r implementation gets wrong by an ulp.
    for (double u : {1.0, 4.0 / 3.0, 1.5, 2.0, 3.0, 4.0, 7.0, 100.0}) {
        Exponent e = Exponent::of(u);
        CHECK(dual_exponent(dual_exponent(e)) == e);
    }
    CHECK(dual_exponent(dual_exponent(Exponent::inf())) == Exponent::inf());
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        Exponent e = Exponent::from_reciprocal(rng.uniform());
        CHECK(dual_exponent(dual_exponent(e)) == e);
    }
}

TEST_CASE("exponent predicates and ordering") {
    CHECK(Exponent::of(2).is_two());
    CHECK(Exponent::of(1).is_one());
    CHECK(Exponent::inf().is_inf());
    CHECK(Exponent::of(3).near(3.0));
    CHECK_FALSE(Exponent::of(3).near(3.0001));
    CHECK(Exponent::of(4).reciprocal() < Exponent::of(2).reciprocal());
}
