#include <doctest.h>

#include <limits>

#include "opideal/atlas.hpp"

using namespace opideal;
using namespace opideal::atlas;

static constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {
Exponent exp_of(double u) { return std::isinf(u) ? Exponent::inf() : Exponent::of(u); }

kompact::EngineConfig quick() {
    kompact::EngineConfig cfg;
    cfg.search.restarts = 10;
    cfg.search.bb_nodes = 40000;
    return cfg;
}
}  // namespace

TEST_CASE("limit order closed-form values") {
    CHECK(limit_order_formula({2, Exponent::two(), Exponent::two()}).lambda ==
          doctest::Approx(0.5));
    // r = 4, u = v = 2 sits on the rho boundary and must agree across branches.
    auto q422 = limit_order_formula({4, Exponent::two(), Exponent::two()});
    CHECK(q422.lambda == doctest::Approx(0.5));
    CHECK(q422.branches_matched >= 2);
    CHECK(limit_order_formula({2, Exponent::of(4), Exponent::one()}).lambda ==
          doctest::Approx(0.75));
    // rho interior point: r = 4, u = 1.8, v = 2.5.
    auto rho = limit_order_formula({4, Exponent::of(1.8), Exponent::of(2.5)});
    double ir = 0.25, iv = 1 / 2.5;
    CHECK(rho.lambda == doctest::Approx(ir + (iv - ir) * (1 - ir - 1 / 1.8) / (0.5 - ir)));
}

TEST_CASE("limit order invalid queries are rejected") {
    CHECK_THROWS(LimitOrderQuery(0.5, Exponent::two(), Exponent::two()));
    CHECK_THROWS(LimitOrderQuery(kInf, Exponent::two(), Exponent::two()));
}

TEST_CASE("transpose symmetry with the summing side") {
    CHECK(limit_order_summing({2, Exponent::two(), Exponent::two()}) == doctest::Approx(0.5));
    // lambda(Pi_1, inf, 2) = lambda(K_1, 2, 1) = 1.
    CHECK(limit_order_summing({1, Exponent::inf(), Exponent::two()}) == doctest::Approx(1.0));
    CHECK(limit_order_formula({1, Exponent::two(), Exponent::one()}).lambda ==
          doctest::Approx(1.0));

    // The swap is an involution: the summing value of the swapped query
    // returns the direct value, over a grid.
    double grid[] = {1.0, 4.0 / 3.0, 2.0, 3.0, kInf};
    for (double r : {1.0, 1.7, 2.0, 2.5, 4.0})
        for (double u : grid)
            for (double v : grid) {
                LimitOrderQuery q(r, exp_of(u), exp_of(v));
                double direct = limit_order_formula(q).lambda;
                LimitOrderQuery pi_side(r, q.v.dual(), q.u.dual());
                CHECK(limit_order_summing(pi_side) == doctest::Approx(direct).epsilon(1e-14));
            }
}

TEST_CASE("region boundaries agree across branches") {
    Rng rng(7);
    int multi = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        double r = trial % 2 ? rng.uniform(1.0, 2.0) : rng.uniform(2.0, 8.0);
        double ir = 1.0 / r;
        // Plant the query on a boundary of the region decomposition.
        double candidates[] = {ir, 1 - ir, 0.5, rng.uniform()};
        double iu = candidates[rng.index(4)];
        double iv = candidates[rng.index(4)];
        LimitOrderQuery q(r, Exponent::from_reciprocal(iu), Exponent::from_reciprocal(iv));
        auto val = limit_order_formula(q);  // throws on disagreement > 1e-12
        if (val.branches_matched > 1) ++multi;
        CHECK(val.lambda >= -1e-15);
        CHECK(val.lambda <= 1.0 + 1e-15);
    }
    CHECK(multi > 200);  // the sampler does hit boundaries
}

TEST_CASE("limit order is nonincreasing in r where the 1/r branch is active") {
    for (double u : {1.0, 1.5}) {
        double prev = 2.0;
        for (double r : {1.0, 1.2, 1.5, 2.0, 3.0, 4.0}) {
            if (1.0 / u < 1.0 - 1.0 / r) continue;  // keep u <= r'
            auto v = limit_order_formula({r, exp_of(u), Exponent::one()});
            CHECK(v.lambda <= prev + 1e-15);
            prev = v.lambda;
        }
    }
}

TEST_CASE("empirical slope of the Hilbert identity matches 1/2") {
    auto ex = empirical_slope({2, Exponent::two(), Exponent::two()}, {2, 3, 4, 5}, quick());
    CHECK_FALSE(ex.partial);
    double lam = limit_order_formula({2, Exponent::two(), Exponent::two()}).lambda;
    CHECK(std::abs(ex.fitted_slope - lam) <= 0.15 + ex.slope_uncertainty);
    CHECK(ex.fitted_slope == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("diagonal truncations above the limit order stay bounded") {
    LimitOrderQuery q(2, Exponent::two(), Exponent::two());
    double lam = limit_order_formula(q).lambda;
    auto bounded = empirical_slope(q, {2, 3, 4, 5}, quick(), lam + 0.3);
    CHECK(bounded.value_ratio < 1.5);
    auto growing = empirical_slope(q, {2, 3, 4, 5}, quick(), std::max(0.0, lam - 0.3));
    CHECK(growing.value_ratio > bounded.value_ratio);
}

TEST_CASE("sharpness probe separates and equates correctly") {
    // u < r' for r = 1.5 but u > r' for r = 2: the limit orders differ.
    auto sep = sharpness_probe(1.5, 2.0, Exponent::of(2.5), Exponent::one());
    CHECK(sep.lambda_r == doctest::Approx(2.0 / 3.0));
    CHECK(sep.lambda_r_tilde == doctest::Approx(1.0 - 1.0 / 2.5));
    CHECK(sep.separated);

    // Equal-lambda pair: no separation by limit order.
    auto eq = sharpness_probe(2.0, 3.0, Exponent::two(), Exponent::two());
    CHECK(eq.lambda_r == doctest::Approx(0.5));
    CHECK(eq.lambda_r_tilde == doctest::Approx(0.5));
    CHECK_FALSE(eq.separated);

    // Reflexive comparison.
    auto same = sharpness_probe(2.0, 2.0, Exponent::of(4), Exponent::one());
    CHECK_FALSE(same.separated);
}
