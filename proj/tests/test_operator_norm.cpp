#include <doctest.h>

#include <limits>

#include "opideal/operator_norm.hpp"
#include "oracles.hpp"

using namespace opideal;

static constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {
Exponent exp_of(double u) { return std::isinf(u) ? Exponent::inf() : Exponent::of(u); }
}

TEST_CASE("operator norm: identities and trivial cases") {
    for (int n = 2; n <= 5; ++n) {
        auto id = identity_operator(n, Exponent::two(), Exponent::two());
        auto r = operator_norm(id);
        CHECK(r.lower == doctest::Approx(1.0));
        CHECK(r.upper == doctest::Approx(1.0));
    }
    Eigen::VectorXd d(2);
    d << 2, 3;
    auto diag = diagonal_operator(d, Exponent::inf(), Exponent::one());
    auto r = operator_norm(diag);
    CHECK(r.lower == doctest::Approx(5.0));
    CHECK(r.upper == doctest::Approx(5.0));

    OperatorMatrix zero(SpaceSpec(3, Exponent::of(3)), SpaceSpec(2, Exponent::of(1.5)),
                        Eigen::MatrixXd::Zero(2, 3));
    auto rz = operator_norm(zero);
    CHECK(rz.lower == 0.0);
    CHECK(rz.upper == 0.0);
}

TEST_CASE("transpose is an involution and swaps dualized spaces") {
    Rng rng(5);
    auto T = random_operator(rng, space(3, 1.0), space(2, kInf));
    auto Tt = transpose(T);
    CHECK(Tt.domain.u.is_one());    // dual of inf
    CHECK(Tt.codomain.u.is_inf());  // dual of 1
    CHECK(Tt.entries(0, 1) == T.entries(1, 0));
    auto Ttt = transpose(Tt);
    CHECK(Ttt.entries == T.entries);
    CHECK(Ttt.domain == T.domain);
    CHECK(Ttt.codomain == T.codomain);
}

TEST_CASE("operator norm equals the transpose norm") {
    Rng rng(7);
    double grid[] = {1.0, 2.0, kInf};
    for (int trial = 0; trial < 30; ++trial) {
        auto T = random_operator(rng, space(2 + rng.index(3), grid[rng.index(3)]),
                                 space(2 + rng.index(3), grid[rng.index(3)]));
        auto a = operator_norm(T);
        auto b = operator_norm(transpose(T));
        CHECK(a.lower <= b.upper + 1e-8);
        CHECK(b.lower <= a.upper + 1e-8);
    }
}

TEST_CASE("operator norm on the exponent grid is exact (2d oracle)") {
    Rng rng(9);
    double grid[] = {1.0, 2.0, kInf};
    for (double u : grid)
        for (double v : grid)
            for (int trial = 0; trial < 5; ++trial) {
                auto T = random_operator(rng, space(2, u), space(2, v));
                auto r = operator_norm(T);
                double want = oracle::circle_sup(exp_of(u), [&](const Eigen::VectorXd& x) {
                    return vector_norm(T.entries * x, exp_of(v));
                });
                CHECK(r.lower == doctest::Approx(want).epsilon(1e-6));
                CHECK(r.upper == doctest::Approx(want).epsilon(1e-6));
            }
}

TEST_CASE("operator norm certified interval for general exponents") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        auto T = random_operator(rng, space(2, 3.0), space(2, 1.5));
        auto r = operator_norm(T);
        double want = oracle::circle_sup(Exponent::of(3), [&](const Eigen::VectorXd& x) {
            return vector_norm(T.entries * x, Exponent::of(1.5));
        });
        CHECK(r.lower <= want + 1e-7);
        CHECK(r.upper >= want - 1e-7);
        CHECK(r.lower == doctest::Approx(want).epsilon(1e-4));
    }
}

TEST_CASE("operator norm witness attains the lower bound") {
    Rng rng(17);
    double grid[] = {1.0, 2.0, kInf};
    for (int trial = 0; trial < 20; ++trial) {
        auto T = random_operator(rng, space(2 + rng.index(3), grid[rng.index(3)]),
                                 space(2 + rng.index(3), grid[rng.index(3)]));
        auto r = operator_norm_with_witness(T);
        CHECK(vector_norm(r.maximizer, T.domain.u) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(vector_norm(T.entries * r.maximizer, T.codomain.u) ==
              doctest::Approx(r.est.lower).epsilon(1e-8));
    }
}
