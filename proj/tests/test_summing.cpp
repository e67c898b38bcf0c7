#include <doctest.h>

#include <limits>

#include "opideal/summing.hpp"
#include "oracles.hpp"

using namespace opideal;
using namespace opideal::summing;

static constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {
Exponent exp_of(double u) { return std::isinf(u) ? Exponent::inf() : Exponent::of(u); }

EngineConfig quick() {
    EngineConfig cfg;
    cfg.search.restarts = 12;
    cfg.search.bb_nodes = 60000;
    return cfg;
}
}  // namespace

TEST_CASE("summing norm: rank one equals ||x'|| ||y||") {
    Rng rng(3);
    double grid[] = {1.0, 2.0, kInf};
    for (int trial = 0; trial < 6; ++trial) {
        SpaceSpec dom(2 + rng.index(2), exp_of(grid[rng.index(3)]));
        SpaceSpec cod(2 + rng.index(2), exp_of(grid[rng.index(3)]));
        Eigen::VectorXd f = rng.gaussian_vector(dom.dim);
        Eigen::VectorXd y = rng.gaussian_vector(cod.dim);
        auto T = rank_one(f, dom, y, cod);
        double want = vector_norm(f, dom.u.dual()) * vector_norm(y, cod.u);
        for (double p : {1.0, 2.0}) {
            auto r = summing_norm(T, Exponent::of(p), quick());
            CHECK(r.est.lower == doctest::Approx(want).epsilon(0.02));
            CHECK(r.est.upper == doctest::Approx(want).epsilon(0.02));
            CHECK(r.est.lower <= want * (1 + 1e-9));
            CHECK(r.est.upper >= want * (1 - 1e-9));
        }
    }
}

TEST_CASE("summing norm of the Hilbert identity matches the sphere-moment value") {
    // Oracle: rotation invariance forces the uniform Pietsch measure, so
    // pi_p(id_{l_2^n}) = (E|theta_1|^p)^{-1/p}; cross-checked for n = 2 by
    // quadrature over the circle.
    double q2 = 0.0;
    {
        int N = 200000;
        for (int i = 0; i < N; ++i) {
            double t = M_PI * (i + 0.5) / N;
            q2 += std::pow(std::abs(std::cos(t)), 4.0);
        }
        q2 /= N;
    }
    CHECK(q2 == doctest::Approx(oracle::sphere_moment(2, 4)).epsilon(1e-4));

    for (int n = 2; n <= 3; ++n) {
        auto id = identity_operator(n, Exponent::two(), Exponent::two());
        auto r2 = summing_norm(id, Exponent::two(), quick());
        CHECK(r2.est.lower == doctest::Approx(std::sqrt(double(n))).epsilon(0.01));
        CHECK(r2.est.upper == doctest::Approx(std::sqrt(double(n))).epsilon(0.01));

        auto r4 = summing_norm(id, Exponent::of(4), quick());
        double want = oracle::pi_p_identity_l2(n, 4.0);
        CHECK(r4.est.upper >= want * (1 - 1e-6));
        CHECK(r4.est.upper <= want * 1.05);
        CHECK(r4.est.lower <= want * (1 + 1e-6));
        CHECK(r4.est.lower >= want * 0.93);
    }
}

TEST_CASE("summing norm: zero operator") {
    OperatorMatrix zero(space(3, 2.0), space(2, 2.0), Eigen::MatrixXd::Zero(2, 3));
    auto r = summing_norm(zero, Exponent::two(), quick());
    CHECK(r.est.lower == 0.0);
    CHECK(r.est.upper == 0.0);
    CHECK(r.witness.value == 0.0);
    CHECK(r.certificate.constant == 0.0);
}

TEST_CASE("witness values never exceed domination constants") {
    Rng rng(17);
    double grid[] = {1.0, 2.0, kInf};
    for (int trial = 0; trial < 10; ++trial) {
        auto T = random_operator(rng, space(2 + rng.index(2), grid[rng.index(3)]),
                                 space(2 + rng.index(2), grid[rng.index(3)]));
        double ps[] = {1.0, 2.0, 4.0};
        Exponent p = Exponent::of(ps[rng.index(3)]);
        auto r = summing_norm(T, p, quick());
        CHECK(r.witness.value <= r.certificate.constant * (1 + 1e-6) + 1e-8);
        CHECK(r.est.lower <= r.est.upper + 1e-9);
    }
}

TEST_CASE("summing norm is homogeneous") {
    Rng rng(23);
    auto T = random_operator(rng, space(3, 2.0), space(3, 1.0));
    auto r1 = summing_norm(T, Exponent::two(), quick());
    OperatorMatrix cT(T.domain, T.codomain, 2.5 * T.entries);
    auto r2 = summing_norm(cT, Exponent::two(), quick());
    CHECK(r2.est.lower == doctest::Approx(2.5 * r1.est.lower).epsilon(0.02));
    CHECK(r2.est.upper == doctest::Approx(2.5 * r1.est.upper).epsilon(0.02));
}

TEST_CASE("ideal property under composition") {
    Rng rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        auto R = random_operator(rng, space(3, 2.0), space(3, 2.0));
        auto T = random_operator(rng, space(3, 2.0), space(2, 2.0));
        auto S = random_operator(rng, space(2, 2.0), space(2, 1.0));
        auto chain = compose(S, compose(T, R));
        auto rc = summing_norm(chain, Exponent::two(), quick());
        auto rt = summing_norm(T, Exponent::two(), quick());
        double ns = operator_norm(S).upper;
        double nr = operator_norm(R).upper;
        CHECK(rc.est.lower <= ns * rt.est.upper * nr + 1e-6);
    }
}

TEST_CASE("summing norm is nonincreasing in p and dominates the operator norm") {
    Rng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        auto T = random_operator(rng, space(3, 2.0), space(3, 2.0));
        auto r1 = summing_norm(T, Exponent::one(), quick());
        auto r2 = summing_norm(T, Exponent::two(), quick());
        auto r4 = summing_norm(T, Exponent::of(4), quick());
        CHECK(r2.est.lower <= r1.est.upper + 1e-7);
        CHECK(r4.est.lower <= r2.est.upper + 1e-7);
        CHECK(operator_norm(T).lower <= r4.est.upper + 1e-7);
    }
}

TEST_CASE("p = inf routes to the operator norm") {
    Rng rng(37);
    auto T = random_operator(rng, space(3, 1.0), space(2, kInf));
    auto r = summing_norm(T, Exponent::inf(), quick());
    auto on = operator_norm(T);
    CHECK(r.est.lower == doctest::Approx(on.lower));
    CHECK(r.est.upper == doctest::Approx(on.upper));
}

TEST_CASE("domination certificate is feasible under fresh search") {
    Rng rng(41);
    double grid[] = {1.0, 2.0, kInf};
    for (int trial = 0; trial < 8; ++trial) {
        auto T = random_operator(rng, space(2 + rng.index(2), grid[rng.index(3)]),
                                 space(2 + rng.index(2), grid[rng.index(3)]));
        Exponent p = Exponent::of(trial % 2 ? 2.0 : 1.0);
        auto cert = summing_upper(T, p, quick());
        SearchConfig scfg;
        scfg.seed = 1234 + trial;
        scfg.restarts = 16;
        double res = domination_residual_search(T, p, cert, scfg);
        CHECK(res <= cert.residual + 1e-5 * std::max(1.0, cert.constant));
    }
}

TEST_CASE("witness is feasible: stored family has weak norm at most one") {
    Rng rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        auto T = random_operator(rng, space(3, 2.0), space(3, 2.0));
        Exponent p = Exponent::of(trial % 2 ? 2.0 : 4.0);
        auto w = summing_lower(T, p, 3, 99 + trial, quick());
        auto wn = weak_p_norm(w.vectors);
        CHECK(wn.est.upper <= 1.0 + 1e-6);
        double v = 0.0;
        for (int i = 0; i < w.vectors.count(); ++i)
            v += std::pow(vector_norm(T.entries * w.vectors.items.col(i), T.codomain.u),
                          p.value());
        CHECK(std::pow(v, 1.0 / p.value()) == doctest::Approx(w.value).epsilon(1e-8));
    }
}
