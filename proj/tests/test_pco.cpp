#include <doctest.h>

#include <limits>

#include "opideal/pco.hpp"
#include "opideal/rng.hpp"

using namespace opideal;

static constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {

VectorSequence seq2(const Eigen::MatrixXd& m, double u, double p) {
    Exponent pe = std::isinf(p) ? Exponent::inf() : Exponent::of(p);
    Exponent ue = std::isinf(u) ? Exponent::inf() : Exponent::of(u);
    return VectorSequence(m, SpaceSpec(static_cast<int>(m.rows()), ue), pe);
}

}  // namespace

TEST_CASE("pco membership: boundary point of the 2-hull") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    auto s = seq2(m, 2, 2);
    Eigen::VectorXd b(2);
    b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    auto r = pco_membership(s, Vector(b, s.space));
    CHECK(r.in_span);
    CHECK(r.member);
    CHECK(r.coeff_norm == doctest::Approx(1.0));
    CHECK(r.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("pco membership: (1,1) is outside the 2-hull of {e1,e2}") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    auto s = seq2(m, 2, 2);
    Eigen::VectorXd b(2);
    b << 1.0, 1.0;
    auto r = pco_membership(s, Vector(b, s.space));
    CHECK(r.in_span);
    CHECK_FALSE(r.member);
    CHECK(r.coeff_norm == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("pco membership: p = 1 coefficients live in the sup-norm ball") {
    Eigen::MatrixXd m(2, 1);
    m << 2.0, 0.0;
    auto s = seq2(m, 2, 1);
    Eigen::VectorXd b(2);
    b << 1.0, 0.0;
    auto r = pco_membership(s, Vector(b, s.space));
    CHECK(r.member);
    CHECK(r.coeff_norm == doctest::Approx(0.5));
    CHECK(r.coeff_exponent.is_inf());
}

TEST_CASE("pco membership: point outside the span is rejected with certificate") {
    Eigen::MatrixXd m(3, 1);
    m << 1.0, 0.0, 0.0;
    auto s = seq2(m, 2, 2);
    Eigen::VectorXd b(3);
    b << 0.0, 1.0, 0.0;
    auto r = pco_membership(s, Vector(b, s.space));
    CHECK_FALSE(r.in_span);
    CHECK_FALSE(r.member);
    CHECK(std::abs(r.infeasibility_certificate.dot(b)) > 0.5);
    CHECK(std::abs(r.infeasibility_certificate.dot(m.col(0))) < 1e-9);
}

TEST_CASE("pco membership implies the norm bound against the strong norm") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + rng.index(3);
        int k = 1 + rng.index(4);
        Eigen::MatrixXd m(n, k);
        for (int j = 0; j < k; ++j) m.col(j) = rng.gaussian_vector(n);
        double ps[] = {1.0, 1.5, 2.0, 4.0};
        auto s = seq2(m, 2, ps[rng.index(4)]);
        // Random point in the hull.
        Eigen::VectorXd a(k);
        for (int j = 0; j < k; ++j) a[j] = rng.uniform(-1, 1);
        double an = vector_norm(a, s.p.dual());
        if (an > 0) a /= (an * (1.0 + rng.uniform()));
        Vector point(m * a, s.space);
        auto r = pco_membership(s, point, 1e-7);
        CHECK(r.member);
        CHECK(vector_norm(point) <= strong_p_norm(s) + 1e-7);
    }
}

TEST_CASE("pco membership: general exponent descent reaches the LP answer") {
    // Cross-check the subgradient path (p' generic) against values bracketing
    // it: coefficients for p'=1.5 must lie between the p'=1 and p'=2 minima.
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd m(2, 3);
        for (int j = 0; j < 3; ++j) m.col(j) = rng.gaussian_vector(2);
        Eigen::VectorXd b = rng.gaussian_vector(2);
        auto s3 = seq2(m, 2, 3.0);  // p' = 1.5
        auto r = pco_membership(s3, Vector(b, s3.space));
        auto r1 = detail::min_pnorm_in_affine(m, b, Exponent::of(1));
        auto r2 = detail::min_pnorm_in_affine(m, b, Exponent::of(2));
        double n15_of_1 = vector_norm(r1, Exponent::of(1.5));
        double n15_of_2 = vector_norm(r2, Exponent::of(1.5));
        CHECK(r.coeff_norm <= std::min(n15_of_1, n15_of_2) + 1e-6);
    }
}
