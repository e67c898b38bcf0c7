#pragma once
// Membership of a point in the p-convex hull of a finite sequence:
// decide whether  min { ||a||_{p'} : sum_k a_k x_k = point } <= 1 + tol.
// Linear program for p' in {1, inf}, minimum-norm least squares for p' = 2,
// projected subgradient descent otherwise.

#include <Eigen/Dense>
#include <cmath>

#include "opideal/linprog.hpp"
#include "opideal/norms.hpp"

namespace opideal {

struct PcoMembership {
    bool in_span = false;
    bool member = false;
    double coeff_norm = std::numeric_limits<double>::infinity();
    Eigen::VectorXd coefficients;
    Exponent coeff_exponent;  // p'
    // When the point is outside the span: a functional vanishing on the
    // sequence with positive pairing against the point.
    Eigen::VectorXd infeasibility_certificate;
};

namespace detail {

inline Eigen::VectorXd min_pnorm_in_affine(const Eigen::MatrixXd& X,
                                           const Eigen::VectorXd& b, Exponent q) {
    const int k = static_cast<int>(X.cols());

    if (q.is_two()) {
        return X.completeOrthogonalDecomposition().solve(b);
    }

    if (q.is_one() || q.is_inf()) {
        // Split a = a+ - a-.
        const int n = static_cast<int>(X.rows());
        if (q.is_one()) {
            Eigen::MatrixXd A(n, 2 * k);
            A << X, -X;
            Eigen::VectorXd c = Eigen::VectorXd::Ones(2 * k);
            std::vector<lp::Sense> sense(n, lp::Sense::eq);
            auto sol = lp::solve(A, b, sense, c);
            if (sol.status != lp::Status::optimal)
                return X.completeOrthogonalDecomposition().solve(b);
            return sol.x.head(k) - sol.x.tail(k);
        }
        // q = inf: minimize t with a+ + a- <= t per coordinate.
        Eigen::MatrixXd A(n + k, 2 * k + 1);
        A.setZero();
        A.block(0, 0, n, k) = X;
        A.block(0, k, n, k) = -X;
        Eigen::VectorXd rhs(n + k);
        rhs.head(n) = b;
        rhs.tail(k).setZero();
        std::vector<lp::Sense> sense;
        for (int i = 0; i < n; ++i) sense.push_back(lp::Sense::eq);
        for (int i = 0; i < k; ++i) {
            A(n + i, i) = 1.0;
            A(n + i, k + i) = 1.0;
            A(n + i, 2 * k) = -1.0;
            sense.push_back(lp::Sense::le);
        }
        Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * k + 1);
        c[2 * k] = 1.0;
        auto sol = lp::solve(A, rhs, sense, c);
        if (sol.status != lp::Status::optimal)
            return X.completeOrthogonalDecomposition().solve(b);
        return sol.x.head(k) - sol.x.segment(k, k);
    }

    // General q: subgradient descent in the affine solution set from the
    // minimum-2-norm start.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
    Eigen::VectorXd a = cod.solve(b);
    // Orthonormal basis of the null space of X.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullV);
    int rank = 0;
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-12 * std::max(1.0, smax)) ++rank;
    int nz = k - rank;
    if (nz <= 0) return a;
    Eigen::MatrixXd N = svd.matrixV().rightCols(nz);
    double step = 0.5 * std::max(1.0, vector_norm(a, q));
    double cur = vector_norm(a, q);
    for (int it = 0; it < 2000 && step > 1e-13; ++it) {
        Eigen::VectorXd g = N.transpose() * norm_gradient(a, q);
        if (g.norm() < 1e-14) break;
        Eigen::VectorXd cand = a - (step / g.norm()) * (N * g);
        double cn = vector_norm(cand, q);
        if (cn < cur) {
            a = cand;
            cur = cn;
            step *= 1.25;
        } else {
            step *= 0.5;
        }
    }
    return a;
}

}  // namespace detail

/// Decide point-in-p-convex-hull with the minimizing coefficients.
/// Coefficients live in the unit ball of l_{p'} (sup norm when p = 1).
inline PcoMembership pco_membership(const VectorSequence& s, const Vector& point,
                                    double tol = 1e-7) {
    if (!(point.space == s.space))
        throw std::invalid_argument("point and sequence must share one space");
    PcoMembership out;
    out.coeff_exponent = s.p.dual();

    const Eigen::MatrixXd& X = s.items;
    const Eigen::VectorXd& b = point.coords;

    // Span test with an explicit infeasibility certificate.
    Eigen::VectorXd ls = X.completeOrthogonalDecomposition().solve(b);
    Eigen::VectorXd resid = b - X * ls;
    double scale = std::max(1.0, b.norm());
    if (resid.norm() > 1e-8 * scale) {
        out.in_span = false;
        out.member = false;
        out.infeasibility_certificate = resid / resid.norm();
        return out;
    }
    out.in_span = true;

    Eigen::VectorXd a = detail::min_pnorm_in_affine(X, b, out.coeff_exponent);
    out.coefficients = a;
    out.coeff_norm = vector_norm(a, out.coeff_exponent);
    out.member = out.coeff_norm <= 1.0 + tol;
    return out;
}

}  // namespace opideal
