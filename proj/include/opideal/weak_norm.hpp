#pragma once
// Weak p-norm of a finite vector sequence:
//
//   sup { (sum_k |<x', x_k>|^p)^{1/p} : x' in the dual unit ball }.
//
// Exact on polytope dual balls (extreme-point enumeration) and in the
// spectral / sign-enumeration cases on the Euclidean ball; elsewhere a
// certified interval from ascent below and branch-and-bound / interpolation /
// containment bounds above.  The upper end is always a valid bound, so it can
// normalize Pietsch witnesses.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "opideal/estimate.hpp"
#include "opideal/search.hpp"

namespace opideal {

struct SearchConfig {
    int restarts = 32;
    int ascent_iters = 500;
    double ascent_rel_tol = 1e-9;
    long bb_nodes = 200000;
    double bb_rel_eps = 0.003;
    int sign_enum_cap = 24;
    double gap_target_rel = 0.01;
    bool certify = true;
    std::uint64_t seed = 1;
};

struct WeakNormResult {
    NormEstimate est;
    Eigen::VectorXd witness;  // functional in the dual ball attaining est.lower
};

namespace detail {

/// sup over { ||x'||_w <= 1 } of the p-mean of pairings with the columns of
/// `items`.  The ball exponent w is passed directly so containment fallbacks
/// can recurse.
inline WeakNormResult weak_sup_on_ball(const Eigen::MatrixXd& items, Exponent p,
                                       Exponent w, const SearchConfig& cfg, Rng& rng) {
    const int n = static_cast<int>(items.rows());
    const int k = static_cast<int>(items.cols());
    WeakNormResult out;

    // p = inf: sup_x' max_k |<x', x_k>| = max_k ||x_k||_{w'}.
    if (p.is_inf()) {
        double best = -1.0;
        int arg = 0;
        for (int j = 0; j < k; ++j) {
            double v = vector_norm(items.col(j), w.dual());
            if (v > best) {
                best = v;
                arg = j;
            }
        }
        out.est = NormEstimate::exact(std::max(0.0, best));
        out.witness = norm_gradient(items.col(arg), w.dual());
        if (out.witness.size() == 0 || vector_norm(out.witness, w) == 0.0) {
            out.witness = Eigen::VectorXd::Zero(n);
            out.witness[0] = 1.0;
        }
        return out;
    }

    const double pp = p.value();
    auto pmean = [&](const Eigen::VectorXd& xp) -> double {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += std::pow(std::abs(items.col(j).dot(xp)), pp);
        return std::pow(s, 1.0 / pp);
    };

    // Anchor lower bound: best single item.
    double anchor = 0.0;
    int anchor_arg = 0;
    for (int j = 0; j < k; ++j) {
        double v = vector_norm(items.col(j), w.dual());
        if (v > anchor) {
            anchor = v;
            anchor_arg = j;
        }
    }
    if (anchor == 0.0) {  // zero sequence
        out.est = NormEstimate::exact(0.0);
        out.witness = Eigen::VectorXd::Zero(n);
        out.witness[0] = 1.0;
        return out;
    }

    // Dual ball is a polytope: enumerate extreme points, the objective is
    // convex in x'.
    if (w.is_one()) {
        double best = 0.0;
        int arg = 0;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < k; ++c) s += std::pow(std::abs(items(j, c)), pp);
            s = std::pow(s, 1.0 / pp);
            if (s > best) {
                best = s;
                arg = j;
            }
        }
        out.est = NormEstimate::exact(best);
        out.witness = Eigen::VectorXd::Zero(n);
        out.witness[arg] = 1.0;
        return out;
    }
    if (w.is_inf() && n <= cfg.sign_enum_cap) {
        Eigen::VectorXd s = Eigen::VectorXd::Ones(n);
        Eigen::VectorXd y = items.transpose() * s;
        auto flip = [&](int j) { y += 2.0 * s[j] * items.row(j).transpose(); };
        auto score = [&]() { return vector_norm(y, p); };
        auto [best, bs] = search::gray_max(n, flip, score, s);
        out.est = NormEstimate::exact(best);
        out.witness = bs;
        return out;
    }

    if (w.is_two()) {
        if (p.is_two()) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(items, Eigen::ComputeThinU);
            out.est = NormEstimate::exact(svd.singularValues()[0]);
            out.witness = svd.matrixU().col(0);
            return out;
        }
        if (p.is_one() && k <= cfg.sign_enum_cap) {
            // sup ||items' x'||_1 = max over signs t of ||items t||_2.
            Eigen::VectorXd t = Eigen::VectorXd::Ones(k);
            Eigen::VectorXd z = items * t;
            auto flip = [&](int j) { z += 2.0 * t[j] * items.col(j); };
            auto score = [&]() { return z.norm(); };
            auto [best, bt] = search::gray_max(k, flip, score, t);
            out.est = NormEstimate::exact(best);
            out.witness = search::to_sphere(items * bt, Exponent::two());
            return out;
        }
    }

    // General route: ascent below, certified bounds above.
    auto grad = [&](const Eigen::VectorXd& xp) -> Eigen::VectorXd {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < k; ++j) {
            double t = items.col(j).dot(xp);
            double a = std::abs(t);
            if (a <= 0.0) continue;
            g += (t > 0 ? 1.0 : -1.0) * std::pow(a, pp - 1.0) * items.col(j);
        }
        return g;
    };
    std::vector<Eigen::VectorXd> seeds;
    seeds.push_back(norm_gradient(items.col(anchor_arg), w.dual()));
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(items, Eigen::ComputeThinU);
        for (int j = 0; j < std::min<int>(2, svd.matrixU().cols()); ++j)
            seeds.push_back(svd.matrixU().col(j));
    }
    search::AscentOptions aopt;
    aopt.restarts = cfg.restarts;
    aopt.iters = cfg.ascent_iters;
    aopt.rel_tol = cfg.ascent_rel_tol;
    auto power_sum = [&](const Eigen::VectorXd& xp) -> double {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += std::pow(std::abs(items.col(j).dot(xp)), pp);
        return s;
    };
    search::Maximizer asc =
        search::ascend_sphere(n, w, pmean, grad, rng, seeds, aopt);
    double lower = std::max(anchor, asc.value);
    out.witness = asc.value >= anchor ? asc.arg
                                      : static_cast<Eigen::VectorXd>(
                                            norm_gradient(items.col(anchor_arg), w.dual()));

    // Certified upper candidates.
    double col_scale = 0.0;
    for (int j = 0; j < k; ++j) col_scale = std::max(col_scale, items.col(j).norm());
    std::vector<double> uppers;
    uppers.push_back(strong_p_norm(items, w.dual(), p));  // weak <= strong

    if (w.is_one() || w.is_two() || w.is_inf()) {
        if (cfg.certify) {
            double gb = 0.0;  // bound of ||grad power_sum|| on the circumscribed ball
            double R = w.is_inf() ? std::sqrt(static_cast<double>(n)) : 1.0;
            for (int j = 0; j < k; ++j)
                gb += pp * std::pow(items.col(j).norm() * R, pp - 1.0) * items.col(j).norm();
            search::Maximizer warm;
            warm.arg = out.witness;
            warm.value = power_sum(out.witness);
            double abs_eps = cfg.bb_rel_eps * std::max(std::pow(lower, pp), 1e-12);
            auto bb = search::max_on_ball_certified(n, w, power_sum, gb, abs_eps,
                                                    cfg.bb_nodes, warm);
            if (bb.found > 0 && std::pow(bb.found, 1.0 / pp) > lower) {
                lower = std::pow(bb.found, 1.0 / pp);
                out.witness = bb.arg;
            }
            if (bb.valid_upper) uppers.push_back(std::pow(std::max(bb.upper, 0.0), 1.0 / pp));
        }
        if (w.is_two() && p.near(4.0)) {
            // lambda_max of the fourth-moment matrix dominates the quartic form.
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
            for (int j = 0; j < k; ++j) {
                Eigen::MatrixXd outer = items.col(j) * items.col(j).transpose();
                Eigen::Map<Eigen::VectorXd> v(outer.data(), n * n);
                M += v * v.transpose();
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
            uppers.push_back(std::pow(std::max(0.0, es.eigenvalues().maxCoeff()), 0.25));
        }
        if (w.is_two() && pp > 2.0) {
            // ||y||_p <= ||y||_2^{2/p} ||y||_inf^{1-2/p} pointwise.
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(items);
            double n22 = svd.singularValues()[0];
            double n2i = col_scale;
            uppers.push_back(std::pow(n22, 2.0 / pp) * std::pow(n2i, 1.0 - 2.0 / pp));
        }
    } else {
        // Containment: B_w subset factor * B_q for q in {1, 2, inf}.
        for (Exponent q : {Exponent::one(), Exponent::two(), Exponent::inf()}) {
            double factor = ball_containment_factor(n, w, q);
            Rng sub = rng.derive(17);
            WeakNormResult inner = weak_sup_on_ball(items, p, q, cfg, sub);
            uppers.push_back(factor * inner.est.upper);
        }
    }

    double upper = uppers[0];
    for (double u : uppers) upper = std::min(upper, u);
    upper = std::max(upper, lower);

    out.est.lower = lower;
    out.est.upper = upper;
    out.est.status = (upper - lower <= cfg.gap_target_rel * std::max(upper, 1e-300) + 1e-12)
                         ? EstimateStatus::converged
                         : EstimateStatus::unconverged;
    return out;
}

}  // namespace detail

/// Certified interval for the weak p-norm of a sequence; the witness is a
/// dual-ball functional attaining the lower end.
inline WeakNormResult weak_p_norm(const VectorSequence& s, const SearchConfig& cfg = {}) {
    Rng rng(cfg.seed);
    return detail::weak_sup_on_ball(s.items, s.p, s.space.u.dual(), cfg, rng);
}

}  // namespace opideal
