#pragma once
// The p-compact norm kappa_p and the size measure m_p of finite sets.
//
// Everything runs through the transpose dualities: kappa_p(T) equals the
// quasi p-nuclear norm of T' (upper side: a functional family dominating
// ||T'y'|| pointwise) and the p-summing norm of T' (lower side: Pietsch
// witnesses).  Finite dimension collapses the bidual, so a quasi-nuclear
// certificate for T' reads back as a cover of T(B_E) by a p-convex hull in
// the codomain, checked through support functions.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "opideal/summing.hpp"

namespace opideal::kompact {

using summing::DominationCertificate;
using summing::EngineConfig;
using summing::PietschWitness;

struct QNCertificate {
    VectorSequence functionals;  // in the dual of the domain of S
    double cost = 0.0;           // (sum_k ||x'_k||^p)^{1/p}
    double residual = 0.0;       // worst found violation of the domination
    bool certified = false;
    bool converged = true;
};

struct Cover {
    VectorSequence vectors;  // (y_k) in the codomain
    double cost = 0.0;       // strong p-norm, an upper bound for kappa_p
    double residual = 0.0;   // support-function check leftover
};

struct KappaResult {
    NormEstimate est;
    PietschWitness lower_witness;  // Pietsch witness for the transpose
    QNCertificate upper_witness;   // quasi-nuclear certificate for the transpose
};

namespace detail {

/// Violation of ||Sx|| <= ||(<w_k, x>)_k||_p in norm units, by search.
inline std::pair<double, Eigen::VectorXd> qn_violation_search(
    const OperatorMatrix& S, Exponent p, const Eigen::MatrixXd& W,
    const SearchConfig& scfg, Rng& rng) {
    auto pairings = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd vals(W.cols());
        for (int k = 0; k < W.cols(); ++k) vals[k] = W.col(k).dot(x);
        return vals;
    };
    auto f = [&](const Eigen::VectorXd& x) {
        return vector_norm(S.entries * x, S.codomain.u) - vector_norm(pairings(x), p);
    };
    auto g = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd Sx = S.entries * x;
        Eigen::VectorXd out = S.entries.transpose() * norm_gradient(Sx, S.codomain.u);
        Eigen::VectorXd grad_pair = norm_gradient(pairings(x), p);
        for (int k = 0; k < W.cols(); ++k)
            if (grad_pair[k] != 0.0) out -= grad_pair[k] * W.col(k);
        return out;
    };
    std::vector<Eigen::VectorXd> seeds;
    const int n = S.domain.dim;
    for (int j = 0; j < n; ++j)
        seeds.push_back(Eigen::MatrixXd::Identity(n, n).col(j));
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(S.entries, Eigen::ComputeThinV);
        for (int j = 0; j < svd.matrixV().cols(); ++j) seeds.push_back(svd.matrixV().col(j));
    }
    search::AscentOptions aopt;
    aopt.restarts = scfg.restarts;
    aopt.iters = scfg.ascent_iters / 2;
    auto best = search::ascend_sphere(n, S.domain.u, f, g, rng, seeds, aopt);
    return {best.value, search::to_sphere(best.arg, S.domain.u)};
}

/// Scale a functional family until the found violations vanish.
inline double feasibility_rescale(const OperatorMatrix& S, Exponent p, Eigen::MatrixXd& W,
                                  const SearchConfig& scfg, Rng& rng, double* residual_out) {
    double scale_norm = Eigen::JacobiSVD<Eigen::MatrixXd>(S.entries).singularValues()[0];
    double tol = 1e-9 * std::max(scale_norm, 1e-300);
    double total = 1.0;
    double left = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        auto [viol, arg] = qn_violation_search(S, p, W, scfg, rng);
        left = viol;
        if (viol <= tol) break;
        double lhs = vector_norm(S.entries * arg, S.codomain.u);
        Eigen::VectorXd vals(W.cols());
        for (int k = 0; k < W.cols(); ++k) vals[k] = W.col(k).dot(arg);
        double gv = vector_norm(vals, p);
        if (gv < 1e-13 * std::max(lhs, 1e-300)) {
            left = viol;
            break;  // family blind in this direction
        }
        double rho = lhs / gv * (1.0 + 1e-9);
        W *= rho;
        total *= rho;
    }
    if (residual_out) *residual_out = std::max(0.0, left);
    return total;
}

}  // namespace detail

/// Quasi p-nuclear upper bound for S: a functional family (x'_k) with
/// ||Sx|| <= (sum |x'_k(x)|^p)^{1/p} and minimized p-cost.  Families come
/// from the Pietsch certificate of S (truncated to the budget m) and are
/// polished by penalized descent.
inline QNCertificate qn_upper(const OperatorMatrix& S, Exponent p, int m,
                              std::uint64_t seed, const EngineConfig& cfg = {},
                              const DominationCertificate* ready = nullptr) {
    QNCertificate out;
    const int n = S.domain.dim;
    const Exponent w = S.domain.u.dual();
    Rng rng(seed);

    if (p.is_inf()) {
        auto on = operator_norm_with_witness(S, cfg.search);
        Eigen::MatrixXd W(n, 1);
        W.col(0) = on.est.upper * norm_gradient(on.maximizer, S.domain.u);
        if (vector_norm(W.col(0), w) == 0.0) W(0, 0) = on.est.upper;
        out.functionals = VectorSequence(W, S.domain.dual(), p);
        out.cost = on.est.upper;
        SearchConfig scfg = cfg.search;
        auto [viol, arg] = detail::qn_violation_search(S, p, W, scfg, rng);
        out.residual = std::max(0.0, viol);
        out.converged = on.est.converged();
        return out;
    }

    if (S.is_zero()) {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, 1);
        out.functionals = VectorSequence(W, S.domain.dual(), p);
        out.cost = 0.0;
        out.certified = true;
        return out;
    }

    DominationCertificate cert;
    if (ready) {
        cert = *ready;
    } else {
        cert = summing::summing_upper(S, p, cfg);
    }
    const double pp = p.value();

    // Family straight from the certificate: w_k = C mu_k^{1/p} x'_k.
    auto family_of = [&](const DominationCertificate& c, int budget) {
        std::vector<std::pair<double, int>> order;
        for (int j = 0; j < c.weights.size(); ++j)
            if (c.weights[j] > 1e-14) order.push_back({-c.weights[j], j});
        std::sort(order.begin(), order.end());
        int count = std::min<int>(budget, static_cast<int>(order.size()));
        Eigen::MatrixXd W(n, std::max(count, 1));
        W.setZero();
        for (int k = 0; k < count; ++k)
            W.col(k) = c.constant * std::pow(c.weights[order[k].second], 1.0 / pp) *
                       c.atoms.items.col(order[k].second);
        return W;
    };

    auto cost_of = [&](const Eigen::MatrixXd& W) {
        double s = 0.0;
        for (int k = 0; k < W.cols(); ++k) s += std::pow(vector_norm(W.col(k), w), pp);
        return std::pow(s, 1.0 / pp);
    };

    // Penalized descent on the cost with violated probes as cuts.
    auto polish = [&](Eigen::MatrixXd W) {
        std::vector<Eigen::VectorXd> cuts;
        for (int j = 0; j < n; ++j)
            cuts.push_back(search::to_sphere(Eigen::MatrixXd::Identity(n, n).col(j),
                                             S.domain.u));
        double beta = 10.0;
        for (int ramp = 0; ramp < 4; ++ramp) {
            auto penalized = [&](const Eigen::MatrixXd& V) {
                double val = 0.0;
                for (int k = 0; k < V.cols(); ++k)
                    val += std::pow(vector_norm(V.col(k), w), pp);
                for (const auto& x : cuts) {
                    double lhs = std::pow(vector_norm(S.entries * x, S.codomain.u), pp);
                    double rhs = 0.0;
                    for (int k = 0; k < V.cols(); ++k)
                        rhs += std::pow(std::abs(V.col(k).dot(x)), pp);
                    double vgap = std::max(0.0, lhs - rhs);
                    val += beta * vgap * vgap;
                }
                return val;
            };
            double cur = penalized(W);
            double step = 0.1 * std::max(1.0, W.norm());
            for (int it = 0; it < cfg.search.ascent_iters / 4 && step > 1e-12; ++it) {
                // Numeric-free analytic gradient.
                Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, W.cols());
                for (int k = 0; k < W.cols(); ++k) {
                    double nk = vector_norm(W.col(k), w);
                    if (nk > 0)
                        G.col(k) += pp * std::pow(nk, pp - 1.0) * norm_gradient(W.col(k), w);
                }
                for (const auto& x : cuts) {
                    double lhs = std::pow(vector_norm(S.entries * x, S.codomain.u), pp);
                    double rhs = 0.0;
                    for (int k = 0; k < W.cols(); ++k)
                        rhs += std::pow(std::abs(W.col(k).dot(x)), pp);
                    double vgap = lhs - rhs;
                    if (vgap <= 0) continue;
                    for (int k = 0; k < W.cols(); ++k) {
                        double t = W.col(k).dot(x);
                        if (t == 0.0) continue;
                        G.col(k) -= beta * 2.0 * vgap * pp * std::pow(std::abs(t), pp - 1.0) *
                                    (t > 0 ? 1.0 : -1.0) * x;
                    }
                }
                double gn = G.norm();
                if (gn < 1e-13) break;
                Eigen::MatrixXd Y = W - (step / gn) * G;
                double cy = penalized(Y);
                if (cy < cur) {
                    W = Y;
                    cur = cy;
                    step *= 1.3;
                } else {
                    step *= 0.5;
                }
            }
            // Refresh cuts with the current worst violation.
            SearchConfig scfg = cfg.search;
            scfg.restarts = std::max(4, cfg.search.restarts / 4);
            auto [viol, arg] = detail::qn_violation_search(S, p, W, scfg, rng);
            if (viol > 0) cuts.push_back(arg);
            beta *= 12.0;
        }
        return W;
    };

    struct Candidate {
        Eigen::MatrixXd W;
        double cost;
        double residual;
    };
    std::vector<Candidate> cands;
    auto admit = [&](Eigen::MatrixXd W) {
        SearchConfig scfg = cfg.search;
        double res = 0.0;
        detail::feasibility_rescale(S, p, W, scfg, rng, &res);
        cands.push_back({W, cost_of(W), res});
    };

    Eigen::MatrixXd full = family_of(cert, cert.weights.size() > 0
                                               ? static_cast<int>(cert.weights.size())
                                               : 1);
    admit(full);
    if (m > 0 && m < full.cols()) admit(polish(family_of(cert, m)));
    else admit(polish(full));

    // A family that still violates the domination after rescaling (e.g. it is
    // blind in some direction) is no upper bound at all; it may only win when
    // nothing feasible exists, and then the certificate is not converged.
    double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(S.entries).singularValues()[0];
    double res_tol = 1e-6 * std::max(1.0, sigma);
    std::size_t best = cands.size();
    for (std::size_t c = 0; c < cands.size(); ++c) {
        if (cands[c].residual > res_tol) continue;
        if (best == cands.size() || cands[c].cost < cands[best].cost) best = c;
    }
    bool feasible = best != cands.size();
    if (!feasible) {
        best = 0;
        for (std::size_t c = 1; c < cands.size(); ++c)
            if (cands[c].residual < cands[best].residual) best = c;
    }

    out.functionals = VectorSequence(cands[best].W, S.domain.dual(), p);
    out.cost = feasible ? cands[best].cost : std::numeric_limits<double>::infinity();
    out.residual = cands[best].residual;
    out.certified = cert.certified && best == 0 && feasible;
    out.converged = cert.converged && feasible;
    return out;
}

/// kappa_p(T): upper from the quasi-nuclear certificate of T', lower from the
/// p-summing witness of T'.  A persistent gap flags optimizer failure, never
/// a disproof.
inline KappaResult kappa_norm(const OperatorMatrix& T, Exponent p,
                              const EngineConfig& cfg = {}) {
    KappaResult out;
    if (p.is_inf()) {
        auto on = operator_norm_with_witness(T, cfg.search);
        out.est = on.est;
        // Witness on the transpose side: the norming functional of Tx*.
        Eigen::VectorXd img = T.entries * on.maximizer;
        Eigen::VectorXd yprime = norm_gradient(img, T.codomain.u);
        Eigen::MatrixXd one(T.codomain.dim, 1);
        one.col(0) = yprime.size() ? yprime : Eigen::VectorXd::Zero(T.codomain.dim);
        out.lower_witness.vectors = VectorSequence(one, T.codomain.dual(), p);
        out.lower_witness.value = on.est.lower;
        out.lower_witness.weak_norm_upper = 1.0;
        out.upper_witness = qn_upper(transpose(T), p, 1, cfg.search.seed, cfg);
        return out;
    }

    OperatorMatrix S = transpose(T);
    if (T.is_zero()) {
        auto res = summing::summing_norm(S, p, cfg);
        out.est = NormEstimate::exact(0.0);
        out.lower_witness = res.witness;
        out.upper_witness = qn_upper(S, p, 1, cfg.search.seed, cfg, &res.certificate);
        return out;
    }

    // Escalating attempts; every bound is valid on its own, so attempts merge
    // by best lower and best upper.
    EngineConfig ecfg = cfg;
    summing::SummingResult res;
    summing::SummingResult best;
    best.est.lower = 0.0;
    bool have = false;
    for (int attempt = 0; attempt < 3; ++attempt) {
        ecfg.search.seed = cfg.search.seed + 7919 * attempt;
        res = summing::summing_norm(S, p, ecfg);
        if (!have || res.witness.value > best.witness.value) {
            best.witness = res.witness;
            best.est.lower = std::max(best.est.lower, res.witness.value);
        }
        if (!have || (res.certificate.converged &&
                      res.certificate.constant < best.certificate.constant) ||
            !best.certificate.converged) {
            best.certificate = res.certificate;
        }
        best.est.upper = std::min(have ? best.est.upper : res.est.upper, res.est.upper);
        have = true;
        if (res.est.converged() && res.est.relative_gap() <= cfg.gap_rel) break;
        // Rounds are cheap when the loop detects convergence early; give the
        // cutting planes real room before spending on restarts.
        ecfg.search.restarts *= 2;
        ecfg.rounds = cfg.rounds * (3 + 2 * attempt);
        ecfg.search.bb_nodes *= 2;
        ecfg.max_atoms += 60;
    }

    int budget = 4 * std::min(T.domain.dim, T.codomain.dim);
    QNCertificate qn = qn_upper(S, p, budget, cfg.search.seed ^ 0x9e37ULL, ecfg,
                                &best.certificate);
    double upper = std::min(best.est.upper, qn.cost);
    double lower = std::min(best.est.lower, upper * (1.0 + 1e-9));
    out.est.lower = lower;
    out.est.upper = std::max(upper, lower);
    bool ok = best.certificate.converged && qn.converged &&
              out.est.relative_gap() <= cfg.gap_rel + 1e-12;
    out.est.status = ok ? EstimateStatus::converged : EstimateStatus::unconverged;
    out.lower_witness = best.witness;
    out.upper_witness = qn;
    return out;
}

/// Reinterpret a quasi-nuclear certificate for T' as a cover of T(B_E): the
/// functionals on E'' = E... live in the codomain of T and span the p-convex
/// hull that contains the image of the ball.
inline Cover cover_from_qn(const QNCertificate& cert, const OperatorMatrix& T) {
    Cover c;
    if (cert.functionals.space.dim != T.codomain.dim)
        throw std::invalid_argument("certificate does not match the codomain");
    c.vectors = VectorSequence(cert.functionals.items, T.codomain, cert.functionals.p);
    c.cost = cert.cost;
    c.residual = cert.residual;
    return c;
}

/// Support-function residual of T(B_E) subset p-co{y_k}:
/// max over y' in B_{F'} of ||T'y'|| - ||(<y', y_k>)_k||_p, clamped at zero.
inline double verify_cover(const OperatorMatrix& T, const Cover& c,
                           const SearchConfig& scfg = {}, std::uint64_t seed = 1) {
    const int mdim = T.codomain.dim;
    const Exponent vprime = T.codomain.u.dual();
    const Exponent uprime = T.domain.u.dual();
    const Eigen::MatrixXd& Y = c.vectors.items;
    Exponent p = c.vectors.p;
    Rng rng(seed);

    auto pair_norm = [&](const Eigen::VectorXd& yp) {
        Eigen::VectorXd vals(Y.cols());
        for (int k = 0; k < Y.cols(); ++k) vals[k] = Y.col(k).dot(yp);
        return vector_norm(vals, p);
    };
    auto f = [&](const Eigen::VectorXd& yp) {
        return vector_norm(T.entries.transpose() * yp, uprime) - pair_norm(yp);
    };
    auto g = [&](const Eigen::VectorXd& yp) -> Eigen::VectorXd {
        const double h = 1e-6;
        Eigen::VectorXd out(yp.size());
        for (int i = 0; i < yp.size(); ++i) {
            Eigen::VectorXd a = yp, b = yp;
            a[i] += h;
            b[i] -= h;
            out[i] = (f(a) - f(b)) / (2 * h);
        }
        return out;
    };
    std::vector<Eigen::VectorXd> seeds;
    for (int j = 0; j < mdim; ++j)
        seeds.push_back(Eigen::MatrixXd::Identity(mdim, mdim).col(j));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries, Eigen::ComputeThinU);
    for (int j = 0; j < svd.matrixU().cols(); ++j) seeds.push_back(svd.matrixU().col(j));
    search::AscentOptions aopt;
    aopt.restarts = scfg.restarts;
    aopt.iters = scfg.ascent_iters / 2;
    auto best = search::ascend_sphere(mdim, vprime, f, g, rng, seeds, aopt);
    return std::max(0.0, best.value);
}

/// m_p of a finite set K: the least strong p-norm of a sequence whose
/// p-convex hull contains K, computed as kappa_p of the absolutely-convex
/// parameterization l_1^{|K|} -> E by the points of K.
inline KappaResult mp_of_finite_set(const std::vector<Vector>& points, Exponent p,
                                    const EngineConfig& cfg = {}) {
    if (points.empty()) throw std::invalid_argument("m_p needs a nonempty set");
    const SpaceSpec target = points[0].space;
    Eigen::MatrixXd Psi(target.dim, static_cast<int>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].space == target))
            throw std::invalid_argument("points must share one space");
        Psi.col(static_cast<int>(i)) = points[i].coords;
    }
    OperatorMatrix op(SpaceSpec(static_cast<int>(points.size()), Exponent::one()), target,
                      std::move(Psi));
    return kappa_norm(op, p, cfg);
}

}  // namespace opideal::kompact
