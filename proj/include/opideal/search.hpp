#pragma once
// Global maximization of even, positively homogeneous objectives over unit
// balls of l_u^n.  Two layers:
//
//   * multi-start projected (sub)gradient ascent on the u-sphere - fast,
//     heuristic, supplies lower witnesses;
//   * branch-and-bound with Lipschitz cell bounds over the exact ball
//     geometry (box for u = inf, cross-polytope faces for u = 1, angle boxes
//     for u = 2) - supplies certified upper bounds.
//
// Everything here is deterministic given the caller's Rng.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "opideal/norms.hpp"
#include "opideal/rng.hpp"

namespace opideal::search {

struct AscentOptions {
    int restarts = 32;
    int iters = 500;
    double rel_tol = 1e-9;
    double init_step = 0.5;
};

struct Maximizer {
    Eigen::VectorXd arg;
    double value = -std::numeric_limits<double>::infinity();

    void consider(const Eigen::VectorXd& x, double v) {
        if (v > value) {
            value = v;
            arg = x;
        }
    }
};

/// Normalize to the u-sphere; falls back to e_1 for the zero vector.
inline Eigen::VectorXd to_sphere(const Eigen::VectorXd& x, Exponent u) {
    double n = vector_norm(x, u);
    if (n < 1e-300) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
        e[0] = 1.0;
        return e;
    }
    return x / n;
}

/// Multi-start projected ascent of f over { ||x||_u = 1 }.
template <class F, class G>
Maximizer ascend_sphere(int n, Exponent u, F&& f, G&& grad, Rng& rng,
                        const std::vector<Eigen::VectorXd>& seeds,
                        const AscentOptions& opt = {}) {
    Maximizer best;
    auto run = [&](Eigen::VectorXd x) {
        x = to_sphere(x, u);
        double fx = f(x);
        best.consider(x, fx);
        double step = opt.init_step;
        for (int it = 0; it < opt.iters; ++it) {
            Eigen::VectorXd g = grad(x);
            double gn = g.norm();
            if (gn < 1e-14) break;
            Eigen::VectorXd y = to_sphere(x + (step / gn) * g, u);
            double fy = f(y);
            if (fy > fx) {
                double rel = (fy - fx) / std::max(1e-300, std::abs(fy));
                x = y;
                fx = fy;
                best.consider(x, fx);
                step = std::min(step * 1.5, 4.0);
                if (rel < opt.rel_tol) break;
            } else {
                step *= 0.5;
                if (step < 1e-12) break;
            }
        }
    };
    for (const auto& s : seeds)
        if (s.size() == n) run(s);
    for (int r = 0; r < opt.restarts; ++r) run(rng.gaussian_vector(n));
    return best;
}

// --- sign-vector enumeration (vertices of the l_inf ball) -----------------

/// Visit all s in {-1,+1}^n with s[0] = +1 in Gray order.  flip(j) is called
/// when coordinate j changes sign, score() after each visit (and once for the
/// all-ones start).  Returns the best score with its sign vector.
template <class Flip, class Score>
std::pair<double, Eigen::VectorXd> gray_max(int n, Flip&& flip, Score&& score,
                                            Eigen::VectorXd& s) {
    double best = score();
    Eigen::VectorXd best_s = s;
    if (n > 1) {
        const std::uint64_t total = 1ULL << (n - 1);
        for (std::uint64_t i = 1; i < total; ++i) {
            int j = 1 + __builtin_ctzll(i);
            s[j] = -s[j];
            flip(j);
            double v = score();
            if (v > best) {
                best = v;
                best_s = s;
            }
        }
    }
    return {best, best_s};
}

// --- certified branch-and-bound --------------------------------------------

struct CertifiedMax {
    Eigen::VectorXd arg;          // best point found (on the ball)
    double found = 0.0;           // f(arg)
    double upper = std::numeric_limits<double>::infinity();
    bool tight = false;           // upper - found <= requested tolerance
    bool valid_upper = false;     // upper is a certified bound for sup over the ball
    long nodes = 0;
};

namespace detail {

struct Cell {
    double bound;
    Eigen::VectorXd lo, hi;                  // box / angle-box cells
    Eigen::MatrixXd verts;                   // simplex cells (columns)
    int kind;                                // 0 box, 1 angles, 2 simplex
    bool operator<(const Cell& o) const { return bound < o.bound; }
};

inline Eigen::VectorXd from_angles(const Eigen::VectorXd& psi) {
    const int d = static_cast<int>(psi.size()) + 1;
    Eigen::VectorXd x(d);
    double s = 1.0;
    for (int i = 0; i < d - 1; ++i) {
        x[i] = s * std::cos(psi[i]);
        s *= std::sin(psi[i]);
    }
    x[d - 1] = s;
    return x;
}

template <class F>
CertifiedMax bb_run(std::vector<Cell> roots, F&& f, double grad_bound, double abs_eps,
                    long node_budget, const Maximizer& warm, int kind) {
    CertifiedMax out;
    out.valid_upper = true;
    if (warm.value > -1e300 && warm.arg.size() > 0) {
        out.arg = warm.arg;
        out.found = warm.value;
    } else {
        out.found = -std::numeric_limits<double>::infinity();
    }

    auto center_of = [&](const Cell& c) -> Eigen::VectorXd {
        if (c.kind == 0) return 0.5 * (c.lo + c.hi);
        if (c.kind == 1) return from_angles(0.5 * (c.lo + c.hi));
        return c.verts.rowwise().mean();
    };
    auto radius_of = [&](const Cell& c) -> double {
        if (c.kind != 2) return 0.5 * (c.hi - c.lo).norm();
        Eigen::VectorXd ctr = c.verts.rowwise().mean();
        double r = 0.0;
        for (int j = 0; j < c.verts.cols(); ++j)
            r = std::max(r, (c.verts.col(j) - ctr).norm());
        return r;
    };

    std::priority_queue<Cell> queue;
    for (auto& c : roots) {
        c.kind = kind;
        Eigen::VectorXd ctr = center_of(c);
        double fc = f(ctr);
        if (fc > out.found) {
            out.found = fc;
            out.arg = ctr;
        }
        c.bound = fc + grad_bound * radius_of(c);
        queue.push(std::move(c));
    }

    while (!queue.empty()) {
        if (queue.top().bound <= out.found + abs_eps) {
            out.upper = out.found + abs_eps;
            out.tight = true;
            return out;
        }
        if (out.nodes >= node_budget) break;
        Cell c = queue.top();
        queue.pop();
        ++out.nodes;

        Cell a = c, b = c;
        if (c.kind != 2) {
            int j = 0;
            (c.hi - c.lo).maxCoeff(&j);
            double mid = 0.5 * (c.lo[j] + c.hi[j]);
            a.hi[j] = mid;
            b.lo[j] = mid;
        } else {
            // longest-edge bisection
            int bi = 0, bj = 1;
            double blen = -1.0;
            for (int i = 0; i < c.verts.cols(); ++i)
                for (int j = i + 1; j < c.verts.cols(); ++j) {
                    double len = (c.verts.col(i) - c.verts.col(j)).norm();
                    if (len > blen) {
                        blen = len;
                        bi = i;
                        bj = j;
                    }
                }
            Eigen::VectorXd mid = 0.5 * (c.verts.col(bi) + c.verts.col(bj));
            a.verts.col(bj) = mid;
            b.verts.col(bi) = mid;
        }
        for (Cell* ch : {&a, &b}) {
            Eigen::VectorXd ctr = center_of(*ch);
            double fc = f(ctr);
            if (fc > out.found) {
                out.found = fc;
                out.arg = ctr;
            }
            ch->bound = fc + grad_bound * radius_of(*ch);
            if (ch->bound > out.found + abs_eps) queue.push(*ch);
        }
    }
    double top = queue.empty() ? -std::numeric_limits<double>::infinity() : queue.top().bound;
    out.upper = std::max(out.found + abs_eps, top);
    out.tight = out.upper <= out.found + abs_eps * 1.0000001;
    return out;
}

}  // namespace detail

/// Certified maximum of an even function f over the unit ball of l_u^n.
/// grad_bound must bound ||grad f||_2 on the circumscribed Euclidean ball
/// of the u-ball.  For u outside {1, 2, inf} no certificate is produced
/// (valid_upper = false); callers fall back to ball-containment scaling.
template <class F>
CertifiedMax max_on_ball_certified(int n, Exponent u, F&& f, double grad_bound,
                                   double abs_eps, long node_budget,
                                   const Maximizer& warm = {}) {
    using detail::Cell;
    std::vector<Cell> roots;
    int kind;
    if (u.is_inf()) {
        kind = 0;
        Cell c;
        c.lo = -Eigen::VectorXd::Ones(n);
        c.hi = Eigen::VectorXd::Ones(n);
        c.lo[0] = 0.0;  // f even
        roots.push_back(std::move(c));
    } else if (u.is_two()) {
        if (n == 1) {
            CertifiedMax out;
            Eigen::VectorXd e(1);
            e[0] = 1.0;
            out.arg = e;
            out.found = f(e);
            out.upper = out.found;
            out.tight = out.valid_upper = true;
            return out;
        }
        kind = 1;
        Cell c;
        c.lo = Eigen::VectorXd::Zero(n - 1);
        c.hi = Eigen::VectorXd::Constant(n - 1, 3.14159265358979323846);
        roots.push_back(std::move(c));
    } else if (u.is_one()) {
        kind = 2;
        // Faces of the cross-polytope with first sign fixed (f even).
        const std::uint64_t faces = 1ULL << (n - 1);
        for (std::uint64_t m = 0; m < faces; ++m) {
            Cell c;
            c.verts.setZero(n, n);
            c.verts(0, 0) = 1.0;
            for (int j = 1; j < n; ++j)
                c.verts(j, j) = (m >> (j - 1)) & 1 ? -1.0 : 1.0;
            roots.push_back(std::move(c));
        }
    } else {
        CertifiedMax out;
        if (warm.arg.size() == n) {
            out.arg = warm.arg;
            out.found = warm.value;
        }
        out.valid_upper = false;
        return out;
    }
    return detail::bb_run(std::move(roots), f, grad_bound, abs_eps, node_budget, warm, kind);
}

}  // namespace opideal::search
