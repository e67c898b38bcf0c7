#pragma once
// Dense two-phase tableau simplex for the small linear programs that appear
// in Pietsch domination and hull-membership problems:
//
//   minimize c'x   subject to  A x {>=,=,<=} b,  x >= 0.
//
// Row duals are recovered from the final basis.  Sizes stay in the low
// hundreds, so a full tableau with Dantzig pricing (Bland fallback) is enough.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace opideal::lp {

enum class Sense { ge, eq, le };
enum class Status {
    optimal,
    infeasible,
    unbounded,
    iteration_limit,
    stalled  // primal feasible, optimality not proven (degenerate stall)
};

struct Solution {
    Status status = Status::iteration_limit;
    Eigen::VectorXd x;
    double objective = 0.0;
    Eigen::VectorXd duals;  // one per row, sign convention of the original row
};

namespace detail {

struct Tableau {
    Eigen::MatrixXd t;          // m x (ncols + 1), last column is rhs
    Eigen::VectorXd cost;       // ncols, current phase costs
    Eigen::VectorXd red;        // reduced-cost row (ncols + 1 with objective)
    std::vector<int> basis;     // column index of the basic variable per row

    int rows() const { return static_cast<int>(t.rows()); }
    int cols() const { return static_cast<int>(t.cols()) - 1; }

    void price_from_scratch() {
        red.setZero(cols() + 1);
        for (int j = 0; j < cols(); ++j) red[j] = cost[j];
        for (int i = 0; i < rows(); ++i) {
            double cb = cost[basis[i]];
            if (cb != 0.0) red -= cb * t.row(i).transpose();
        }
    }

    void pivot(int r, int j) {
        t.row(r) /= t(r, j);
        for (int i = 0; i < rows(); ++i) {
            if (i == r) continue;
            double f = t(i, j);
            if (f != 0.0) t.row(i) -= f * t.row(r);
        }
        double f = red[j];
        if (f != 0.0) red -= f * t.row(r).transpose();
        basis[r] = j;
    }
};

inline Status run_simplex(Tableau& tb, long max_iter, double tol, int max_enter_col) {
    long it = 0;
    bool bland = false;
    long stall = 0;
    double last_obj = std::numeric_limits<double>::infinity();
    const int ncols = std::min(max_enter_col, tb.cols());
    while (true) {
        if (++it > max_iter) return Status::iteration_limit;
        // Degenerate stalling: switch to Bland's rule early, not at the cap.
        double obj = -tb.red[tb.cols()];
        if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
            last_obj = obj;
            stall = 0;
            bland = false;
        } else if (++stall > 40 + tb.rows()) {
            bland = true;
        }
        int enter = -1;
        if (bland) {
            for (int j = 0; j < ncols; ++j)
                if (tb.red[j] < -tol) { enter = j; break; }
        } else {
            double best = -tol;
            for (int j = 0; j < ncols; ++j)
                if (tb.red[j] < best) { best = tb.red[j]; enter = j; }
        }
        if (enter < 0) return Status::optimal;
        // Two-pass ratio test: find the minimum ratio, then take the largest
        // pivot element among the near-ties.  Tiny pivots blow the tableau up
        // numerically; under Bland the smallest basis index wins instead.
        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < tb.rows(); ++i) {
            double a = tb.t(i, enter);
            if (a > tol) {
                double ratio = tb.t(i, tb.cols()) / a;
                if (leave < 0 || ratio < best_ratio) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return Status::unbounded;
        double window = best_ratio + 1e-9 * (1.0 + std::abs(best_ratio));
        double best_piv = tb.t(leave, enter);
        for (int i = 0; i < tb.rows(); ++i) {
            double a = tb.t(i, enter);
            if (a > tol && tb.t(i, tb.cols()) / a <= window) {
                if (bland ? tb.basis[i] < tb.basis[leave] : a > best_piv) {
                    leave = i;
                    best_piv = a;
                }
            }
        }
        tb.pivot(leave, enter);
        if ((it & 63) == 0) tb.price_from_scratch();
    }
}

}  // namespace detail

inline Solution solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                      const std::vector<Sense>& sense, const Eigen::VectorXd& c,
                      double tol = 1e-9) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());

    // Flip rows to nonnegative rhs.
    Eigen::MatrixXd Aw = A;
    Eigen::VectorXd bw = b;
    std::vector<Sense> sw = sense;
    std::vector<double> row_sign(m, 1.0);
    for (int i = 0; i < m; ++i) {
        if (bw[i] < 0.0) {
            Aw.row(i) *= -1.0;
            bw[i] *= -1.0;
            row_sign[i] = -1.0;
            if (sw[i] == Sense::ge) sw[i] = Sense::le;
            else if (sw[i] == Sense::le) sw[i] = Sense::ge;
        }
    }

    // Column layout: [ x (n) | slack/surplus (m used as needed) | artificials ].
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    int ncols = n;
    for (int i = 0; i < m; ++i)
        if (sw[i] != Sense::eq) slack_col[i] = ncols++;
    int first_art = ncols;
    for (int i = 0; i < m; ++i) {
        // le rows with nonnegative rhs start basic on their slack; others need
        // an artificial.
        if (sw[i] != Sense::le) art_col[i] = ncols++;
    }

    detail::Tableau tb;
    tb.t.setZero(m, ncols + 1);
    tb.basis.assign(m, -1);
    for (int i = 0; i < m; ++i) {
        tb.t.block(i, 0, 1, n) = Aw.row(i);
        tb.t(i, ncols) = bw[i];
        if (slack_col[i] >= 0) tb.t(i, slack_col[i]) = (sw[i] == Sense::le) ? 1.0 : -1.0;
        if (art_col[i] >= 0) {
            tb.t(i, art_col[i]) = 1.0;
            tb.basis[i] = art_col[i];
        } else {
            tb.basis[i] = slack_col[i];
        }
    }

    const long max_iter = 24L * (m + ncols) + 2000;

    // Phase 1.
    bool need_phase1 = first_art < ncols;
    if (need_phase1) {
        tb.cost.setZero(ncols);
        for (int i = 0; i < m; ++i)
            if (art_col[i] >= 0) tb.cost[art_col[i]] = 1.0;
        tb.price_from_scratch();
        Status s = detail::run_simplex(tb, max_iter, tol, ncols);
        double p1 = -tb.red[tb.cols()];
        if (s == Status::iteration_limit) {
            Solution out;
            out.status = s;
            return out;
        }
        if (p1 > 1e-7 * (1.0 + bw.cwiseAbs().maxCoeff())) {
            Solution out;
            out.status = Status::infeasible;
            return out;
        }
        // Drive leftover artificials out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (tb.basis[i] >= first_art) {
                int piv = -1;
                for (int j = 0; j < first_art; ++j)
                    if (std::abs(tb.t(i, j)) > 1e-8) { piv = j; break; }
                if (piv >= 0) tb.pivot(i, piv);
            }
        }
    }

    // Phase 2: real costs; artificial columns are barred from entering (a
    // big-M cost would flood the reduced-cost row with cancellation noise).
    tb.cost.setZero(ncols);
    for (int j = 0; j < n; ++j) tb.cost[j] = c[j];
    tb.price_from_scratch();
    Status s2 = detail::run_simplex(tb, max_iter, tol, first_art);

    Solution out;
    out.status = s2;
    // A phase-2 stall still carries a primal-feasible basis: the weights are
    // a valid (if slightly suboptimal) certificate, and the basis prices are
    // usable witness seeds.  Only a genuine failure returns empty-handed.
    if (s2 == Status::iteration_limit) out.status = Status::stalled;
    if (out.status != Status::optimal && out.status != Status::stalled) return out;

    out.x.setZero(n);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < n) out.x[tb.basis[i]] = tb.t(i, ncols);
    out.objective = c.dot(out.x);

    // Duals: solve B' y = c_B with B the basis columns of the working matrix.
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) {
        int j = tb.basis[i];
        Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
        if (j < n) {
            col = Aw.col(j);
            cb[i] = c[j];
        } else if (j < first_art) {
            int row = -1;
            for (int r = 0; r < m; ++r)
                if (slack_col[r] == j) { row = r; break; }
            col[row] = (sw[row] == Sense::le) ? 1.0 : -1.0;
            cb[i] = 0.0;
        } else {
            int row = -1;
            for (int r = 0; r < m; ++r)
                if (art_col[r] == j) { row = r; break; }
            col[row] = 1.0;
            cb[i] = 0.0;
        }
        B.col(i) = col;
    }
    Eigen::VectorXd y = B.transpose().fullPivLu().solve(cb);
    out.duals.resize(m);
    for (int i = 0; i < m; ++i) out.duals[i] = row_sign[i] * y[i];
    return out;
}

}  // namespace opideal::lp
