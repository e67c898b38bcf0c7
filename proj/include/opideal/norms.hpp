#pragma once
// l_u vector norms, their (sub)gradients, norming vectors, strong sequence
// norms, and the small comparison facts used for certified bounds.

#include <Eigen/Dense>
#include <cmath>

#include "opideal/space.hpp"

namespace opideal {

inline double vector_norm(const Eigen::VectorXd& x, Exponent u) {
    if (x.size() == 0) return 0.0;
    if (u.is_inf()) return x.cwiseAbs().maxCoeff();
    if (u.is_one()) return x.cwiseAbs().sum();
    if (u.is_two()) return x.norm();
    double uu = u.value();
    double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, uu);
    return m * std::pow(s, 1.0 / uu);
}

inline double vector_norm(const Vector& x) { return vector_norm(x.coords, x.space.u); }

/// A (sub)gradient of y -> ||y||_v at y (any subgradient at kinks, zero at 0).
inline Eigen::VectorXd norm_gradient(const Eigen::VectorXd& y, Exponent v) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
    double n = vector_norm(y, v);
    if (n == 0.0) return g;
    if (v.is_inf()) {
        int j = 0;
        y.cwiseAbs().maxCoeff(&j);
        g[j] = y[j] >= 0 ? 1.0 : -1.0;
        return g;
    }
    if (v.is_one()) {
        for (int i = 0; i < y.size(); ++i) g[i] = y[i] > 0 ? 1.0 : (y[i] < 0 ? -1.0 : 0.0);
        return g;
    }
    double vv = v.value();
    for (int i = 0; i < y.size(); ++i) {
        double a = std::abs(y[i]);
        if (a == 0.0) continue;
        g[i] = (y[i] > 0 ? 1.0 : -1.0) * std::pow(a / n, vv - 1.0);
    }
    return g;
}

/// Vector x with ||x||_u = 1 and <f, x> = ||f||_{u'} (norming vector of the
/// functional f on l_u^n).
inline Eigen::VectorXd norming_vector(const Eigen::VectorXd& f, Exponent u) {
    // The norming vector is exactly the norm gradient of f in the dual norm.
    Eigen::VectorXd x = norm_gradient(f, u.dual());
    double n = vector_norm(x, u);
    if (n == 0.0) {
        x = Eigen::VectorXd::Zero(f.size());
        x[0] = 1.0;
        return x;
    }
    return x / n;
}

/// Strong norm of a sequence: (sum_k ||x_k||^p)^{1/p}, max over k when p = inf.
inline double strong_p_norm(const Eigen::MatrixXd& items, Exponent space_u, Exponent p) {
    int k = static_cast<int>(items.cols());
    if (p.is_inf()) {
        double m = 0.0;
        for (int i = 0; i < k; ++i) m = std::max(m, vector_norm(items.col(i), space_u));
        return m;
    }
    double pp = p.value();
    double m = 0.0;
    for (int i = 0; i < k; ++i) m = std::max(m, vector_norm(items.col(i), space_u));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += std::pow(vector_norm(items.col(i), space_u) / m, pp);
    return m * std::pow(s, 1.0 / pp);
}

inline double strong_p_norm(const VectorSequence& s) {
    return strong_p_norm(s.items, s.space.u, s.p);
}

/// n^{max(0, 1/q - 1/w)}: the factor with B_w subset factor * B_q in l^n.
inline double ball_containment_factor(int n, Exponent w, Exponent q) {
    double d = q.reciprocal() - w.reciprocal();
    if (d <= 0.0) return 1.0;
    return std::pow(static_cast<double>(n), d);
}

/// ||y||_p <= ||y||_a^{1-t} ||y||_b^{t} with 1/p = (1-t)/a + t/b, a <= p <= b.
inline double norm_interpolation_theta(Exponent p, Exponent a, Exponent b) {
    double ra = a.reciprocal(), rb = b.reciprocal(), rp = p.reciprocal();
    if (ra == rb) return 0.0;
    return (rp - ra) / (rb - ra);
}

}  // namespace opideal
