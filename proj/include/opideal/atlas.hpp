#pragma once
// Limit orders of the p-compact ideal between l_u and l_v: the piecewise
// closed form in the reciprocals (1/r, 1/u, 1/v), its transpose symmetry with
// the p-summing side, and desk-scale slope experiments fitting
// log kappa_r(id: l_u^n -> l_v^n) against log n.
//
// Region predicates are inclusive, every matching branch is evaluated, and
// agreement across branches is asserted to 1e-12; the corners are the
// consistency check, not a choice.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opideal/kompact.hpp"

namespace opideal::atlas {

struct LimitOrderQuery {
    double r = 2.0;  // ideal exponent, finite
    Exponent u;      // domain space exponent
    Exponent v;      // codomain space exponent

    LimitOrderQuery() = default;
    LimitOrderQuery(double rr, Exponent uu, Exponent vv) : r(rr), u(uu), v(vv) {
        if (!(rr >= 1.0) || std::isinf(rr))
            throw std::invalid_argument("limit order needs finite r >= 1");
    }
};

struct LimitOrderValue {
    double lambda = 0.0;
    std::string region;
    int branches_matched = 0;
};

/// lambda(K_r, u, v) by the reciprocal-affine piecewise table.
inline LimitOrderValue limit_order_formula(const LimitOrderQuery& q) {
    const double ir = 1.0 / q.r;
    const double iu = q.u.reciprocal();
    const double iv = q.v.reciprocal();
    const double half = 0.5;

    struct Branch {
        const char* tag;
        bool match;
        double value;
    };
    std::vector<Branch> branches;
    if (ir >= half) {  // 1 <= r <= 2
        branches = {
            {"a1", iv >= ir && iu >= 1 - ir, ir},
            {"a2", iv >= ir && iu <= 1 - ir, 1 - iu},
            {"a3", iv <= ir && iv >= half && iu >= 1 - iv, iv},
            {"a4", iv <= ir && iv >= half && iu <= 1 - iv, 1 - iu},
            {"a5", iv <= half && iu >= half, iv},
            {"a6", iv <= half && iu <= half, half - iu + iv},
        };
    } else {  // 2 < r < inf
        double rho = ir + (iv - ir) * (1 - ir - iu) / (half - ir);
        branches = {
            {"b1", iv >= ir && iu >= 1 - ir, ir},
            {"b2", iv >= half && iu <= 1 - ir, 1 - iu},
            {"b3", iv >= ir && iv <= half && iu >= half && iu <= 1 - ir, rho},
            {"b4", iv <= ir && iu >= half, iv},
            {"b5", iv <= half && iu <= half, half - iu + iv},
        };
    }

    LimitOrderValue out;
    for (const auto& b : branches) {
        if (!b.match) continue;
        if (out.branches_matched == 0) {
            out.lambda = b.value;
            out.region = b.tag;
        } else if (std::abs(b.value - out.lambda) > 1e-12) {
            throw std::logic_error("limit-order branches disagree at a boundary: " +
                                   out.region + " vs " + b.tag);
        }
        ++out.branches_matched;
    }
    if (out.branches_matched == 0)
        throw std::logic_error("no limit-order region matches a valid query");
    return out;
}

/// lambda(Pi_r, u, v): the p-summing side, obtained through the transpose
/// symmetry lambda(K_r, u, v) = lambda(Pi_r, v', u').
inline double limit_order_summing(const LimitOrderQuery& q) {
    LimitOrderQuery swapped(q.r, q.v.dual(), q.u.dual());
    return limit_order_formula(swapped).lambda;
}

struct SlopeExperiment {
    LimitOrderQuery query;
    std::vector<int> dims;
    std::vector<NormEstimate> values;
    double fitted_slope = 0.0;
    double slope_uncertainty = 0.0;  // propagated interval half-widths
    std::optional<double> diag_exponent;
    double value_ratio = 1.0;  // max/min of the midpoints (boundedness proxy)
    bool partial = false;      // some estimate did not converge
};

/// kappa_r of id (or of the diagonal k^{-lambda}) on l_u^n -> l_v^n over the
/// given dimensions, with a log-log least-squares slope.
inline SlopeExperiment empirical_slope(const LimitOrderQuery& q, std::vector<int> dims,
                                       const kompact::EngineConfig& cfg = {},
                                       std::optional<double> diag_lambda = {}) {
    if (dims.size() < 2) throw std::invalid_argument("slope fit needs at least two dims");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1])
            throw std::invalid_argument("dims must be strictly increasing");

    SlopeExperiment out;
    out.query = q;
    out.dims = dims;
    out.diag_exponent = diag_lambda;

    Exponent r = Exponent::of(q.r);
    for (int n : dims) {
        OperatorMatrix op = [&] {
            if (diag_lambda) {
                Eigen::VectorXd d(n);
                for (int k = 0; k < n; ++k)
                    d[k] = std::pow(static_cast<double>(k + 1), -*diag_lambda);
                return diagonal_operator(d, q.u, q.v);
            }
            return identity_operator(n, q.u, q.v);
        }();
        auto est = kompact::kappa_norm(op, r, cfg).est;
        if (!est.converged()) out.partial = true;
        out.values.push_back(est);
    }

    const int k = static_cast<int>(dims.size());
    Eigen::VectorXd x(k), y(k), hw(k);
    for (int i = 0; i < k; ++i) {
        x[i] = std::log(static_cast<double>(dims[i]));
        double lo = std::max(out.values[i].lower, 1e-12);
        double hi = std::max(out.values[i].upper, lo);
        y[i] = 0.5 * (std::log(lo) + std::log(hi));
        hw[i] = 0.5 * (std::log(hi) - std::log(lo));
    }
    double xbar = x.mean();
    double sxx = (x.array() - xbar).square().sum();
    out.fitted_slope = ((x.array() - xbar) * (y.array() - y.mean())).sum() / sxx;
    double unc = 0.0;
    for (int i = 0; i < k; ++i) unc += std::abs((x[i] - xbar) / sxx) * hw[i];
    out.slope_uncertainty = unc;

    double mmax = 0.0, mmin = std::numeric_limits<double>::infinity();
    for (const auto& e : out.values) {
        mmax = std::max(mmax, e.midpoint());
        mmin = std::min(mmin, e.midpoint());
    }
    out.value_ratio = mmin > 0 ? mmax / mmin : std::numeric_limits<double>::infinity();
    return out;
}

struct SharpnessReport {
    double r = 1.0, r_tilde = 1.0;
    double lambda_r = 0.0, lambda_r_tilde = 0.0;
    bool separated = false;  // limit orders differ: strict inclusion predicted
    std::optional<SlopeExperiment> slope_r, slope_r_tilde;
};

/// Compare limit orders at r < r_tilde; different values predict a strict
/// inclusion between the ideals on (l_u, l_v).
inline SharpnessReport sharpness_probe(double r, double r_tilde, Exponent u, Exponent v,
                                       bool with_slopes = false,
                                       const kompact::EngineConfig& cfg = {},
                                       std::vector<int> dims = {2, 3, 4, 5}) {
    if (r > r_tilde) throw std::invalid_argument("sharpness probe needs r <= r_tilde");
    SharpnessReport rep;
    rep.r = r;
    rep.r_tilde = r_tilde;
    rep.lambda_r = limit_order_formula({r, u, v}).lambda;
    rep.lambda_r_tilde = limit_order_formula({r_tilde, u, v}).lambda;
    rep.separated = std::abs(rep.lambda_r - rep.lambda_r_tilde) > 1e-12;
    if (with_slopes) {
        rep.slope_r = empirical_slope({r, u, v}, dims, cfg);
        rep.slope_r_tilde = empirical_slope({r_tilde, u, v}, dims, cfg);
    }
    return rep;
}

}  // namespace opideal::atlas
