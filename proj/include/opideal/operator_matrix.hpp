#pragma once
// Dense operators between l_u^n spaces.  The transpose swaps and dualizes
// the spaces, matching the adjoint of the operator.

#include <Eigen/Dense>
#include <stdexcept>

#include "opideal/norms.hpp"
#include "opideal/rng.hpp"

namespace opideal {

struct OperatorMatrix {
    SpaceSpec domain;
    SpaceSpec codomain;
    Eigen::MatrixXd entries;  // codomain.dim x domain.dim

    OperatorMatrix() = default;
    OperatorMatrix(SpaceSpec dom, SpaceSpec cod, Eigen::MatrixXd m)
        : domain(dom), codomain(cod), entries(std::move(m)) {
        if (entries.rows() != codomain.dim || entries.cols() != domain.dim)
            throw std::invalid_argument("operator entries do not match the spaces");
        if (!entries.allFinite())
            throw std::invalid_argument("operator entries must be finite");
    }

    Vector apply(const Vector& x) const {
        if (!(x.space == domain)) throw std::invalid_argument("vector not in the domain");
        return Vector(entries * x.coords, codomain);
    }

    bool is_zero(double tol = 0.0) const {
        return entries.cwiseAbs().maxCoeff() <= tol;
    }
};

inline OperatorMatrix transpose(const OperatorMatrix& T) {
    return OperatorMatrix(T.codomain.dual(), T.domain.dual(), T.entries.transpose());
}

inline OperatorMatrix compose(const OperatorMatrix& S, const OperatorMatrix& T) {
    if (!(T.codomain == S.domain))
        throw std::invalid_argument("composition spaces do not match");
    return OperatorMatrix(T.domain, S.codomain, S.entries * T.entries);
}

inline OperatorMatrix identity_operator(int n, Exponent u, Exponent v) {
    return OperatorMatrix(SpaceSpec(n, u), SpaceSpec(n, v), Eigen::MatrixXd::Identity(n, n));
}

inline OperatorMatrix diagonal_operator(const Eigen::VectorXd& d, Exponent u, Exponent v) {
    const int n = static_cast<int>(d.size());
    Eigen::MatrixXd m = d.asDiagonal();
    return OperatorMatrix(SpaceSpec(n, u), SpaceSpec(n, v), m);
}

/// Rank one operator x' (x) y: a functional on the domain tensor a codomain
/// vector.
inline OperatorMatrix rank_one(const Eigen::VectorXd& functional, SpaceSpec dom,
                               const Eigen::VectorXd& image, SpaceSpec cod) {
    return OperatorMatrix(dom, cod, image * functional.transpose());
}

inline OperatorMatrix random_operator(Rng& rng, SpaceSpec dom, SpaceSpec cod) {
    Eigen::MatrixXd m(cod.dim, dom.dim);
    for (int i = 0; i < cod.dim; ++i)
        for (int j = 0; j < dom.dim; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    return OperatorMatrix(dom, cod, m);
}

}  // namespace opideal
