#pragma once
// Finite-dimensional sequence spaces l_u^n, their vectors, and finite vector
// sequences carrying a summability exponent p.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "opideal/exponent.hpp"

namespace opideal {

struct SpaceSpec {
    int dim = 0;
    Exponent u;

    SpaceSpec() = default;
    SpaceSpec(int d, Exponent e) : dim(d), u(e) {
        if (d < 1) throw std::invalid_argument("space dimension must be >= 1");
    }

    SpaceSpec dual() const { return SpaceSpec(dim, u.dual()); }

    friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
        return a.dim == b.dim && a.u == b.u;
    }
};

inline SpaceSpec space(int dim, double u) { return SpaceSpec(dim, Exponent::of(u)); }
inline SpaceSpec space(int dim, Exponent u) { return SpaceSpec(dim, u); }

struct Vector {
    Eigen::VectorXd coords;
    SpaceSpec space;

    Vector() = default;
    Vector(Eigen::VectorXd c, SpaceSpec s) : coords(std::move(c)), space(s) {
        if (coords.size() != space.dim)
            throw std::invalid_argument("vector length does not match its space");
    }
};

/// Finite sequence of vectors sharing one space, stored as matrix columns,
/// together with the sequence exponent p.
struct VectorSequence {
    Eigen::MatrixXd items;  // space.dim x count
    SpaceSpec space;
    Exponent p;

    VectorSequence() = default;
    VectorSequence(Eigen::MatrixXd m, SpaceSpec s, Exponent pexp)
        : items(std::move(m)), space(s), p(pexp) {
        if (items.rows() != space.dim)
            throw std::invalid_argument("sequence item dimension does not match the space");
        if (items.cols() < 1) throw std::invalid_argument("sequence must be nonempty");
    }

    static VectorSequence of(const std::vector<Vector>& vs, Exponent p) {
        if (vs.empty()) throw std::invalid_argument("sequence must be nonempty");
        Eigen::MatrixXd m(vs[0].space.dim, static_cast<int>(vs.size()));
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (!(vs[i].space == vs[0].space))
                throw std::invalid_argument("sequence items must share one space");
            m.col(static_cast<int>(i)) = vs[i].coords;
        }
        return VectorSequence(std::move(m), vs[0].space, p);
    }

    int count() const { return static_cast<int>(items.cols()); }
    Vector item(int i) const { return Vector(items.col(i), space); }
};

}  // namespace opideal
