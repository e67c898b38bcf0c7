#pragma once
// Norm exponents u in [1, inf].  All arithmetic runs through the reciprocal
// 1/u in [0, 1]; infinity is the reciprocal-zero case, never a float sentinel.
// Storage is offset from 1/2 so that dualization (1/u -> 1 - 1/u) is an exact
// sign flip and the involution u'' == u holds bitwise.

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace opideal {

class Exponent {
public:
    Exponent() = default;  // l_2

    /// Exponent with the given value u >= 1 (u = inf accepted).
    static Exponent of(double u) {
        if (std::isnan(u) || u < 1.0)
            throw std::invalid_argument("exponent must satisfy u >= 1");
        if (std::isinf(u)) return inf();
        return from_reciprocal(1.0 / u);
    }

    static Exponent inf() { return from_reciprocal(0.0); }
    static Exponent one() { return from_reciprocal(1.0); }
    static Exponent two() { return from_reciprocal(0.5); }

    static Exponent from_reciprocal(double r) {
        if (std::isnan(r) || r < 0.0 || r > 1.0)
            throw std::invalid_argument("exponent reciprocal must lie in [0, 1]");
        Exponent e;
        e.off_ = r - 0.5;
        return e;
    }

    double reciprocal() const { return off_ + 0.5; }

    /// The value u itself; +inf when the reciprocal is zero.
    double value() const {
        double r = reciprocal();
        return r == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / r;
    }

    bool is_inf() const { return off_ == -0.5; }
    bool is_one() const { return off_ == 0.5; }
    bool is_two() const { return off_ == 0.0; }
    bool is_finite() const { return !is_inf(); }

    /// Conjugate exponent, 1/u + 1/u' = 1.  Exact involution.
    Exponent dual() const {
        Exponent e;
        e.off_ = -off_;
        return e;
    }

    bool near(double u, double tol = 1e-12) const {
        double r = std::isinf(u) ? 0.0 : 1.0 / u;
        return std::abs(reciprocal() - r) <= tol;
    }

    friend bool operator==(Exponent a, Exponent b) { return a.off_ == b.off_; }
    friend auto operator<=>(Exponent a, Exponent b) { return a.off_ <=> b.off_; }

private:
    double off_ = 0.0;  // 1/u - 1/2
};

inline Exponent dual_exponent(Exponent u) { return u.dual(); }

inline std::string to_string(Exponent u) {
    if (u.is_inf()) return "inf";
    double v = u.value();
    if (v == static_cast<long>(v)) return std::to_string(static_cast<long>(v));
    std::string s = std::to_string(v);
    return s;
}

}  // namespace opideal
