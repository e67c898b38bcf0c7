#pragma once
// Coincidence inequalities between kappa norms with explicit constants,
// checked on randomized instances over exact small models l_u^n.
//
// The constant table carries provenance per entry and is configuration, not
// silent defaults: the Grothendieck bound, Khintchine upper constants B_r,
// and cotype constants (exact where the space is Euclidean, the Khintchine
// lower-constant route on l_s with s <= 2, a tagged numerical estimate
// elsewhere).  Families whose statement contains an unspecified universal
// constant c never pass or fail; they report the measured minimal c instead.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opideal/kompact.hpp"

namespace opideal::ineq {

using kompact::EngineConfig;

struct ConstantEntry {
    double value = 1.0;
    std::string provenance;
    bool estimate = false;
};

/// Numerical lower estimate of the cotype-q constant of a space by ascent
/// over small Rademacher families (full sign enumeration).
inline double estimate_cotype_constant(const SpaceSpec& sp, double q, int family_size,
                                       Rng rng) {
    const int n = sp.dim;
    const int k = std::min(family_size, 10);
    auto ratio = [&](const Eigen::MatrixXd& X) {
        double num = 0.0;
        for (int i = 0; i < X.cols(); ++i) num += std::pow(vector_norm(X.col(i), sp.u), q);
        num = std::pow(num, 1.0 / q);
        double den = 0.0;
        const std::uint64_t total = 1ULL << (X.cols() - 1);
        for (std::uint64_t msk = 0; msk < total; ++msk) {
            Eigen::VectorXd s = X.col(0);
            for (int i = 1; i < X.cols(); ++i)
                s += ((msk >> (i - 1)) & 1 ? -1.0 : 1.0) * X.col(i);
            double nv = vector_norm(s, sp.u);
            den += nv * nv;
        }
        den = std::sqrt(den / static_cast<double>(total));
        return den > 0 ? num / den : 0.0;
    };
    std::vector<Eigen::MatrixXd> starts;
    {
        // Sign-vector families are the classical extremizers.
        int cols = std::min<int>(k, 1 << std::min(n - 1, 6));
        Eigen::MatrixXd Xs(n, cols);
        for (int c = 0; c < cols; ++c)
            for (int row = 0; row < n; ++row)
                Xs(row, c) = (row > 0 && ((c >> (row - 1)) & 1)) ? -1.0 : 1.0;
        starts.push_back(Xs);
        Eigen::MatrixXd Xe(n, std::min(k, n));
        Xe = Eigen::MatrixXd::Identity(n, n).leftCols(std::min(k, n));
        starts.push_back(Xe);
    }
    for (int r = 0; r < 16; ++r) {
        Eigen::MatrixXd X(n, k);
        for (int i = 0; i < k; ++i) X.col(i) = rng.gaussian_vector(n);
        starts.push_back(X);
    }

    double best = 1.0;
    for (Eigen::MatrixXd X : starts) {
        double cur = ratio(X);
        double step = 0.4;
        for (int it = 0; it < 120 && step > 1e-6; ++it) {
            Eigen::MatrixXd Y = X;
            for (int i = 0; i < X.cols(); ++i) Y.col(i) += step * rng.gaussian_vector(n);
            double cy = ratio(Y);
            if (cy > cur) {
                X = Y;
                cur = cy;
                step *= 1.2;
            } else {
                step *= 0.7;
            }
        }
        best = std::max(best, cur);
    }
    return best;
}

class ConstantTable {
public:
    ConstantEntry grothendieck() const { return kg_; }
    void set_grothendieck(double v, std::string prov) { kg_ = {v, std::move(prov), false}; }

    /// Khintchine upper constant: (E|sum eps a|^r)^{1/r} <= B_r ||a||_2.
    ConstantEntry khintchine_upper(double r) const {
        if (r <= 2.0) return {1.0, "power-mean bound, r <= 2", false};
        double v = std::sqrt(2.0) *
                   std::pow(std::tgamma((r + 1.0) / 2.0) / std::sqrt(M_PI), 1.0 / r);
        return {v, "Gaussian-moment Khintchine constant", false};
    }

    /// Khintchine lower constant A_s on (0, 2] (the smaller of the two
    /// optimal-range expressions is always valid).
    static double khintchine_lower(double s) {
        double a1 = std::pow(2.0, 0.5 - 1.0 / s);
        double a2 = std::sqrt(2.0) *
                    std::pow(std::tgamma((s + 1.0) / 2.0) / std::sqrt(M_PI), 1.0 / s);
        return std::min(a1, a2);
    }

    /// Cotype-q constant of l_s^n (upper bound where a closed form applies,
    /// a tagged numerical estimate otherwise).
    ConstantEntry cotype(const SpaceSpec& sp, double q, std::uint64_t seed = 7) const {
        double s = sp.u.value();
        if (q == 2.0) {
            if (sp.u.is_two()) return {1.0, "Euclidean space", false};
            if (s <= 2.0)
                return {1.0 / khintchine_lower(s),
                        "pointwise Khintchine route on l_s, s <= 2", false};
        }
        if (!sp.u.is_inf() && std::abs(s - q) < 1e-12 && q >= 2.0)
            return {1.0, "l_q has cotype q with constant one (q-average route)", false};
        auto key = std::make_pair(sp.dim, std::make_pair(sp.u.reciprocal(), q));
        auto it = estimates_.find(key);
        if (it == estimates_.end()) {
            double v = estimate_cotype_constant(sp, q, 2 * sp.dim, Rng(seed));
            it = estimates_.emplace(key, v).first;
        }
        return {it->second, "numerical ascent estimate (lower estimate)", true};
    }

private:
    ConstantEntry kg_ = {1.78222, "Krivine-type upper bound for the Grothendieck constant",
                         false};
    mutable std::map<std::pair<int, std::pair<double, double>>, double> estimates_;
};

struct UsedConstant {
    std::string name;
    ConstantEntry entry;
};

struct InequalityReport {
    std::string name;
    int instances = 0;
    int excluded = 0;          // unconverged estimates skipped
    double worst_margin = 0.0;  // min over instances of rhs - lhs
    bool pass = false;
    bool has_universal_c = false;
    std::optional<double> measured_c;  // minimal c making all instances pass
    std::vector<UsedConstant> constants;
};

/// kappa_1(T) <= K_G ||T|| for T : l_2^n -> l_inf^m.
inline InequalityReport check_grothendieck(std::pair<int, int> dims, int samples,
                                           std::uint64_t seed, const EngineConfig& cfg = {},
                                           const ConstantTable& table = {}) {
    InequalityReport rep;
    rep.name = "grothendieck";
    double kg = table.grothendieck().value;
    rep.constants.push_back({"K_G", table.grothendieck()});
    Rng rng(seed);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        auto T = random_operator(rng, space(dims.first, 2.0),
                                 SpaceSpec(dims.second, Exponent::inf()));
        EngineConfig icfg = cfg;
        icfg.search.seed = rng.derive(i).next_u64();
        auto k1 = kompact::kappa_norm(T, Exponent::one(), icfg);
        if (!k1.est.converged()) {
            ++rep.excluded;
            continue;
        }
        double rhs = kg * operator_norm(T, icfg.search).upper;
        rep.worst_margin = std::min(rep.worst_margin, rhs - k1.est.lower);
        ++rep.instances;
    }
    rep.pass = rep.instances > 0 && rep.worst_margin >= -1e-6;
    return rep;
}

/// kappa_r(T) <= A kappa_s(T) with a caller-supplied constant.  The
/// coincidence statements use r < s with A compensating the reversal of the
/// natural monotonicity; with A = 1 the check holds exactly when r >= s.
inline InequalityReport check_mega(const OperatorMatrix& T, double r, double s, double A,
                                   const EngineConfig& cfg = {}) {
    InequalityReport rep;
    rep.name = "mega";
    rep.constants.push_back({"A", {A, "caller supplied", false}});
    auto kr = kompact::kappa_norm(T, Exponent::of(r), cfg);
    auto ks = kompact::kappa_norm(T, Exponent::of(s), cfg);
    rep.instances = 1;
    rep.worst_margin = A * ks.est.upper - kr.est.lower;
    rep.pass = rep.worst_margin >= -1e-6;
    return rep;
}

inline InequalityReport check_mega_sampled(std::pair<int, int> dims, int samples,
                                           std::uint64_t seed, double r, double s, double A,
                                           const EngineConfig& cfg = {}) {
    InequalityReport rep;
    rep.name = "mega";
    rep.constants.push_back({"A", {A, "caller supplied", false}});
    Rng rng(seed);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    double us[] = {1.0, 2.0};
    for (int i = 0; i < samples; ++i) {
        Exponent u = us[rng.index(2)] == 1.0 ? Exponent::one() : Exponent::two();
        Exponent v = rng.index(2) ? Exponent::two() : Exponent::inf();
        auto T = random_operator(rng, SpaceSpec(dims.first, u), SpaceSpec(dims.second, v));
        EngineConfig icfg = cfg;
        icfg.search.seed = rng.derive(100 + i).next_u64();
        auto one = check_mega(T, r, s, A, icfg);
        rep.worst_margin = std::min(rep.worst_margin, one.worst_margin);
        ++rep.instances;
    }
    rep.pass = rep.instances > 0 && rep.worst_margin >= -1e-6;
    return rep;
}

/// The corollary families on exact small models.  Families with an
/// unspecified universal constant report the measured minimal c.
inline InequalityReport check_cotype_family(const std::string& family,
                                            std::pair<int, int> dims, int samples,
                                            std::uint64_t seed,
                                            const EngineConfig& cfg = {},
                                            const ConstantTable& table = {}) {
    InequalityReport rep;
    rep.name = family;
    Rng rng(seed);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    double c_needed = 0.0;

    auto run_instances = [&](auto&& one_instance, bool relaxed = false) {
        for (int i = 0; i < samples; ++i) {
            EngineConfig icfg = cfg;
            icfg.search.seed = rng.derive(1000 + i).next_u64();
            if (relaxed) {
                // Measured-c families report a max ratio; loose gaps only
                // understate the measured constant, so skip the escalation.
                icfg.gap_rel = std::max(icfg.gap_rel, 0.30);
            }
            one_instance(i, icfg);
        }
    };

    if (family == "l2l1") {
        return check_grothendieck(dims, samples, seed, cfg, table);
    } else if (family == "linfty-a") {
        // Domain with cotype-2 dual, codomain an l_1 model, r >= 2:
        // kappa_r <= [c C_2(E')^2 (1 + log C_2(E'))]^{1/r} ||T||.
        rep.has_universal_c = true;
        run_instances([&](int i, const EngineConfig& icfg) {
            double u = (i % 2 == 0) ? 2.0 : 4.0;
            double r = (i % 4 < 2) ? 2.0 : 4.0;
            auto E = space(dims.first, u);
            auto C2 = table.cotype(E.dual(), 2.0);
            if (i == 0) {
                rep.constants.push_back({"C_2(E')", C2});
            }
            auto T = random_operator(rng, E, space(dims.second, 1.0));
            auto kr = kompact::kappa_norm(T, Exponent::of(r), icfg);
            double opn = operator_norm(T, icfg.search).upper;
            if (opn <= 1e-12) {
                ++rep.excluded;
                return;
            }
            double cc = std::pow(kr.est.lower / opn, r) /
                        (C2.value * C2.value *
                         (1.0 + std::log(std::max(C2.value, 1.0))));
            c_needed = std::max(c_needed, cc);
            ++rep.instances;
        }, /*relaxed=*/true);
    } else if (family == "linfty-b") {
        // Dual cotype q > 2: kappa_r <= c q^{-1} (1/q - 1/r)^{-1/r'} C_q(E') ||T||.
        rep.has_universal_c = true;
        const double u = 4.0 / 3.0, q = 4.0, r = 6.0;
        run_instances([&](int i, const EngineConfig& icfg) {
            auto E = space(dims.first, u);
            auto Cq = table.cotype(E.dual(), q);
            if (i == 0) rep.constants.push_back({"C_q(E')", Cq});
            auto T = random_operator(rng, E, space(dims.second, 1.0));
            auto kr = kompact::kappa_norm(T, Exponent::of(r), icfg);
            double opn = operator_norm(T, icfg.search).upper;
            if (opn <= 1e-12) {
                ++rep.excluded;
                return;
            }
            double rprime = r / (r - 1.0);
            double factor = (1.0 / q) * std::pow(1.0 / q - 1.0 / r, -1.0 / rprime) *
                            Cq.value;
            c_needed = std::max(c_needed, kr.est.lower / (factor * opn));
            ++rep.instances;
        }, /*relaxed=*/true);
    } else if (family == "nohipo-a") {
        // kappa_2 <= B_r C_2(E') kappa_r, r >= 2: explicit constants, pass/fail.
        run_instances([&](int i, const EngineConfig& icfg) {
            double u = (i % 2 == 0) ? 2.0 : 4.0;
            double rs[] = {2.0, 3.0, 4.0};
            double r = rs[i % 3];
            auto E = space(dims.first, u);
            auto C2 = table.cotype(E.dual(), 2.0);
            auto Br = table.khintchine_upper(r);
            if (i == 0) {
                rep.constants.push_back({"C_2(E')", C2});
                rep.constants.push_back({"B_r", Br});
            }
            double vv[] = {1.0, 2.0};
            auto T = random_operator(rng, E, space(dims.second, vv[i % 2]));
            auto k2 = kompact::kappa_norm(T, Exponent::two(), icfg);
            auto kr = kompact::kappa_norm(T, Exponent::of(r), icfg);
            if (!k2.est.converged() || !kr.est.converged()) {
                ++rep.excluded;
                return;
            }
            double margin =
                Br.value * C2.value * kr.est.upper - k2.est.lower;
            rep.worst_margin = std::min(rep.worst_margin, margin);
            ++rep.instances;
        });
        rep.pass = rep.instances > 0 && rep.worst_margin >= -1e-6;
        return rep;
    } else if (family == "nohipo-b") {
        // kappa_1 <= c C_2(F') (1 + log C_2(F'))^{1/2} kappa_2.
        rep.has_universal_c = true;
        run_instances([&](int i, const EngineConfig& icfg) {
            double v = (i % 3 == 0) ? 1.0 : 2.0;  // F' = l_inf (estimate) or l_2
            auto F = space(dims.second, v);
            auto C2 = table.cotype(F.dual(), 2.0);
            if (i < 2) rep.constants.push_back({"C_2(F')", C2});
            auto T = random_operator(rng, space(dims.first, 2.0), F);
            auto k1 = kompact::kappa_norm(T, Exponent::one(), icfg);
            auto k2 = kompact::kappa_norm(T, Exponent::two(), icfg);
            if (k2.est.upper <= 1e-12) {
                ++rep.excluded;
                return;
            }
            double denom = C2.value *
                           std::sqrt(1.0 + std::log(std::max(C2.value, 1.0))) *
                           k2.est.upper;
            c_needed = std::max(c_needed, k1.est.lower / denom);
            ++rep.instances;
        }, /*relaxed=*/true);
    } else if (family == "nohipo-c") {
        // Dual cotype q > 2 on the codomain side:
        // kappa_1 <= c q^{-1} (1/q - 1/r')^{-1/r} C_q(F') kappa_r, r < q'.
        rep.has_universal_c = true;
        const double v = 4.0 / 3.0, q = 4.0;
        run_instances([&](int i, const EngineConfig& icfg) {
            double r = (i % 2 == 0) ? 1.0 : 1.2;  // below q' = 4/3
            auto F = space(dims.second, v);
            auto Cq = table.cotype(F.dual(), q);
            if (i == 0) rep.constants.push_back({"C_q(F')", Cq});
            auto T = random_operator(rng, space(dims.first, 2.0), F);
            auto k1 = kompact::kappa_norm(T, Exponent::one(), icfg);
            auto kr = kompact::kappa_norm(T, Exponent::of(r), icfg);
            if (kr.est.upper <= 1e-12) {
                ++rep.excluded;
                return;
            }
            double rprime = r > 1.0 ? r / (r - 1.0) : std::numeric_limits<double>::infinity();
            double gap = 1.0 / q - (r > 1.0 ? 1.0 - 1.0 / r : 0.0);
            double factor = (1.0 / q) * std::pow(gap, -1.0 / r) * Cq.value;
            (void)rprime;
            c_needed = std::max(c_needed, k1.est.lower / (factor * kr.est.upper));
            ++rep.instances;
        }, /*relaxed=*/true);
    } else {
        throw std::invalid_argument("unknown inequality family: " + family);
    }

    rep.measured_c = c_needed;
    rep.pass = rep.instances > 0;  // reported, never asserted
    rep.worst_margin = 0.0;
    return rep;
}

}  // namespace opideal::ineq
