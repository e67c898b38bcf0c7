#pragma once
// End-to-end certificate audit: emit reports, then re-verify every claim
// from the serialized JSON alone - witness feasibility through the weak norm,
// domination and quasi-nuclear residuals through fresh violation searches,
// cover containment through the support-function check, and the ordering
// lower <= upper within the stated residuals.

#include <sstream>
#include <string>
#include <vector>

#include "opideal/config.hpp"
#include "opideal/serialize.hpp"

namespace opideal::selftest {

struct Line {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Outcome {
    std::vector<Line> lines;
    bool pass = true;

    void add(const std::string& name, bool ok, const std::string& detail) {
        lines.push_back({name, ok, detail});
        pass = pass && ok;
    }
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Re-verify a kappa report parsed back from its JSON text.
inline void audit_kappa_report(Outcome& out, const std::string& label,
                               const nlohmann::json& rep, const RunConfig& cfg) {
    OperatorMatrix T = io::operator_from_json(rep.at("operator"));
    Exponent p = io::exponent_from_json(rep.at("p"));
    double lower = rep.at("estimate").at("lower").get<double>();
    double upper = io::real_from_json(rep.at("estimate").at("upper"));

    SearchConfig scfg;
    scfg.seed = cfg.seed ^ 0xABCDEF;
    scfg.restarts = cfg.restarts;

    // Witness side.
    auto w = io::witness_from_json(rep.at("witness").at("lower"));
    auto wn = weak_p_norm(w.vectors, scfg);
    out.add(label + ": witness weak norm feasible", wn.est.upper <= 1.0 + 1e-6,
            "weak upper " + fmt(wn.est.upper));
    OperatorMatrix S = transpose(T);
    double value = 0.0;
    if (p.is_inf()) {
        for (int i = 0; i < w.vectors.count(); ++i)
            value = std::max(value, vector_norm(S.entries * w.vectors.items.col(i),
                                                S.codomain.u));
    } else {
        for (int i = 0; i < w.vectors.count(); ++i)
            value += std::pow(vector_norm(S.entries * w.vectors.items.col(i), S.codomain.u),
                              p.value());
        value = std::pow(value, 1.0 / p.value());
    }
    out.add(label + ": witness value reproduces the lower bound",
            value >= lower - 1e-6 * std::max(1.0, lower) && value <= w.value * (1 + 1e-9),
            "recomputed " + fmt(value) + " claimed " + fmt(lower));

    // Quasi-nuclear upper side.
    auto qn = io::qn_from_json(rep.at("witness").at("upper"));
    double cost = 0.0;
    if (!p.is_inf()) {
        for (int k = 0; k < qn.functionals.count(); ++k)
            cost += std::pow(
                vector_norm(qn.functionals.items.col(k), qn.functionals.space.u), p.value());
        cost = std::pow(cost, 1.0 / p.value());
    } else {
        cost = qn.cost;
    }
    out.add(label + ": certificate cost reproduces the upper bound",
            cost <= qn.cost * (1 + 1e-9) + 1e-12 && upper <= qn.cost * (1 + 1e-9) + 1e-12,
            "recomputed " + fmt(cost) + " claimed " + fmt(qn.cost));
    Rng rng(scfg.seed);
    auto [viol, arg] =
        kompact::detail::qn_violation_search(S, p, qn.functionals.items, scfg, rng);
    out.add(label + ": domination residual within the stated bound",
            viol <= qn.residual + 1e-5 * std::max(1.0, qn.cost),
            "found " + fmt(viol) + " stated " + fmt(qn.residual));

    // Cover side (finite p only).
    if (!p.is_inf() && rep.contains("cover")) {
        auto cover = io::cover_from_json(rep.at("cover"));
        double res = kompact::verify_cover(T, cover, scfg, scfg.seed + 5);
        out.add(label + ": cover support check",
                res <= cover.residual + 1e-5 * std::max(1.0, cover.cost),
                "found " + fmt(res) + " stated " + fmt(cover.residual));
    }

    out.add(label + ": lower <= upper within residuals",
            lower <= upper + qn.residual + 1e-9, fmt(lower) + " vs " + fmt(upper));
}

}  // namespace detail

/// Emit reports for a small set of operators, round-trip them through JSON,
/// and audit every certificate offline.
inline Outcome run(const RunConfig& cfg) {
    Outcome out;
    Rng rng(cfg.seed);
    auto engine_cfg = cfg.engine();

    struct Case {
        std::string label;
        OperatorMatrix op;
        Exponent p;
    };
    std::vector<Case> cases;
    cases.push_back({"id l_2^3 p=2", identity_operator(3, Exponent::two(), Exponent::two()),
                     Exponent::two()});
    {
        Eigen::VectorXd f = rng.gaussian_vector(3);
        Eigen::VectorXd y = rng.gaussian_vector(2);
        cases.push_back({"rank-one p=1", rank_one(f, space(3, 2.0), y, space(2, 1.0)),
                         Exponent::one()});
    }
    cases.push_back({"random l_inf->l_2 p=2",
                     random_operator(rng, SpaceSpec(3, Exponent::inf()), space(3, 2.0)),
                     Exponent::two()});
    cases.push_back({"random l_1->l_2 p=4",
                     random_operator(rng, space(3, 1.0), space(2, 2.0)), Exponent::of(4)});

    for (const auto& c : cases) {
        auto r = kompact::kappa_norm(c.op, c.p, engine_cfg);
        nlohmann::json rep{{"schema", 1},
                           {"command", "norm"},
                           {"kind", "kappa"},
                           {"p", io::to_json(c.p)},
                           {"config", cfg.echo()},
                           {"operator", io::to_json(c.op)},
                           {"estimate", io::to_json(r.est)},
                           {"witness",
                            {{"lower", io::to_json(r.lower_witness)},
                             {"upper", io::to_json(r.upper_witness)}}}};
        if (!c.p.is_inf()) {
            auto cover = kompact::cover_from_qn(r.upper_witness, c.op);
            rep["cover"] = io::to_json(cover);
        }
        // Round-trip through text: the audit sees only the serialized form.
        std::string text = rep.dump();
        nlohmann::json parsed = nlohmann::json::parse(text);
        detail::audit_kappa_report(out, c.label, parsed, cfg);
    }

    // A standalone domination certificate audit on the summing side.
    {
        auto T = random_operator(rng, space(3, 2.0), space(3, 1.0));
        auto res = summing::summing_norm(T, Exponent::two(), engine_cfg);
        std::string text = io::to_json(res.certificate).dump();
        auto cert = io::domination_from_json(nlohmann::json::parse(text));
        SearchConfig scfg;
        scfg.seed = cfg.seed + 17;
        scfg.restarts = cfg.restarts;
        double resid = summing::domination_residual_search(T, Exponent::two(), cert, scfg);
        out.add("summing certificate residual within the stated bound",
                resid <= cert.residual + 1e-5 * std::max(1.0, cert.constant),
                "found " + detail::fmt(resid) + " stated " + detail::fmt(cert.residual));
        out.add("summing lower <= constant",
                res.witness.value <= cert.constant * (1 + 1e-9) + 1e-9,
                detail::fmt(res.witness.value) + " vs " + detail::fmt(cert.constant));
    }
    return out;
}

}  // namespace opideal::selftest
