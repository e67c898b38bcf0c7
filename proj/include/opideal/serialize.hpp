#pragma once
// JSON wire formats.  Spaces are {"dim": n, "u": number | "inf"}; vectors and
// sequences are plain arrays; every report carries "schema": 1 and echoes the
// run configuration, so a report is reproducible and re-verifiable offline.

#include <json.hpp>

#include <cmath>

#include "opideal/atlas.hpp"
#include "opideal/inequalities.hpp"
#include "opideal/nuclear.hpp"

namespace opideal::io {

using nlohmann::json;

inline json real_to_json(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

inline double real_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        if (j.get<std::string>() == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("bad real literal");
    }
    return j.get<double>();
}

inline json to_json(Exponent e) {
    if (e.is_inf()) return json("inf");
    return json(e.value());
}

inline Exponent exponent_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return Exponent::inf();
        throw std::invalid_argument("exponent string must be \"inf\"");
    }
    return Exponent::of(j.get<double>());
}

inline json to_json(const SpaceSpec& s) {
    return json{{"dim", s.dim}, {"u", to_json(s.u)}};
}

inline SpaceSpec space_from_json(const json& j) {
    return SpaceSpec(j.at("dim").get<int>(), exponent_from_json(j.at("u")));
}

inline json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

inline json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
    if (j.empty()) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd m(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i)
        for (std::size_t k = 0; k < j[i].size(); ++k)
            m(static_cast<int>(i), static_cast<int>(k)) = j[i][k].get<double>();
    return m;
}

inline json to_json(const VectorSequence& s) {
    json items = json::array();
    for (int i = 0; i < s.count(); ++i) items.push_back(to_json(Eigen::VectorXd(s.items.col(i))));
    return json{{"space", to_json(s.space)}, {"p", to_json(s.p)}, {"items", items}};
}

inline VectorSequence sequence_from_json(const json& j) {
    SpaceSpec sp = space_from_json(j.at("space"));
    Exponent p = exponent_from_json(j.at("p"));
    const json& items = j.at("items");
    Eigen::MatrixXd m(sp.dim, items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        m.col(static_cast<int>(i)) = vector_from_json(items[i]);
    return VectorSequence(std::move(m), sp, p);
}

inline json to_json(const OperatorMatrix& T) {
    return json{{"domain", to_json(T.domain)},
                {"codomain", to_json(T.codomain)},
                {"entries", to_json(T.entries)}};
}

inline OperatorMatrix operator_from_json(const json& j) {
    return OperatorMatrix(space_from_json(j.at("domain")), space_from_json(j.at("codomain")),
                          matrix_from_json(j.at("entries")));
}

inline json to_json(const NormEstimate& e) {
    return json{{"lower", e.lower},
                {"upper", real_to_json(e.upper)},
                {"status", to_string(e.status)}};
}

inline NormEstimate estimate_from_json(const json& j) {
    NormEstimate e;
    e.lower = j.at("lower").get<double>();
    e.upper = real_from_json(j.at("upper"));
    e.status = j.at("status").get<std::string>() == "converged"
                   ? EstimateStatus::converged
                   : EstimateStatus::unconverged;
    return e;
}

inline json to_json(const summing::PietschWitness& w) {
    return json{{"type", "pietsch_witness"},
                {"vectors", to_json(w.vectors)},
                {"value", w.value},
                {"weak_norm_upper", w.weak_norm_upper}};
}

inline summing::PietschWitness witness_from_json(const json& j) {
    summing::PietschWitness w;
    w.vectors = sequence_from_json(j.at("vectors"));
    w.value = j.at("value").get<double>();
    w.weak_norm_upper = j.at("weak_norm_upper").get<double>();
    return w;
}

inline json to_json(const summing::DominationCertificate& c) {
    return json{{"type", "domination_certificate"},
                {"atoms", to_json(c.atoms)},
                {"weights", to_json(Eigen::VectorXd(c.weights))},
                {"constant", c.constant},
                {"residual", c.residual},
                {"certified", c.certified},
                {"converged", c.converged}};
}

inline summing::DominationCertificate domination_from_json(const json& j) {
    summing::DominationCertificate c;
    c.atoms = sequence_from_json(j.at("atoms"));
    c.weights = vector_from_json(j.at("weights"));
    c.constant = j.at("constant").get<double>();
    c.residual = j.at("residual").get<double>();
    c.certified = j.at("certified").get<bool>();
    c.converged = j.at("converged").get<bool>();
    return c;
}

inline json to_json(const kompact::QNCertificate& c) {
    return json{{"type", "qn_certificate"},
                {"functionals", to_json(c.functionals)},
                {"cost", real_to_json(c.cost)},
                {"residual", c.residual},
                {"certified", c.certified},
                {"converged", c.converged}};
}

inline kompact::QNCertificate qn_from_json(const json& j) {
    kompact::QNCertificate c;
    c.functionals = sequence_from_json(j.at("functionals"));
    c.cost = real_from_json(j.at("cost"));
    c.residual = j.at("residual").get<double>();
    c.certified = j.at("certified").get<bool>();
    c.converged = j.at("converged").get<bool>();
    return c;
}

inline json to_json(const kompact::Cover& c) {
    return json{{"type", "cover"},
                {"vectors", to_json(c.vectors)},
                {"cost", c.cost},
                {"residual", c.residual}};
}

inline kompact::Cover cover_from_json(const json& j) {
    kompact::Cover c;
    c.vectors = sequence_from_json(j.at("vectors"));
    c.cost = j.at("cost").get<double>();
    c.residual = j.at("residual").get<double>();
    return c;
}

inline json to_json(const nuclear::Decomposition& d) {
    return json{{"type", "decomposition"},
                {"left", to_json(d.left)},
                {"right", to_json(d.right)},
                {"cost", d.cost},
                {"residual", d.residual}};
}

inline json to_json(const ineq::InequalityReport& r) {
    json constants = json::array();
    for (const auto& c : r.constants)
        constants.push_back(json{{"name", c.name},
                                 {"value", c.entry.value},
                                 {"provenance", c.entry.provenance},
                                 {"estimate", c.entry.estimate}});
    json out{{"name", r.name},
             {"instances", r.instances},
             {"excluded", r.excluded},
             {"worst_margin", r.worst_margin},
             {"pass", r.pass},
             {"constants", constants}};
    if (r.measured_c) out["measured_c"] = *r.measured_c;
    return out;
}

inline json to_json(const atlas::SlopeExperiment& e) {
    json vals = json::array();
    for (const auto& v : e.values) vals.push_back(to_json(v));
    json out{{"r", e.query.r},
             {"u", to_json(e.query.u)},
             {"v", to_json(e.query.v)},
             {"dims", e.dims},
             {"values", vals},
             {"slope_fit", e.fitted_slope},
             {"slope_err", e.slope_uncertainty},
             {"value_ratio", e.value_ratio},
             {"partial", e.partial}};
    if (e.diag_exponent) out["diag_exponent"] = *e.diag_exponent;
    return out;
}

}  // namespace opideal::io
