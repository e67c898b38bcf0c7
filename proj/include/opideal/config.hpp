#pragma once
// Run-wide configuration: the seed, tolerances, and budgets every report
// echoes.  All numeric defaults live here.

#include <json.hpp>
#include <string>

#include "opideal/summing.hpp"

namespace opideal {

struct RunConfig {
    std::uint64_t seed = 1;
    double gap_rel = 0.05;
    double feas_tol = 1e-7;
    int restarts = 32;
    int atoms = 120;
    int rounds = 10;
    int rank = 8;  // decomposition length budget
    long bb_nodes = 200000;
    std::string format = "json";  // json | csv
    std::string out_path;         // empty: stdout

    summing::EngineConfig engine() const {
        summing::EngineConfig cfg;
        cfg.search.seed = seed;
        cfg.search.restarts = restarts;
        cfg.search.bb_nodes = bb_nodes;
        cfg.feas_tol = feas_tol;
        cfg.gap_rel = gap_rel;
        cfg.rounds = rounds;
        cfg.max_atoms = atoms;
        return cfg;
    }

    nlohmann::json echo() const {
        return nlohmann::json{{"seed", seed},        {"gap_rel", gap_rel},
                              {"feas_tol", feas_tol}, {"restarts", restarts},
                              {"atoms", atoms},       {"rounds", rounds},
                              {"rank", rank},         {"bb_nodes", bb_nodes}};
    }

    void validate() const {
        if (!(gap_rel > 0) || !(feas_tol > 0))
            throw std::invalid_argument("tolerances must be positive");
        if (restarts < 1 || atoms < 1 || rounds < 1 || rank < 1 || bb_nodes < 1)
            throw std::invalid_argument("budgets must be at least one");
    }
};

}  // namespace opideal
