#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "precedent/core.hpp"
#include "precedent/court.hpp"
#include "precedent/measure.hpp"

namespace precedent {

/// A scenario file failed validation; the message names the offending field.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Setting { Nn1D, Svm };

enum class SolverKind {
    Optimal,
    Budgeted,
    Relabel,
    Greedy,
    PairLookahead,
    Teach2,
    BestAchievable,
    OverturnTeach,
    Session,
};

struct Scenario {
    Setting setting = Setting::Nn1D;
    std::size_t dimension = 1;
    CourtRule f_star;
    CourtRule g;
    std::variant<PiecewiseUniform1D, SamplerSpec> distribution;
    PrecedentSet history;
    std::vector<double> pool;           // nn1d pool coordinates
    std::vector<CasePoint> pool_points; // svm pool
    std::vector<CasePoint> filings;     // session filings
    SolverKind solver = SolverKind::Optimal;
    std::size_t k = 0;          // budgeted
    double epsilon = 0.05;      // best_achievable target accuracy
    RemovalPolicy::Kind policy = RemovalPolicy::Kind::LexicographicFirst;
    bool seed_set = false;
    std::uint64_t seed = 0;
    std::size_t sample_n = 10000;  // Monte Carlo error sample in sessions
};

Scenario load_scenario(const std::string& path);
Scenario load_scenario_text(const std::string& text);

/// Serializes back to the scenario file format (17-significant-digit reals);
/// load_scenario_text(scenario_to_json(s)) reproduces s exactly.
std::string scenario_to_json(const Scenario& s);

/// Dispatches to the solver named by the scenario and returns the result
/// document (JSON text, 17-significant-digit reals, byte-deterministic).
std::string run_scenario(const Scenario& s);

}  // namespace precedent
