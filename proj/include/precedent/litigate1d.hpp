#pragma once

#include <cstdint>
#include <vector>

#include "precedent/core.hpp"
#include "precedent/measure.hpp"

namespace precedent {

/// The finite pool P of case fact patterns available for filing (1D).
struct Pool1D {
    std::vector<double> points;  // strictly increasing

    static Pool1D of(std::vector<double> pts);
    void validate() const;
};

struct SelectionResult {
    std::vector<double> chosen;   // ascending pool coordinates
    std::vector<Label> labels;    // their f*-labels
    double achieved_error = 0.0;  // discrepancy(learned, g, domain, dist)
    Piecewise1DFn learned;        // nn fit on history (with overrides) + chosen
};

struct StrategyStep {
    std::vector<double> picked;  // points added this step (1 for greedy, 2 for pairs)
    double error_after = 0.0;
};

struct StrategyResult {
    SelectionResult result;
    std::vector<StrategyStep> steps;
};

/// Exact optimum over all subsets of the pool via the O(|P|^2) DP.
/// Requires history consistent with f_star. Error ties return the
/// lexicographically smallest subset.
SelectionResult solve_optimal(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                              const PiecewiseUniform1D& dist, const PrecedentSet& history,
                              const Pool1D& pool);

/// Exact optimum over subsets of size <= k (k rows of the DP table).
SelectionResult solve_budgeted(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                               const PiecewiseUniform1D& dist, const PrecedentSet& history,
                               const Pool1D& pool, std::size_t k);

/// Same DP, but history may contain stale cases: a chosen point that
/// duplicates a historical coordinate replaces that case with its f*-label
/// in every nearest-neighbor computation.
SelectionResult solve_with_relabel(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                                   const PiecewiseUniform1D& dist, const PrecedentSet& history,
                                   const Pool1D& pool);

/// Exhaustive enumeration over all 2^|P| subsets (|P| <= 20); duplicate
/// coordinates are relabeled as in solve_with_relabel. Validation oracle.
SelectionResult oracle_optimal(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                               const PiecewiseUniform1D& dist, const PrecedentSet& history,
                               const Pool1D& pool);

/// One point at a time, best next-step error; ties prefer points where g
/// agrees with f*, then the smallest coordinate. Stops when no point
/// improves by more than 1e-12.
StrategyResult greedy_strategy(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                               const PiecewiseUniform1D& dist, const PrecedentSet& history,
                               const Pool1D& pool);

/// Best pair of points per step; stops when no pair improves by more than
/// 1e-12.
StrategyResult pair_lookahead_strategy(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                                       const PiecewiseUniform1D& dist, const PrecedentSet& history,
                                       const Pool1D& pool);

}  // namespace precedent
