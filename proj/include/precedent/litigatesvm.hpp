#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "precedent/core.hpp"
#include "precedent/learners.hpp"
#include "precedent/measure.hpp"

namespace precedent {

enum class AchievableCase { Intersecting, Parallel, Blocked };

struct AchievabilityReport {
    bool achievable = false;
    double theta_deg = 0.0;  // angle between w_g and w_{f*}, degrees
    AchievableCase kind = AchievableCase::Blocked;
    double delta = 0.0;  // parallel case: distance between the two hyperplanes
    std::vector<LabeledCase> blockers;
    std::string reason;
};

struct NotAchievable : std::runtime_error {
    AchievabilityReport report;
    explicit NotAchievable(AchievabilityReport r)
        : std::runtime_error("target separator is not achievable: " + r.reason),
          report(std::move(r)) {}
};

/// Decides whether the max-margin learner can be forced to output g given
/// f*-consistent history: either 0 < theta < 90 with no history in the
/// disagreement region nor on g's hyperplane, or theta = 0 with no history
/// closer than delta to g's hyperplane.
AchievabilityReport check_achievable(const LinearSeparator& f_star, const LinearSeparator& g,
                                     const PrecedentSet& history);

struct TwoPointPlan {
    std::vector<CasePoint> points;       // exactly two, positive side first
    std::vector<Label> expected_labels;  // their f*-labels (+, -)
};

/// The two-point teaching construction: x0 +- t * w_g along g's normal.
/// Throws NotAchievable when check_achievable fails; verifies that the fit
/// reproduces g within 1e-6 with only the two new points as support vectors.
TwoPointPlan teach_two_points(const LinearSeparator& f_star, const LinearSeparator& g,
                              const PrecedentSet& history);

struct BestAchievableResult {
    CourtRule proxy;            // LinearSeparator normally; ConstantRule fallback
    double sample_error = 0.0;  // disagreement with g on the drawn sample
    bool fallback = false;      // no achievable candidate was found
};

/// Sample-based search for the achievable separator closest to a (possibly
/// unachievable) g: draws ceil(d/eps^2 ln(1/eps)) points, fits every subset
/// of size <= d+1 labeled by f*, keeps achievable candidates, and returns the
/// one with the least sample disagreement with g (ties: smaller angle to f*,
/// then lexicographic).
BestAchievableResult best_achievable(const LinearSeparator& f_star, const LinearSeparator& g,
                                     const PrecedentSet& history, const SamplerSpec& sampler,
                                     double epsilon);

struct PoolFunction {
    CourtRule rule;
    std::vector<CasePoint> subset;  // lexicographically-first witness
};

/// All distinct lower-court rules reachable by filing subsets of the pool:
/// every subset of size <= d+1, labeled by f*, fit together with history.
/// Inconsistent fits are skipped; rules are deduplicated within 1e-9.
std::vector<PoolFunction> enumerate_pool_functions(const LinearSeparator& f_star,
                                                   const PrecedentSet& history,
                                                   const std::vector<CasePoint>& pool);

struct OverturnTeachConfig {
    double epsilon = 0.0;  // <= 0: auto (1e-3 * data extent)
    double alpha = 0.0;    // <= 0: auto (1e3 * data extent)
    double big_m = 0.0;    // <= 0: auto (1e6 * data extent); finite stand-in for the
                           // construction's unbounded coordinates
    double c_half = 0.0;   // <= 0: auto (half the closest boundary-sitting stale distance)
    int retries = 3;
    bool relaxed_disagreement = false;  // allow stale points in the disagreement
                                        // region when their labels match g
};

struct OverturnPlan {
    std::vector<CasePoint> points;  // filing order; at most 2d+1
    std::vector<Label> expected_labels;
    AchievableCase kind = AchievableCase::Intersecting;
    OverturnTeachConfig used;  // the parameter values that verified
};

/// The <= 2d+1-point construction that removes every stale (f*- and
/// g-disagreeing) case and leaves the lower court at g. The plan is verified
/// by simulating the court session; on failure the parameters are retried
/// with (epsilon/10, alpha*10, big_m*10) up to config.retries times.
OverturnPlan teach_with_overturning(const LinearSeparator& f_star, const LinearSeparator& g,
                                    const PrecedentSet& history_with_stale,
                                    const OverturnTeachConfig& config = {});

}  // namespace precedent
