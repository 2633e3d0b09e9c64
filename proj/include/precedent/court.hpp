#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "precedent/core.hpp"
#include "precedent/learners.hpp"
#include "precedent/measure.hpp"

namespace precedent {

/// Which hypothesis class the lower court learns over.
enum class LearnerKind { Nn1D, Svm };

/// How the high court picks among tied minimum-cardinality removal sets.
struct RemovalPolicy {
    enum class Kind { LexicographicFirst, SeededRandom, AdversarialWorst };
    Kind kind = Kind::LexicographicFirst;
    std::uint64_t seed = 0;
    // AdversarialWorst scores the precedent remaining after a candidate
    // removal (typically the litigator's error after refit) and keeps the
    // candidate with the highest score.
    std::function<double(const PrecedentSet&)> scorer;

    static RemovalPolicy lexicographic() { return {}; }
    static RemovalPolicy seeded(std::uint64_t seed) {
        RemovalPolicy p;
        p.kind = Kind::SeededRandom;
        p.seed = seed;
        return p;
    }
    static RemovalPolicy adversarial(std::function<double(const PrecedentSet&)> scorer) {
        RemovalPolicy p;
        p.kind = Kind::AdversarialWorst;
        p.scorer = std::move(scorer);
        return p;
    }
};

struct DecideOutcome {
    Label label;
    std::vector<LabeledCase> removed;  // replaced duplicate first, then overturned cases
    PrecedentSet new_precedent;
};

/// All minimum-cardinality subsets of the f*-disagreeing cases whose removal
/// makes `precedent` consistent with the hypothesis class. Returns {{}} when
/// it already is. At most 20 disagreeing cases are searched.
std::vector<std::vector<LabeledCase>> minimal_removal_sets(const PrecedentSet& precedent,
                                                           const CourtRule& f_star,
                                                           LearnerKind kind);

/// The high court decides x: labels it with f*, replaces any case at the same
/// coordinates, and if the result is inconsistent with the class, overturns a
/// minimal set of disagreeing precedent chosen by `policy`. `step` feeds the
/// SeededRandom draw so sessions are reproducible.
DecideOutcome decide(const CourtRule& f_star, const PrecedentSet& precedent, const CasePoint& x,
                     LearnerKind kind, const RemovalPolicy& policy, std::uint64_t step = 0);

/// How the litigator's error is measured during a session.
struct ErrorModel {
    CourtRule g;
    std::variant<PiecewiseUniform1D, SamplerSpec> dist;
    std::size_t sample_n = 10000;  // for the sampled (svm) estimate

    double eval(const CourtRule& learned) const;
};

struct SessionStep {
    CasePoint brought;
    Label assigned;
    std::vector<LabeledCase> removed;
    CourtRule rule;  // lower-court refit after this step
    double error;    // litigator error of `rule`
};

struct SessionTranscript {
    CourtRule initial_rule;
    double initial_error = 0.0;
    std::vector<SessionStep> steps;
    PrecedentSet final_precedent;
};

SessionTranscript run_session(const CourtRule& f_star, LearnerKind kind,
                              const PrecedentSet& initial_precedent,
                              const std::vector<CasePoint>& filings, const ErrorModel& err,
                              RemovalPolicy policy = RemovalPolicy::lexicographic());

}  // namespace precedent
