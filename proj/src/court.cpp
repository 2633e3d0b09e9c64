#include "precedent/court.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace precedent {

namespace {

bool consistent(const PrecedentSet& s, LearnerKind kind) {
    if (kind == LearnerKind::Nn1D) return true;  // NN fits any duplicate-free 1D set
    return is_separable(s);
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t m = idx.size();
    for (std::size_t i = m; i-- > 0;) {
        if (idx[i] < i + n - m) {
            ++idx[i];
            for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

PrecedentSet without(const PrecedentSet& s, const std::vector<LabeledCase>& removed) {
    PrecedentSet out = s;
    for (const auto& c : removed) out.erase(c.point);
    return out;
}

}  // namespace

std::vector<std::vector<LabeledCase>> minimal_removal_sets(const PrecedentSet& precedent,
                                                           const CourtRule& f_star,
                                                           LearnerKind kind) {
    if (consistent(precedent, kind)) return {{}};

    std::vector<LabeledCase> disagreeing;
    for (const auto& c : precedent.cases()) {
        if (evaluate(f_star, c.point) != c.label) disagreeing.push_back(c);
    }
    if (disagreeing.size() > 20) {
        throw std::invalid_argument("more than 20 disagreeing cases; removal search refused");
    }

    for (std::size_t m = 1; m <= disagreeing.size(); ++m) {
        std::vector<std::vector<LabeledCase>> found;
        std::vector<std::size_t> idx(m);
        for (std::size_t i = 0; i < m; ++i) idx[i] = i;
        do {
            std::vector<LabeledCase> candidate;
            for (std::size_t i : idx) candidate.push_back(disagreeing[i]);
            if (consistent(without(precedent, candidate), kind)) {
                found.push_back(std::move(candidate));
            }
        } while (next_combination(idx, disagreeing.size()));
        if (!found.empty()) return found;  // minimum cardinality, already in lex order
    }
    throw std::runtime_error(
        "model violation: removing every disagreeing case does not restore consistency");
}

DecideOutcome decide(const CourtRule& f_star, const PrecedentSet& precedent, const CasePoint& x,
                     LearnerKind kind, const RemovalPolicy& policy, std::uint64_t step) {
    DecideOutcome out;
    out.label = evaluate(f_star, x);
    out.new_precedent = precedent;

    if (const LabeledCase* old = out.new_precedent.find(x); old && old->label != out.label) {
        out.removed.push_back(*old);  // re-bringing the exact point relabels it
    }
    out.new_precedent.upsert({x, out.label, Era::Current});

    if (!consistent(out.new_precedent, kind)) {
        auto sets = minimal_removal_sets(out.new_precedent, f_star, kind);
        std::size_t pick = 0;
        switch (policy.kind) {
            case RemovalPolicy::Kind::LexicographicFirst:
                break;
            case RemovalPolicy::Kind::SeededRandom: {
                std::mt19937_64 rng(policy.seed + step);
                pick = rng() % sets.size();
                break;
            }
            case RemovalPolicy::Kind::AdversarialWorst: {
                if (!policy.scorer) {
                    throw std::invalid_argument("AdversarialWorst policy requires a scorer");
                }
                double best = -1e300;
                for (std::size_t i = 0; i < sets.size(); ++i) {
                    double score = policy.scorer(without(out.new_precedent, sets[i]));
                    if (score > best) {
                        best = score;
                        pick = i;
                    }
                }
                break;
            }
        }
        for (const auto& c : sets[pick]) {
            out.new_precedent.erase(c.point);
            out.removed.push_back(c);
        }
    }
    return out;
}

double ErrorModel::eval(const CourtRule& learned) const {
    if (const auto* d = std::get_if<PiecewiseUniform1D>(&dist)) {
        const auto* lf = std::get_if<Piecewise1DFn>(&learned);
        const auto* gf = std::get_if<Piecewise1DFn>(&g);
        if (!lf || !gf) {
            throw std::invalid_argument("1D error model requires piecewise rules");
        }
        return discrepancy_1d(*lf, *gf, d->lo(), d->hi(), *d);
    }
    return estimate_error(learned, g, std::get<SamplerSpec>(dist), sample_n).estimate;
}

namespace {

CourtRule refit(const PrecedentSet& s, LearnerKind kind, const ErrorModel& err) {
    if (kind == LearnerKind::Nn1D) {
        double lo = 0.0, hi = 1.0;
        if (const auto* d = std::get_if<PiecewiseUniform1D>(&err.dist)) {
            lo = d->lo();
            hi = d->hi();
        }
        return nn_fit(s, lo, hi);
    }
    return svm_fit(s).rule();
}

}  // namespace

SessionTranscript run_session(const CourtRule& f_star, LearnerKind kind,
                              const PrecedentSet& initial_precedent,
                              const std::vector<CasePoint>& filings, const ErrorModel& err,
                              RemovalPolicy policy) {
    if (policy.kind == RemovalPolicy::Kind::AdversarialWorst && !policy.scorer) {
        policy.scorer = [&err, kind](const PrecedentSet& s) { return err.eval(refit(s, kind, err)); };
    }

    SessionTranscript t;
    PrecedentSet precedent = initial_precedent;
    t.initial_rule = refit(precedent, kind, err);
    t.initial_error = err.eval(t.initial_rule);

    for (std::size_t i = 0; i < filings.size(); ++i) {
        auto outcome = decide(f_star, precedent, filings[i], kind, policy, i);
        precedent = std::move(outcome.new_precedent);
        SessionStep step;
        step.brought = filings[i];
        step.assigned = outcome.label;
        step.removed = std::move(outcome.removed);
        step.rule = refit(precedent, kind, err);
        step.error = err.eval(step.rule);
        t.steps.push_back(std::move(step));
    }
    t.final_precedent = std::move(precedent);
    return t;
}

}  // namespace precedent
