#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "precedent/court.hpp"
#include "precedent/litigatesvm.hpp"

using namespace precedent;

namespace {

PrecedentSet figure6_precedent() {
    PrecedentSet s;
    s.upsert({CasePoint{0.2, 0.5}, Label::Positive, Era::Current});
    s.upsert({CasePoint{0.6, 0.1}, Label::Positive, Era::Current});
    s.upsert({CasePoint{0.8, 0.2}, Label::Negative, Era::Stale});
    s.upsert({CasePoint{0.9, 0.8}, Label::Negative, Era::Stale});
    return s;
}

const CourtRule kFStarT = LinearSeparator({1.0, 0.0}, -0.5);  // positive when x1 >= 0.5

}  // namespace

TEST_CASE("consistent addition removes nothing") {
    PrecedentSet s;
    s.upsert({CasePoint{-1.0, 0.0}, Label::Negative, Era::Current});
    s.upsert({CasePoint{1.0, 0.0}, Label::Positive, Era::Current});
    CourtRule f = LinearSeparator({1.0, 0.0}, 0.0);
    auto out = decide(f, s, CasePoint{2.0, 1.0}, LearnerKind::Svm, RemovalPolicy::lexicographic());
    CHECK(out.label == Label::Positive);
    CHECK(out.removed.empty());
    CHECK(out.new_precedent.size() == 3);
}

TEST_CASE("crossing precedent forces a minimal overturning") {
    auto s = figure6_precedent();
    auto out =
        decide(kFStarT, s, CasePoint{0.95, 0.5}, LearnerKind::Svm, RemovalPolicy::lexicographic());
    CHECK(out.label == Label::Positive);
    REQUIRE(out.removed.size() == 1);
    CHECK(out.removed[0].point == CasePoint{0.8, 0.2});  // lexicographically first singleton
    CHECK(is_separable(out.new_precedent));
    CHECK(out.new_precedent.find(CasePoint{0.9, 0.8}) != nullptr);

    // every removed case disagreed with f*
    for (const auto& c : out.removed) CHECK(evaluate(kFStarT, c.point) != c.label);
}

TEST_CASE("minimal removal sets on the crossing instance") {
    auto s = figure6_precedent();
    s.upsert({CasePoint{0.95, 0.5}, Label::Positive, Era::Current});
    CHECK_FALSE(oracles::separable_2d(s.cases()));

    auto sets = minimal_removal_sets(s, kFStarT, LearnerKind::Svm);
    REQUIRE(sets.size() == 2);
    REQUIRE(sets[0].size() == 1);
    REQUIRE(sets[1].size() == 1);
    CHECK(sets[0][0].point == CasePoint{0.8, 0.2});
    CHECK(sets[1][0].point == CasePoint{0.9, 0.8});
}

TEST_CASE("already-consistent precedent yields the empty removal set") {
    PrecedentSet s;
    s.upsert({CasePoint{1.0, 0.0}, Label::Positive, Era::Current});
    auto sets = minimal_removal_sets(s, CourtRule{LinearSeparator({1.0, 0.0}, 0.0)},
                                     LearnerKind::Svm);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].empty());
}

TEST_CASE("two stale cases inside the positive hull must both go") {
    PrecedentSet s;
    s.upsert({CasePoint{0.2, 0.5}, Label::Positive, Era::Current});
    s.upsert({CasePoint{0.6, 0.1}, Label::Positive, Era::Current});
    s.upsert({CasePoint{0.95, 0.5}, Label::Positive, Era::Current});
    s.upsert({CasePoint{0.5, 0.3}, Label::Negative, Era::Stale});
    s.upsert({CasePoint{0.6, 0.35}, Label::Negative, Era::Stale});
    CourtRule f = LinearSeparator({1.0, 0.0}, 0.0);  // everything here is f*-positive

    auto sets = minimal_removal_sets(s, f, LearnerKind::Svm);
    REQUIRE(sets.size() == 1);
    REQUIRE(sets[0].size() == 2);
    CHECK(sets[0][0].point == CasePoint{0.5, 0.3});
    CHECK(sets[0][1].point == CasePoint{0.6, 0.35});

    // subset-minimality: removing either singleton does not restore separability
    for (const auto& c : sets[0]) {
        PrecedentSet one = s;
        one.erase(c.point);
        CHECK_FALSE(oracles::separable_2d(one.cases()));
    }
}

TEST_CASE("1D duplicate filing replaces and reports the stale case") {
    PrecedentSet s;
    s.upsert({CasePoint{0.5}, Label::Negative, Era::Stale});
    CourtRule f = Piecewise1DFn::constant(Label::Positive);
    auto out = decide(f, s, CasePoint{0.5}, LearnerKind::Nn1D, RemovalPolicy::lexicographic());
    CHECK(out.label == Label::Positive);
    REQUIRE(out.removed.size() == 1);
    CHECK(out.removed[0].label == Label::Negative);
    REQUIRE(out.new_precedent.size() == 1);
    CHECK(out.new_precedent.find(CasePoint{0.5})->label == Label::Positive);
}

TEST_CASE("seeded removal policy is reproducible") {
    auto s = figure6_precedent();
    auto a = decide(kFStarT, s, CasePoint{0.95, 0.5}, LearnerKind::Svm,
                    RemovalPolicy::seeded(42), 3);
    auto b = decide(kFStarT, s, CasePoint{0.95, 0.5}, LearnerKind::Svm,
                    RemovalPolicy::seeded(42), 3);
    CHECK(a.removed == b.removed);
    CHECK(a.new_precedent == b.new_precedent);
    REQUIRE(a.removed.size() == 1);

    // some seed removes the other candidate
    bool saw_other = false;
    for (std::uint64_t seed = 0; seed < 32 && !saw_other; ++seed) {
        auto c = decide(kFStarT, s, CasePoint{0.95, 0.5}, LearnerKind::Svm,
                        RemovalPolicy::seeded(seed), 0);
        if (c.removed[0].point == CasePoint{0.9, 0.8}) saw_other = true;
    }
    CHECK(saw_other);
}

TEST_CASE("adversarial policy picks the candidate maximizing the score") {
    auto s = figure6_precedent();
    auto keeps = [](const CasePoint& p) {
        return [p](const PrecedentSet& after) { return after.find(p) ? 1.0 : 0.0; };
    };
    auto a = decide(kFStarT, s, CasePoint{0.95, 0.5}, LearnerKind::Svm,
                    RemovalPolicy::adversarial(keeps(CasePoint{0.9, 0.8})));
    CHECK(a.removed[0].point == CasePoint{0.8, 0.2});
    auto b = decide(kFStarT, s, CasePoint{0.95, 0.5}, LearnerKind::Svm,
                    RemovalPolicy::adversarial(keeps(CasePoint{0.8, 0.2})));
    CHECK(b.removed[0].point == CasePoint{0.9, 0.8});
}

TEST_CASE("unresolvable inconsistency is a model violation") {
    // f*-consistent data that is still not strictly separable: no disagreeing
    // case exists to remove
    PrecedentSet s;
    s.upsert({CasePoint{0.0, 0.0}, Label::Positive, Era::Current});
    s.upsert({CasePoint{-1e-14, 0.0}, Label::Negative, Era::Current});
    CourtRule f = LinearSeparator({1.0, 0.0}, 0.0);
    CHECK_FALSE(is_separable(s));
    CHECK_THROWS_AS(minimal_removal_sets(s, f, LearnerKind::Svm), std::runtime_error);
}

TEST_CASE("empty session reports only the initial state") {
    ErrorModel err{CourtRule{Piecewise1DFn::constant(Label::Positive)},
                   PiecewiseUniform1D::uniform()};
    auto t = run_session(CourtRule{Piecewise1DFn::constant(Label::Positive)}, LearnerKind::Nn1D,
                         PrecedentSet{}, {}, err);
    CHECK(t.steps.empty());
    CHECK(t.initial_error == 0.0);
    CHECK(std::get<Piecewise1DFn>(t.initial_rule) == Piecewise1DFn::constant(Label::Positive));
}

TEST_CASE("a two-point teaching session ends at g with no removals") {
    LinearSeparator f_star({1.0, 0.0}, 0.0);
    LinearSeparator g({0.6, 0.8}, 0.0);
    PrecedentSet history;
    history.upsert({CasePoint{5.0, 5.0}, Label::Positive, Era::Current});
    auto plan = teach_two_points(f_star, g, history);

    ErrorModel err{CourtRule{g}, SamplerSpec{UniformBox{{-1.0, -1.0}, {1.0, 1.0}}, 9}, 4000};
    for (auto order : {std::vector<CasePoint>{plan.points[0], plan.points[1]},
                       std::vector<CasePoint>{plan.points[1], plan.points[0]}}) {
        auto t = run_session(CourtRule{f_star}, LearnerKind::Svm, history, order, err);
        REQUIRE(t.steps.size() == 2);
        CHECK(t.steps[0].removed.empty());
        CHECK(t.steps[1].removed.empty());
        auto final_rule = std::get<LinearSeparator>(t.steps.back().rule);
        CHECK(final_rule.normal[0] == doctest::Approx(g.normal[0]).epsilon(1e-9));
        CHECK(final_rule.normal[1] == doctest::Approx(g.normal[1]).epsilon(1e-9));
        CHECK(final_rule.offset == doctest::Approx(g.offset).epsilon(1e-9));
        CHECK(t.steps.back().error <= 1e-3);
    }
}

TEST_CASE("transcripts are bit-identical across repeated runs") {
    ErrorModel err{kFStarT, SamplerSpec{UniformBox{{0.0, 0.0}, {1.0, 1.0}}, 17}, 2000};
    std::vector<CasePoint> filings{CasePoint{0.95, 0.5}, CasePoint{0.55, 0.9}};
    auto a = run_session(kFStarT, LearnerKind::Svm, figure6_precedent(), filings, err,
                         RemovalPolicy::seeded(5));
    auto b = run_session(kFStarT, LearnerKind::Svm, figure6_precedent(), filings, err,
                         RemovalPolicy::seeded(5));
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].removed == b.steps[i].removed);
        CHECK(a.steps[i].error == b.steps[i].error);
    }
    CHECK(a.final_precedent == b.final_precedent);
}
