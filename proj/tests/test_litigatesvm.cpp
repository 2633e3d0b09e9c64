#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "precedent/court.hpp"
#include "precedent/litigatesvm.hpp"

using namespace precedent;

namespace {

PrecedentSet cases_2d(std::initializer_list<std::tuple<double, double, Label>> pts,
                      Era era = Era::Current) {
    PrecedentSet s;
    for (auto& [x, y, l] : pts) s.upsert({CasePoint{x, y}, l, era});
    return s;
}

bool close_sep(const LinearSeparator& a, const LinearSeparator& b, double tol = 1e-6) {
    return std::abs(a.normal[0] - b.normal[0]) <= tol &&
           std::abs(a.normal[1] - b.normal[1]) <= tol && std::abs(a.offset - b.offset) <= tol;
}

}  // namespace

TEST_CASE("achievability: identical separators with empty history") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    auto rep = check_achievable(f, f, PrecedentSet{});
    CHECK(rep.achievable);
    CHECK(rep.kind == AchievableCase::Parallel);
    CHECK(rep.theta_deg == doctest::Approx(0.0));
    CHECK(rep.delta == doctest::Approx(0.0));
}

TEST_CASE("achievability: opposite normal is blocked") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({-1.0, 0.0}, 0.0);
    auto rep = check_achievable(f, g, PrecedentSet{});
    CHECK_FALSE(rep.achievable);
    CHECK(rep.kind == AchievableCase::Blocked);
    CHECK(rep.theta_deg == doctest::Approx(180.0));

    // 90 degrees is blocked too
    auto rep90 = check_achievable(f, LinearSeparator({0.0, 1.0}, 0.0), PrecedentSet{});
    CHECK_FALSE(rep90.achievable);
    CHECK(rep90.kind == AchievableCase::Blocked);
}

TEST_CASE("achievability: disagreement-region blocker") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6}, 0.0);
    auto history = cases_2d({{-1.0, 2.0, Label::Negative}});
    CHECK(g.at(CasePoint{-1.0, 2.0}) == Label::Positive);  // g and f* disagree there
    auto rep = check_achievable(f, g, history);
    CHECK_FALSE(rep.achievable);
    CHECK(rep.kind == AchievableCase::Intersecting);
    REQUIRE(rep.blockers.size() == 1);
    CHECK(rep.blockers[0].point == CasePoint{-1.0, 2.0});

    CHECK(check_achievable(f, g, PrecedentSet{}).achievable);
}

TEST_CASE("achievability: parallel delta condition") {
    LinearSeparator f({1.0, 0.0}, 1.0);  // positive when x1 >= -1
    LinearSeparator g({1.0, 0.0}, 0.0);
    auto blocked = check_achievable(f, g, cases_2d({{0.5, 0.0, Label::Positive}}));
    CHECK_FALSE(blocked.achievable);
    CHECK(blocked.kind == AchievableCase::Parallel);
    CHECK(blocked.delta == doctest::Approx(1.0));
    REQUIRE(blocked.blockers.size() == 1);

    auto fine = check_achievable(f, g, cases_2d({{3.0, 0.0, Label::Positive}}));
    CHECK(fine.achievable);
}

TEST_CASE("teach_two_points: the symmetric pair") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    auto plan = teach_two_points(f, f, PrecedentSet{});
    REQUIRE(plan.points.size() == 2);
    CHECK(plan.points[0] == CasePoint{1.0, 0.0});
    CHECK(plan.points[1] == CasePoint{-1.0, 0.0});
    CHECK(plan.expected_labels[0] == Label::Positive);
    CHECK(plan.expected_labels[1] == Label::Negative);
}

TEST_CASE("teach_two_points: intersecting case with history") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.6, 0.8}, 0.0);
    auto history = cases_2d({{5.0, 5.0, Label::Positive}});
    auto plan = teach_two_points(f, g, history);
    CHECK(plan.points[0][0] == doctest::Approx(3.5 * 0.6).epsilon(1e-12));
    CHECK(plan.points[0][1] == doctest::Approx(3.5 * 0.8).epsilon(1e-12));
    CHECK(plan.points[1][0] == doctest::Approx(-3.5 * 0.6).epsilon(1e-12));

    PrecedentSet all = history;
    all.upsert({plan.points[0], plan.expected_labels[0], Era::Current});
    all.upsert({plan.points[1], plan.expected_labels[1], Era::Current});
    auto m = svm_fit(all);
    CHECK(close_sep(m.separator, g));
    CHECK(m.support_vectors.size() == 2);
}

TEST_CASE("teach_two_points: parallel case floored by delta") {
    LinearSeparator f({1.0, 0.0}, 1.0);
    LinearSeparator g({1.0, 0.0}, 0.0);
    auto history = cases_2d({{3.0, 0.0, Label::Positive}});
    auto plan = teach_two_points(f, g, history);
    CHECK(plan.points[0] == CasePoint{1.5, 0.0});
    CHECK(plan.points[1] == CasePoint{-1.5, 0.0});
    CHECK(plan.expected_labels[0] == Label::Positive);
    CHECK(plan.expected_labels[1] == Label::Negative);
}

TEST_CASE("teach_two_points rejects unachievable targets with the report") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({-1.0, 0.0}, 0.0);
    try {
        teach_two_points(f, g, PrecedentSet{});
        FAIL("expected NotAchievable");
    } catch (const NotAchievable& e) {
        CHECK(e.report.kind == AchievableCase::Blocked);
    }
}

TEST_CASE("achievability biconditional on random instances") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    int achievable_seen = 0, blocked_seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        double tf = ang(rng), tg = ang(rng);
        LinearSeparator f({std::cos(tf), std::sin(tf)}, 0.3 * u(rng));
        LinearSeparator g({std::cos(tg), std::sin(tg)}, 0.3 * u(rng));
        PrecedentSet history;
        int n = static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            CasePoint p{u(rng), u(rng)};
            history.upsert({p, f.at(p), Era::Current});
        }
        auto rep = check_achievable(f, g, history);
        if (rep.achievable) {
            ++achievable_seen;
            auto plan = teach_two_points(f, g, history);  // verifies internally
            PrecedentSet all = history;
            all.upsert({plan.points[0], plan.expected_labels[0], Era::Current});
            all.upsert({plan.points[1], plan.expected_labels[1], Era::Current});
            CHECK(close_sep(svm_fit(all).separator, g));
        } else {
            ++blocked_seen;
            CHECK_THROWS_AS(teach_two_points(f, g, history), NotAchievable);
        }
    }
    CHECK(achievable_seen > 20);
    CHECK(blocked_seen > 20);
}

TEST_CASE("best_achievable returns g itself when achievable") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6}, 0.1);
    SamplerSpec sampler{UniformBox{{-1.0, -1.0}, {1.0, 1.0}}, 11};
    auto r = best_achievable(f, g, PrecedentSet{}, sampler, 0.3);
    CHECK_FALSE(r.fallback);
    CHECK(r.sample_error == 0.0);
    CHECK(std::get<LinearSeparator>(r.proxy) == g);
}

TEST_CASE("best_achievable finds an achievable proxy for an unachievable g") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({-1.0, 0.0}, 0.0);  // theta = 180, unachievable
    SamplerSpec sampler{UniformBox{{-1.0, -1.0}, {1.0, 1.0}}, 23};
    auto r = best_achievable(f, g, PrecedentSet{}, sampler, 0.3);
    CHECK_FALSE(r.fallback);
    const auto& proxy = std::get<LinearSeparator>(r.proxy);
    CHECK(check_achievable(f, proxy, PrecedentSet{}).achievable);

    // the reported sample error is the proxy's disagreement with g on the
    // same (seed-reproduced) sample
    std::size_t n = default_sample_size(2, 0.3);
    auto sample = sampler.sample(n);
    std::size_t dis = 0;
    for (const auto& p : sample) {
        if (proxy.at(p) != g.at(p)) ++dis;
    }
    CHECK(r.sample_error == doctest::Approx(static_cast<double>(dis) / n));
    CHECK(r.sample_error > 0.0);
}

TEST_CASE("best_achievable with a blocking history avoids g") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6}, 0.0);
    auto history = cases_2d({{-1.0, 2.0, Label::Negative}});
    SamplerSpec sampler{UniformBox{{-1.0, -1.0}, {1.0, 1.0}}, 37};
    auto r = best_achievable(f, g, history, sampler, 0.3);
    CHECK_FALSE(r.fallback);
    const auto& proxy = std::get<LinearSeparator>(r.proxy);
    CHECK(check_achievable(f, proxy, history).achievable);
    CHECK_FALSE(close_sep(proxy, g, 1e-9));
    CHECK(r.sample_error > 0.0);
}

TEST_CASE("enumerate_pool_functions on the two-point pool") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    std::vector<CasePoint> pool{CasePoint{1.0, 0.0}, CasePoint{-1.0, 0.0}};
    auto fns = enumerate_pool_functions(f, PrecedentSet{}, pool);
    REQUIRE(fns.size() == 3);
    CHECK(std::get<ConstantRule>(fns[0].rule).label == Label::Positive);
    CHECK(fns[0].subset.empty());  // witness is the lexicographically-first subset
    CHECK(std::get<ConstantRule>(fns[1].rule).label == Label::Negative);
    CHECK(std::get<LinearSeparator>(fns[2].rule) == LinearSeparator({1.0, 0.0}, 0.0));
    CHECK(fns[2].subset.size() == 2);
}

TEST_CASE("pool enumeration over <= d+1 subsets equals the full-subset oracle") {
    std::mt19937_64 rng(48);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 40; ++trial) {
        double t = ang(rng);
        LinearSeparator f({std::cos(t), std::sin(t)}, 0.3 * u(rng));
        std::vector<CasePoint> pool;
        int n = 4 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) pool.push_back(CasePoint{u(rng), u(rng)});

        auto fns = enumerate_pool_functions(f, PrecedentSet{}, pool);

        // brute force over all 2^n subsets, deduplicated the same way
        std::vector<CourtRule> brute;
        auto seen = [&](const CourtRule& r) {
            for (const auto& o : brute) {
                if (const auto* a = std::get_if<ConstantRule>(&o)) {
                    if (const auto* b = std::get_if<ConstantRule>(&r); b && a->label == b->label)
                        return true;
                } else {
                    const auto& sa = std::get<LinearSeparator>(o);
                    if (const auto* sb = std::get_if<LinearSeparator>(&r)) {
                        if (std::abs(sa.normal[0] - sb->normal[0]) <= 1e-9 &&
                            std::abs(sa.normal[1] - sb->normal[1]) <= 1e-9 &&
                            std::abs(sa.offset - sb->offset) <= 1e-9)
                            return true;
                    }
                }
            }
            return false;
        };
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            PrecedentSet s;
            for (int i = 0; i < n; ++i) {
                if (mask & (1ull << i)) s.upsert({pool[i], f.at(pool[i]), Era::Current});
            }
            try {
                CourtRule r = svm_fit(s).rule();
                if (!seen(r)) brute.push_back(std::move(r));
            } catch (const InconsistentPrecedent&) {
            }
        }
        CHECK(fns.size() == brute.size());
        for (const auto& r : brute) {
            bool matched = false;
            for (const auto& pf : fns) {
                if (const auto* a = std::get_if<ConstantRule>(&pf.rule)) {
                    const auto* b = std::get_if<ConstantRule>(&r);
                    matched = b && a->label == b->label;
                } else {
                    const auto* sb = std::get_if<LinearSeparator>(&r);
                    matched = sb && close_sep(std::get<LinearSeparator>(pf.rule), *sb, 1e-9);
                }
                if (matched) break;
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("overturning plan degenerates to two points without stale data") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6}, 0.0);
    auto plan = teach_with_overturning(f, g, PrecedentSet{});
    CHECK(plan.points.size() == 2);
}

TEST_CASE("overturning construction removes the stale case and lands on g") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6}, 0.0);
    auto history = cases_2d({{1.0, 2.0, Label::Negative}}, Era::Stale);
    auto plan = teach_with_overturning(f, g, history);
    CHECK(plan.points.size() <= 5);  // 2d+1 for d=2

    // independent end-to-end session run
    ErrorModel err{CourtRule{g}, SamplerSpec{UniformBox{{-1.0, -1.0}, {1.0, 1.0}}, 3}, 2000};
    auto t = run_session(CourtRule{f}, LearnerKind::Svm, history, plan.points, err);
    bool removed = false;
    for (const auto& step : t.steps) {
        for (const auto& c : step.removed) {
            if (c.point == CasePoint{1.0, 2.0}) removed = true;
            CHECK(f.at(c.point) != c.label);  // only f*-disagreeing cases go
        }
    }
    CHECK(removed);
    CHECK(t.final_precedent.find(CasePoint{1.0, 2.0}) == nullptr);
    CHECK(is_separable(t.final_precedent));
    auto final_rule = std::get<LinearSeparator>(t.steps.back().rule);
    CHECK(close_sep(final_rule, g));
}

TEST_CASE("overturning in 3D uses the big-M pair and stays within 2d+1") {
    LinearSeparator f({1.0, 0.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6, 0.0}, 0.0);
    PrecedentSet history;
    history.upsert({CasePoint{1.0, 2.0, 0.0}, Label::Negative, Era::Stale});
    auto plan = teach_with_overturning(f, g, history);
    CHECK(plan.points.size() <= 7);

    int big_third = 0;
    for (const auto& p : plan.points) {
        if (std::abs(p[2]) >= plan.used.big_m / 2.0) ++big_third;
    }
    CHECK(big_third == 2);

    ErrorModel err{CourtRule{g},
                   SamplerSpec{UniformBox{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}}, 5}, 2000};
    auto t = run_session(CourtRule{f}, LearnerKind::Svm, history, plan.points, err);
    CHECK(t.final_precedent.find(CasePoint{1.0, 2.0, 0.0}) == nullptr);
    auto final_rule = std::get<LinearSeparator>(t.steps.back().rule);
    CHECK(std::abs(final_rule.normal[0] - 0.8) <= 1e-6);
    CHECK(std::abs(final_rule.normal[1] - 0.6) <= 1e-6);
    CHECK(std::abs(final_rule.normal[2]) <= 1e-6);
}

TEST_CASE("overturning precondition diagnostics") {
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.8, 0.6}, 0.0);

    // stale case agreeing with f*: nothing to overturn
    PrecedentSet agreeing;
    agreeing.upsert({CasePoint{1.0, 1.0}, Label::Positive, Era::Stale});
    CHECK_THROWS_AS(teach_with_overturning(f, g, agreeing), std::invalid_argument);

    // stale case in the disagreement region with g's label needs the relaxation
    PrecedentSet in_region;
    CasePoint p{-0.5, 2.0};  // f* says -, g says +
    REQUIRE(f.at(p) == Label::Negative);
    REQUIRE(g.at(p) == Label::Positive);
    in_region.upsert({p, Label::Positive, Era::Stale});
    CHECK_THROWS_AS(teach_with_overturning(f, g, in_region), std::invalid_argument);

    OverturnTeachConfig relaxed;
    relaxed.relaxed_disagreement = true;
    CHECK_NOTHROW(teach_with_overturning(f, g, in_region, relaxed));
}

TEST_CASE("grid search confirms unachievable targets stay far from g") {
    // when check_achievable says no, no two-point filing gets near g
    LinearSeparator f({1.0, 0.0}, 0.0);
    LinearSeparator g({0.0, 1.0}, 0.0);  // theta = 90: blocked
    REQUIRE_FALSE(check_achievable(f, g, PrecedentSet{}).achievable);

    double best = 1e300;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            double a = -2.0 + 4.0 * i / 99.0, b = -2.0 + 4.0 * j / 99.0;
            CasePoint p1{a, b}, p2{-a + 0.31, -b + 0.17};
            PrecedentSet s;
            s.upsert({p1, f.at(p1), Era::Current});
            s.upsert({p2, f.at(p2), Era::Current});
            try {
                auto m = svm_fit(s);
                if (m.degenerate) continue;
                double d = std::hypot(m.separator.normal[0] - g.normal[0],
                                      m.separator.normal[1] - g.normal[1]);
                best = std::min(best, d);
            } catch (const InconsistentPrecedent&) {
            }
        }
    }
    CHECK(best >= 1e-3);
}
