#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "precedent/learners.hpp"
#include "precedent/litigate1d.hpp"

using namespace precedent;

namespace {

Piecewise1DFn fn(Label leftmost, std::vector<double> bounds) {
    Piecewise1DFn f;
    f.leftmost_label = leftmost;
    f.boundaries = std::move(bounds);
    return f;
}

PrecedentSet hist(std::initializer_list<std::pair<double, Label>> pts) {
    PrecedentSet s;
    for (auto& [x, l] : pts) s.upsert({CasePoint{x}, l, Era::Current});
    return s;
}

// Independent evaluation of one subset: nn_fit on history overridden by the
// chosen f*-labeled points, then the exact discrepancy against g.
double subset_error(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                    const PiecewiseUniform1D& dist, const PrecedentSet& history,
                    const Pool1D& pool, std::uint64_t mask) {
    PrecedentSet s = history;
    for (std::size_t i = 0; i < pool.points.size(); ++i) {
        if (mask & (1ull << i)) {
            s.upsert({CasePoint{pool.points[i]}, f_star.at(pool.points[i]), Era::Current});
        }
    }
    return discrepancy_1d(nn_fit(s), g, 0.0, 1.0, dist);
}

double brute_min(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                 const PiecewiseUniform1D& dist, const PrecedentSet& history,
                 const Pool1D& pool, std::size_t max_size = 64) {
    double best = 1e300;
    for (std::uint64_t mask = 0; mask < (1ull << pool.points.size()); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_size) continue;
        best = std::min(best, subset_error(f_star, g, dist, history, pool, mask));
    }
    return best;
}

Piecewise1DFn random_fn(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    Piecewise1DFn f;
    f.leftmost_label = rng() % 2 ? Label::Positive : Label::Negative;
    int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) f.boundaries.push_back(u(rng));
    std::sort(f.boundaries.begin(), f.boundaries.end());
    f.boundaries.erase(std::unique(f.boundaries.begin(), f.boundaries.end()), f.boundaries.end());
    return f;
}

PiecewiseUniform1D random_density(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 0.9);
    std::uniform_real_distribution<double> w(0.2, 2.0);
    PiecewiseUniform1D d;
    d.breakpoints = {0.0, u(rng), 1.0};
    std::sort(d.breakpoints.begin(), d.breakpoints.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < d.breakpoints.size(); ++i) {
        d.densities.push_back(w(rng));
        total += d.densities.back() * (d.breakpoints[i + 1] - d.breakpoints[i]);
    }
    for (double& v : d.densities) v /= total;
    return d;
}

}  // namespace

TEST_CASE("one filing flips a court that starts fully wrong") {
    auto g = fn(Label::Positive, {0.1});
    auto f_star = fn(Label::Negative, {0.1});  // the high court negates g
    auto uni = PiecewiseUniform1D::uniform();
    Pool1D pool = Pool1D::of({0.05});

    // empty precedent defaults to all-positive: error 0.9 against g
    CHECK(subset_error(f_star, g, uni, PrecedentSet{}, pool, 0) == doctest::Approx(0.9));

    auto r = solve_optimal(f_star, g, uni, PrecedentSet{}, pool);
    REQUIRE(r.chosen == std::vector<double>{0.05});
    CHECK(r.labels[0] == Label::Negative);
    CHECK(r.achieved_error == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("greedy is suboptimal on the shifted-boundary instance") {
    auto f_star = fn(Label::Positive, {0.1});
    auto g = fn(Label::Positive, {0.4});
    auto uni = PiecewiseUniform1D::uniform();
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
    Pool1D pool = Pool1D::of(grid);

    auto gr = greedy_strategy(f_star, g, uni, PrecedentSet{}, pool);
    REQUIRE(gr.steps.size() == 2);
    CHECK(gr.steps[0].picked == std::vector<double>{0.4});  // agreeing tie-break
    CHECK(gr.steps[0].error_after == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(gr.steps[1].picked == std::vector<double>{0.05});
    CHECK(gr.result.achieved_error == doctest::Approx(0.175).epsilon(1e-12));

    auto opt = solve_optimal(f_star, g, uni, PrecedentSet{}, pool);
    CHECK(opt.achieved_error <= 1e-12);
    // lexicographically smallest of the tied optimal pairs straddling 0.4
    CHECK(opt.chosen == std::vector<double>{0.0, 0.8});
    CHECK(opt.achieved_error < gr.result.achieved_error);
}

TEST_CASE("three-point pool: full and budgeted optima") {
    auto f_star = fn(Label::Positive, {0.1});
    auto g = fn(Label::Positive, {0.4});
    auto uni = PiecewiseUniform1D::uniform();
    Pool1D pool = Pool1D::of({0.05, 0.45, 0.75});

    auto opt = solve_optimal(f_star, g, uni, PrecedentSet{}, pool);
    CHECK(opt.chosen == std::vector<double>{0.05, 0.75});
    CHECK(opt.achieved_error <= 1e-12);

    auto k0 = solve_budgeted(f_star, g, uni, PrecedentSet{}, pool, 0);
    CHECK(k0.chosen.empty());
    CHECK(k0.achieved_error == doctest::Approx(0.6).epsilon(1e-12));

    auto k1 = solve_budgeted(f_star, g, uni, PrecedentSet{}, pool, 1);
    REQUIRE(k1.chosen.size() == 1);
    CHECK(k1.achieved_error == doctest::Approx(0.4).epsilon(1e-12));

    auto k2 = solve_budgeted(f_star, g, uni, PrecedentSet{}, pool, 2);
    CHECK(k2.chosen == std::vector<double>{0.05, 0.75});
    CHECK(k2.achieved_error <= 1e-12);
}

TEST_CASE("pair lookahead also stalls when two boundaries must move at once") {
    double t = 1.0 / 3.0;
    auto f_star = fn(Label::Positive, {t, 2 * t});
    auto g = f_star;
    auto uni = PiecewiseUniform1D::uniform();
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(i / 60.0);
    Pool1D pool = Pool1D::of(grid);

    auto gr = greedy_strategy(f_star, g, uni, PrecedentSet{}, pool);
    CHECK(gr.steps.empty());
    CHECK(gr.result.achieved_error == doctest::Approx(t).epsilon(1e-12));

    auto pr = pair_lookahead_strategy(f_star, g, uni, PrecedentSet{}, pool);
    CHECK(pr.steps.empty());
    CHECK(pr.result.achieved_error == doctest::Approx(t).epsilon(1e-12));

    auto opt = solve_optimal(f_star, g, uni, PrecedentSet{}, pool);
    CHECK(opt.achieved_error <= 1e-9);
    CHECK(opt.chosen.size() <= 4);
    CHECK(opt.achieved_error < pr.result.achieved_error);
}

TEST_CASE("no single filing improves on a symmetric notch") {
    auto f_star = fn(Label::Positive, {0.4, 0.6});
    auto g = f_star;
    auto uni = PiecewiseUniform1D::uniform();
    auto history = hist({{0.1, Label::Positive}, {0.9, Label::Positive}});
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
    Pool1D pool = Pool1D::of(grid);

    auto gr = greedy_strategy(f_star, g, uni, history, pool);
    CHECK(gr.steps.empty());
    CHECK(gr.result.achieved_error == doctest::Approx(0.2).epsilon(1e-12));

    auto opt = solve_optimal(f_star, g, uni, history, pool);
    CHECK(opt.achieved_error <= 1e-9);
}

TEST_CASE("empty pool and already-perfect court both select nothing") {
    auto uni = PiecewiseUniform1D::uniform();
    auto f = fn(Label::Positive, {});
    auto r = solve_optimal(f, f, uni, PrecedentSet{}, Pool1D::of({}));
    CHECK(r.chosen.empty());
    CHECK(r.achieved_error == 0.0);

    // every subset ties at zero error; the empty set wins the tie
    auto r2 = solve_optimal(f, f, uni, PrecedentSet{}, Pool1D::of({0.2, 0.5, 0.8}));
    CHECK(r2.chosen.empty());
    CHECK(r2.achieved_error == 0.0);
}

TEST_CASE("solve_optimal rejects history inconsistent with f_star") {
    auto uni = PiecewiseUniform1D::uniform();
    auto f = fn(Label::Positive, {});
    auto history = hist({{0.5, Label::Negative}});
    CHECK_THROWS_AS(solve_optimal(f, f, uni, history, Pool1D::of({0.5})), std::invalid_argument);
}

TEST_CASE("duplicate filing relabels the stale case") {
    auto uni = PiecewiseUniform1D::uniform();
    auto f = fn(Label::Positive, {});  // all-positive truth
    auto history = hist({{0.5, Label::Negative}});
    auto r = solve_with_relabel(f, f, uni, history, Pool1D::of({0.5}));
    CHECK(r.chosen == std::vector<double>{0.5});
    CHECK(r.labels[0] == Label::Positive);
    CHECK(r.achieved_error == 0.0);
}

TEST_CASE("DP matches the exhaustive oracle on random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto f_star = random_fn(rng);
        auto g = random_fn(rng);
        auto dist = trial % 2 ? random_density(rng) : PiecewiseUniform1D::uniform();

        std::vector<double> pts;
        int p = 1 + static_cast<int>(rng() % 9);
        while (static_cast<int>(pts.size()) < p) {
            double x = u(rng);
            pts.push_back(x);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        }
        Pool1D pool = Pool1D::of(pts);

        PrecedentSet history;
        int h = static_cast<int>(rng() % 4);
        for (int i = 0; i < h; ++i) {
            double x = u(rng);
            history.upsert({CasePoint{x}, f_star.at(x), Era::Current});
        }

        auto dp = solve_optimal(f_star, g, dist, history, pool);
        double brute = brute_min(f_star, g, dist, history, pool);
        CHECK(dp.achieved_error == doctest::Approx(brute).epsilon(1e-12));
        CHECK(subset_error(f_star, g, dist, history, pool, 0) >= dp.achieved_error - 1e-12);

        auto lib_oracle = oracle_optimal(f_star, g, dist, history, pool);
        CHECK(lib_oracle.achieved_error == doctest::Approx(brute).epsilon(1e-12));

        // greedy and pair lookahead never beat the optimum
        auto gr = greedy_strategy(f_star, g, dist, history, pool);
        CHECK(gr.result.achieved_error >= dp.achieved_error - 1e-12);
        auto pr = pair_lookahead_strategy(f_star, g, dist, history, pool);
        CHECK(pr.result.achieved_error >= dp.achieved_error - 1e-12);
    }
}

TEST_CASE("budgeted DP matches a size-capped oracle") {
    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 120; ++trial) {
        auto f_star = random_fn(rng);
        auto g = random_fn(rng);
        auto dist = PiecewiseUniform1D::uniform();
        std::vector<double> pts;
        int p = 2 + static_cast<int>(rng() % 7);
        while (static_cast<int>(pts.size()) < p) {
            pts.push_back(u(rng));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        }
        Pool1D pool = Pool1D::of(pts);
        std::size_t k = rng() % (p + 1);

        auto dp = solve_budgeted(f_star, g, dist, PrecedentSet{}, pool, k);
        CHECK(dp.chosen.size() <= k);
        double brute = brute_min(f_star, g, dist, PrecedentSet{}, pool, k);
        CHECK(dp.achieved_error == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("relabel DP matches an override-aware oracle") {
    std::mt19937_64 rng(626);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 120; ++trial) {
        auto f_star = random_fn(rng);
        auto g = random_fn(rng);
        auto dist = PiecewiseUniform1D::uniform();

        std::vector<double> pts;
        int p = 1 + static_cast<int>(rng() % 8);
        while (static_cast<int>(pts.size()) < p) {
            pts.push_back(u(rng));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        }
        Pool1D pool = Pool1D::of(pts);

        // stale history: arbitrary labels, sometimes sitting on pool points
        PrecedentSet history;
        int h = static_cast<int>(rng() % 4);
        for (int i = 0; i < h; ++i) {
            double x = (rng() % 3 == 0) ? pts[rng() % pts.size()] : u(rng);
            history.upsert({CasePoint{x}, rng() % 2 ? Label::Positive : Label::Negative,
                            Era::Current});
        }

        auto dp = solve_with_relabel(f_star, g, dist, history, pool);
        double brute = brute_min(f_star, g, dist, history, pool);
        CHECK(dp.achieved_error == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("nonuniform densities leave the DP exact") {
    // The DP must integrate segment costs under the density itself; midpoint
    // boundaries do not survive a CDF rescale, so this guards that path.
    std::mt19937_64 rng(737);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 60; ++trial) {
        auto f_star = random_fn(rng);
        auto g = random_fn(rng);
        auto dist = random_density(rng);
        std::vector<double> pts;
        while (pts.size() < 6) {
            pts.push_back(u(rng));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        }
        Pool1D pool = Pool1D::of(pts);
        auto dp = solve_optimal(f_star, g, dist, PrecedentSet{}, pool);
        CHECK(dp.achieved_error ==
              doctest::Approx(brute_min(f_star, g, dist, PrecedentSet{}, pool)).epsilon(1e-12));
    }
}
