#include "precedent/litigate1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace precedent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Pt {
    double x;
    Label lab;
};

// Nearest-neighbor boundaries of a coordinate-sorted, duplicate-free list.
void nn_of_sorted(const std::vector<Pt>& pts, double lo, double hi,
                  Label& leftmost, std::vector<double>& boundaries) {
    boundaries.clear();
    if (pts.empty()) {
        leftmost = Label::Positive;
        return;
    }
    leftmost = pts.front().lab;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i].lab == pts[i + 1].lab) continue;
        double mid = 0.5 * (pts[i].x + pts[i + 1].x);
        boundaries.push_back(std::nextafter(mid, kInf));
    }
    (void)lo;
    (void)hi;
}

// history merged with extra chosen points; a chosen point replaces a
// historical case at the exact same coordinate
void merge_override(const std::vector<Pt>& hist, const Pt* extra, std::size_t n_extra,
                    std::vector<Pt>& out) {
    out.clear();
    std::size_t h = 0, e = 0;
    while (h < hist.size() || e < n_extra) {
        if (e == n_extra) {
            out.push_back(hist[h++]);
        } else if (h == hist.size()) {
            out.push_back(extra[e++]);
        } else if (hist[h].x < extra[e].x) {
            out.push_back(hist[h++]);
        } else if (hist[h].x > extra[e].x) {
            out.push_back(extra[e++]);
        } else {
            out.push_back(extra[e++]);  // duplicate filing carries the new label
            ++h;
        }
    }
}

// Disagreement mass of two alternating label functions on [a, b] under a
// piecewise-uniform density (allocation-free inner loop of the DP). The DP
// runs in original coordinates: the learner's midpoint boundaries do not
// commute with a CDF rescale when the density is non-uniform, so the cost of
// each segment is integrated exactly instead.
double disc_measure(Label fl, const std::vector<double>& fb, Label gl,
                    const std::vector<double>& gb, double a, double b,
                    const PiecewiseUniform1D& dist) {
    std::size_t i = std::upper_bound(fb.begin(), fb.end(), a) - fb.begin();
    std::size_t j = std::upper_bound(gb.begin(), gb.end(), a) - gb.begin();
    Label curF = (i % 2 == 0) ? fl : flip(fl);
    Label curG = (j % 2 == 0) ? gl : flip(gl);
    double pos = a, total = 0.0;
    while (pos < b) {
        double next = b;
        if (i < fb.size() && fb[i] < next) next = fb[i];
        if (j < gb.size() && gb[j] < next) next = gb[j];
        if (curF != curG) total += dist.mass(pos, next);
        pos = next;
        if (i < fb.size() && fb[i] == pos) {
            curF = flip(curF);
            ++i;
        }
        if (j < gb.size() && gb[j] == pos) {
            curG = flip(curG);
            ++j;
        }
    }
    return total;
}

struct Ctx {
    double lo = 0.0, hi = 1.0;
    const Piecewise1DFn* f_star = nullptr;
    const Piecewise1DFn* g = nullptr;
    const PiecewiseUniform1D* dist = nullptr;
    std::vector<Pt> hist_orig;           // sorted original-space history
    std::vector<double> pool;            // original coordinates, ascending
    std::vector<Label> pool_labels;      // f*(pool point)
};

Ctx make_ctx(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
             const PiecewiseUniform1D& dist, const PrecedentSet& history,
             const Pool1D& pool, bool require_consistent) {
    dist.validate();
    pool.validate();
    Ctx ctx;
    ctx.lo = dist.lo();
    ctx.hi = dist.hi();
    ctx.f_star = &f_star;
    ctx.g = &g;
    ctx.dist = &dist;
    for (const auto* fn : {&f_star, &g}) {
        if (fn->domain_lo != ctx.lo || fn->domain_hi != ctx.hi) {
            throw std::invalid_argument("function domain must match the distribution domain");
        }
    }
    for (const auto& c : history.cases()) {
        if (c.point.dim() != 1) throw std::invalid_argument("1D solver requires 1D history");
        double x = c.point[0];
        if (x < ctx.lo || x > ctx.hi) throw std::invalid_argument("history point outside domain");
        if (require_consistent && f_star.at(x) != c.label) {
            throw std::invalid_argument("history is inconsistent with f_star");
        }
        ctx.hist_orig.push_back({x, c.label});
    }
    std::sort(ctx.hist_orig.begin(), ctx.hist_orig.end(),
              [](const Pt& a, const Pt& b) { return a.x < b.x; });
    for (double x : pool.points) {
        if (x < ctx.lo || x > ctx.hi) throw std::invalid_argument("pool point outside domain");
        ctx.pool.push_back(x);
        ctx.pool_labels.push_back(f_star.at(x));
    }
    return ctx;
}

// Finalize a chosen index set in the original space.
SelectionResult finish(const Ctx& ctx, const std::vector<int>& subset) {
    SelectionResult r;
    std::vector<Pt> extra;
    for (int idx : subset) {
        r.chosen.push_back(ctx.pool[idx]);
        r.labels.push_back(ctx.pool_labels[idx]);
        extra.push_back({ctx.pool[idx], ctx.pool_labels[idx]});
    }
    std::vector<Pt> merged;
    merge_override(ctx.hist_orig, extra.data(), extra.size(), merged);
    Label leftmost;
    std::vector<double> bounds;
    nn_of_sorted(merged, ctx.lo, ctx.hi, leftmost, bounds);
    r.learned.leftmost_label = leftmost;
    r.learned.boundaries = bounds;
    r.learned.domain_lo = ctx.lo;
    r.learned.domain_hi = ctx.hi;
    r.achieved_error = discrepancy_1d(r.learned, *ctx.g, ctx.lo, ctx.hi, *ctx.dist);
    return r;
}

// error of an arbitrary subset, evaluated directly in the original space
double direct_error(const Ctx& ctx, const std::vector<Pt>& extra_sorted,
                    std::vector<Pt>& scratch_merged, std::vector<double>& scratch_bounds) {
    merge_override(ctx.hist_orig, extra_sorted.data(), extra_sorted.size(), scratch_merged);
    Label leftmost;
    nn_of_sorted(scratch_merged, ctx.lo, ctx.hi, leftmost, scratch_bounds);
    Piecewise1DFn f;
    f.leftmost_label = leftmost;
    f.boundaries = scratch_bounds;
    f.domain_lo = ctx.lo;
    f.domain_hi = ctx.hi;
    return discrepancy_1d(f, *ctx.g, ctx.lo, ctx.hi, *ctx.dist);
}

// --- the Algorithm-1 DP over the rescaled instance ---

struct DpTables {
    std::vector<double> T;
    std::vector<int> prev;  // -1 when P[j] is the only chosen point
};

std::vector<int> reconstruct(const std::vector<int>& prev, int j) {
    std::vector<int> out;
    for (int cur = j; cur != -1; cur = prev[cur]) out.push_back(cur);
    std::reverse(out.begin(), out.end());
    return out;
}

// Unbudgeted DP; returns the chosen index set (possibly empty).
std::vector<int> dp_solve(const Ctx& ctx) {
    const std::size_t p = ctx.pool.size();
    const Label gl = ctx.g->leftmost_label;
    const std::vector<double>& gb = ctx.g->boundaries;
    const PiecewiseUniform1D& dist = *ctx.dist;

    Label hl;
    std::vector<double> hist_bounds;
    nn_of_sorted(ctx.hist_orig, ctx.lo, ctx.hi, hl, hist_bounds);
    double err_no_points = disc_measure(hl, hist_bounds, gl, gb, ctx.lo, ctx.hi, dist);
    if (p == 0) return {};

    // per-i single-point fits and their truncated errors
    std::vector<Label> fit_l(p);
    std::vector<std::vector<double>> fit_b(p);
    std::vector<double> err_only(p), err_after_no_next(p);
    std::vector<Pt> merged;
    for (std::size_t i = 0; i < p; ++i) {
        Pt one{ctx.pool[i], ctx.pool_labels[i]};
        merge_override(ctx.hist_orig, &one, 1, merged);
        nn_of_sorted(merged, ctx.lo, ctx.hi, fit_l[i], fit_b[i]);
        err_only[i] = disc_measure(fit_l[i], fit_b[i], gl, gb, ctx.lo, ctx.hi, dist);
        err_after_no_next[i] =
            disc_measure(fit_l[i], fit_b[i], gl, gb, ctx.pool[i], ctx.hi, dist);
    }

    DpTables t;
    t.T.assign(p, kInf);
    t.prev.assign(p, -1);
    std::vector<double> pair_bounds;
    Label pair_l;
    for (std::size_t j = 0; j < p; ++j) {
        t.T[j] = err_only[j];
        t.prev[j] = -1;
        for (std::size_t i = 0; i < j; ++i) {
            Pt two[2] = {{ctx.pool[i], ctx.pool_labels[i]}, {ctx.pool[j], ctx.pool_labels[j]}};
            merge_override(ctx.hist_orig, two, 2, merged);
            nn_of_sorted(merged, ctx.lo, ctx.hi, pair_l, pair_bounds);
            double err_with =
                disc_measure(pair_l, pair_bounds, gl, gb, ctx.pool[i], ctx.hi, dist);
            double cand = t.T[i] - err_after_no_next[i] + err_with;
            if (cand < t.T[j]) {
                t.T[j] = cand;
                t.prev[j] = static_cast<int>(i);
            } else if (cand == t.T[j]) {
                auto challenger = reconstruct(t.prev, static_cast<int>(i));
                std::vector<int> incumbent =
                    t.prev[j] == -1 ? std::vector<int>{} : reconstruct(t.prev, t.prev[j]);
                if (challenger < incumbent) t.prev[j] = static_cast<int>(i);
            }
        }
    }

    double best = kInf;
    int best_j = -1;
    for (std::size_t j = 0; j < p; ++j) {
        if (t.T[j] < best) {
            best = t.T[j];
            best_j = static_cast<int>(j);
        } else if (t.T[j] == best && best_j >= 0) {
            auto challenger = reconstruct(t.prev, static_cast<int>(j));
            auto incumbent = reconstruct(t.prev, best_j);
            if (challenger < incumbent) best_j = static_cast<int>(j);
        }
    }
    if (err_no_points <= best) return {};
    return reconstruct(t.prev, best_j);
}

// Budgeted DP: T[r][j] = min error using <= r points with P[j] rightmost.
std::vector<int> dp_solve_budgeted(const Ctx& ctx, std::size_t k) {
    const std::size_t p = ctx.pool.size();
    if (k == 0 || p == 0) return {};
    k = std::min(k, p);

    const Label gl = ctx.g->leftmost_label;
    const std::vector<double>& gb = ctx.g->boundaries;
    const PiecewiseUniform1D& dist = *ctx.dist;
    Label hl;
    std::vector<double> hist_bounds;
    nn_of_sorted(ctx.hist_orig, ctx.lo, ctx.hi, hl, hist_bounds);
    double err_no_points = disc_measure(hl, hist_bounds, gl, gb, ctx.lo, ctx.hi, dist);

    std::vector<Label> fit_l(p);
    std::vector<std::vector<double>> fit_b(p);
    std::vector<double> err_only(p), err_after_no_next(p);
    std::vector<Pt> merged;
    for (std::size_t i = 0; i < p; ++i) {
        Pt one{ctx.pool[i], ctx.pool_labels[i]};
        merge_override(ctx.hist_orig, &one, 1, merged);
        nn_of_sorted(merged, ctx.lo, ctx.hi, fit_l[i], fit_b[i]);
        err_only[i] = disc_measure(fit_l[i], fit_b[i], gl, gb, ctx.lo, ctx.hi, dist);
        err_after_no_next[i] =
            disc_measure(fit_l[i], fit_b[i], gl, gb, ctx.pool[i], ctx.hi, dist);
    }

    // prev[r][j]: index of the previous chosen point in the (r-1) row, or -1
    // when P[j] is the only chosen point.
    std::vector<std::vector<double>> T(k + 1, std::vector<double>(p, kInf));
    std::vector<std::vector<int>> prev(k + 1, std::vector<int>(p, -1));

    auto recon = [&](std::size_t r, int j) {
        std::vector<int> out;
        while (j != -1) {
            out.push_back(j);
            j = prev[r][j];
            --r;
        }
        std::reverse(out.begin(), out.end());
        return out;
    };

    std::vector<double> pair_bounds;
    Label pair_l;
    for (std::size_t r = 1; r <= k; ++r) {
        for (std::size_t j = 0; j < p; ++j) {
            T[r][j] = err_only[j];
            prev[r][j] = -1;
            if (r >= 2) {
                for (std::size_t i = 0; i < j; ++i) {
                    Pt two[2] = {{ctx.pool[i], ctx.pool_labels[i]},
                                 {ctx.pool[j], ctx.pool_labels[j]}};
                    merge_override(ctx.hist_orig, two, 2, merged);
                    nn_of_sorted(merged, ctx.lo, ctx.hi, pair_l, pair_bounds);
                    double err_with =
                        disc_measure(pair_l, pair_bounds, gl, gb, ctx.pool[i], ctx.hi, dist);
                    double cand = T[r - 1][i] - err_after_no_next[i] + err_with;
                    if (cand < T[r][j]) {
                        T[r][j] = cand;
                        prev[r][j] = static_cast<int>(i);
                    } else if (cand == T[r][j]) {
                        auto challenger = recon(r - 1, static_cast<int>(i));
                        std::vector<int> incumbent =
                            prev[r][j] == -1 ? std::vector<int>{}
                                             : recon(r - 1, prev[r][j]);
                        if (challenger < incumbent) prev[r][j] = static_cast<int>(i);
                    }
                }
            }
        }
    }

    double best = kInf;
    std::size_t best_r = 1;
    int best_j = -1;
    for (std::size_t r = 1; r <= k; ++r) {
        for (std::size_t j = 0; j < p; ++j) {
            if (T[r][j] < best) {
                best = T[r][j];
                best_r = r;
                best_j = static_cast<int>(j);
            } else if (T[r][j] == best && best_j >= 0) {
                auto challenger = recon(r, static_cast<int>(j));
                auto incumbent = recon(best_r, best_j);
                if (challenger < incumbent) {
                    best_r = r;
                    best_j = static_cast<int>(j);
                }
            }
        }
    }
    if (best_j < 0 || err_no_points <= best) return {};
    return recon(best_r, best_j);
}

}  // namespace

Pool1D Pool1D::of(std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    Pool1D p{std::move(pts)};
    p.validate();
    return p;
}

void Pool1D::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw std::invalid_argument("pool points must be finite");
        if (i > 0 && !(points[i - 1] < points[i])) {
            throw std::invalid_argument("pool points must be strictly increasing");
        }
    }
}

SelectionResult solve_optimal(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                              const PiecewiseUniform1D& dist, const PrecedentSet& history,
                              const Pool1D& pool) {
    Ctx ctx = make_ctx(f_star, g, dist, history, pool, /*require_consistent=*/true);
    return finish(ctx, dp_solve(ctx));
}

SelectionResult solve_budgeted(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                               const PiecewiseUniform1D& dist, const PrecedentSet& history,
                               const Pool1D& pool, std::size_t k) {
    Ctx ctx = make_ctx(f_star, g, dist, history, pool, /*require_consistent=*/true);
    return finish(ctx, dp_solve_budgeted(ctx, k));
}

SelectionResult solve_with_relabel(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                                   const PiecewiseUniform1D& dist, const PrecedentSet& history,
                                   const Pool1D& pool) {
    Ctx ctx = make_ctx(f_star, g, dist, history, pool, /*require_consistent=*/false);
    return finish(ctx, dp_solve(ctx));
}

SelectionResult oracle_optimal(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                               const PiecewiseUniform1D& dist, const PrecedentSet& history,
                               const Pool1D& pool) {
    if (pool.points.size() > 20) {
        throw std::invalid_argument("oracle_optimal is capped at |pool| <= 20");
    }
    Ctx ctx = make_ctx(f_star, g, dist, history, pool, /*require_consistent=*/false);
    const std::size_t p = ctx.pool.size();
    double best = kInf;
    std::vector<int> best_subset;
    std::vector<Pt> extra, scratch_m;
    std::vector<double> scratch_b;
    std::vector<int> subset;
    for (std::uint64_t mask = 0; mask < (1ull << p); ++mask) {
        extra.clear();
        subset.clear();
        for (std::size_t i = 0; i < p; ++i) {
            if (mask & (1ull << i)) {
                extra.push_back({ctx.pool[i], ctx.pool_labels[i]});
                subset.push_back(static_cast<int>(i));
            }
        }
        double e = direct_error(ctx, extra, scratch_m, scratch_b);
        if (e < best || (e == best && subset < best_subset)) {
            best = e;
            best_subset = subset;
        }
    }
    return finish(ctx, best_subset);
}

namespace {

StrategyResult stepwise_strategy(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                                 const PiecewiseUniform1D& dist, const PrecedentSet& history,
                                 const Pool1D& pool, bool pairs) {
    Ctx ctx = make_ctx(f_star, g, dist, history, pool, /*require_consistent=*/false);
    const std::size_t p = ctx.pool.size();
    std::vector<bool> taken(p, false);
    std::vector<int> chosen_idx;
    std::vector<Pt> chosen, trial, scratch_m;
    std::vector<double> scratch_b;

    auto with_extra = [&](std::initializer_list<int> add) {
        trial = chosen;
        for (int i : add) trial.push_back({ctx.pool[i], ctx.pool_labels[i]});
        std::sort(trial.begin(), trial.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });
        return direct_error(ctx, trial, scratch_m, scratch_b);
    };

    StrategyResult out;
    double cur = with_extra({});
    while (true) {
        double best = kInf;
        int bi = -1, bj = -1;
        bool best_pref = false;
        if (!pairs) {
            for (std::size_t i = 0; i < p; ++i) {
                if (taken[i]) continue;
                double e = with_extra({static_cast<int>(i)});
                // tie-break toward points g labels the same way as f*
                bool pref = ctx.g->at(ctx.pool[i]) == ctx.pool_labels[i];
                if (e < best || (e == best && pref && !best_pref)) {
                    best = e;
                    bi = static_cast<int>(i);
                    best_pref = pref;
                }
            }
        } else {
            for (std::size_t i = 0; i < p; ++i) {
                if (taken[i]) continue;
                for (std::size_t j = i + 1; j < p; ++j) {
                    if (taken[j]) continue;
                    double e = with_extra({static_cast<int>(i), static_cast<int>(j)});
                    if (e < best) {
                        best = e;
                        bi = static_cast<int>(i);
                        bj = static_cast<int>(j);
                    }
                }
            }
        }
        if (bi < 0 || !(best < cur - 1e-12)) break;  // no strict improvement
        StrategyStep step;
        taken[bi] = true;
        chosen_idx.push_back(bi);
        chosen.push_back({ctx.pool[bi], ctx.pool_labels[bi]});
        step.picked.push_back(ctx.pool[bi]);
        if (pairs) {
            taken[bj] = true;
            chosen_idx.push_back(bj);
            chosen.push_back({ctx.pool[bj], ctx.pool_labels[bj]});
            step.picked.push_back(ctx.pool[bj]);
        }
        std::sort(chosen.begin(), chosen.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });
        cur = best;
        step.error_after = best;
        out.steps.push_back(std::move(step));
    }
    std::sort(chosen_idx.begin(), chosen_idx.end());
    out.result = finish(ctx, chosen_idx);
    return out;
}

}  // namespace

StrategyResult greedy_strategy(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                               const PiecewiseUniform1D& dist, const PrecedentSet& history,
                               const Pool1D& pool) {
    return stepwise_strategy(f_star, g, dist, history, pool, /*pairs=*/false);
}

StrategyResult pair_lookahead_strategy(const Piecewise1DFn& f_star, const Piecewise1DFn& g,
                                       const PiecewiseUniform1D& dist, const PrecedentSet& history,
                                       const Pool1D& pool) {
    return stepwise_strategy(f_star, g, dist, history, pool, /*pairs=*/true);
}

}  // namespace precedent
