#include "precedent/litigatesvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "precedent/court.hpp"

namespace precedent {

namespace {

constexpr double kCond = 1e-9;   // strictness tolerance for Theorem-2 conditions
constexpr double kRepro = 1e-6;  // reproduction tolerance on the learned separator

std::vector<double> scaled(const std::vector<double>& v, double s) {
    std::vector<double> out(v);
    for (double& x : out) x *= s;
    return out;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

bool same_separator(const LinearSeparator& a, const LinearSeparator& b, double tol) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (std::abs(a.normal[i] - b.normal[i]) > tol) return false;
    }
    return std::abs(a.offset - b.offset) <= tol;
}

void require_consistent_history(const LinearSeparator& f_star, const PrecedentSet& history) {
    if (!history.empty() && history.dim() != f_star.dim()) {
        throw std::invalid_argument("history dimension mismatch");
    }
    for (const auto& c : history.cases()) {
        if (f_star.at(c.point) != c.label) {
            throw std::invalid_argument("history is not labeled consistently with f_star");
        }
    }
}

/// Minimum-norm point lying on both hyperplanes (they must not be parallel).
CasePoint plane_intersection_foot(const LinearSeparator& f, const LinearSeparator& g) {
    double c = dot(f.normal, g.normal);
    double det = 1.0 - c * c;
    // x = a*w_f + b*w_g with w_f.x = -b_f and w_g.x = -b_g
    double a = (-f.offset + c * g.offset) / det;
    double b = (-g.offset + c * f.offset) / det;
    std::vector<double> x(f.dim(), 0.0);
    axpy(x, a, f.normal);
    axpy(x, b, g.normal);
    return CasePoint{std::move(x)};
}

/// Orthonormal basis of R^d whose first vectors are the given (already
/// orthonormal) seeds, completed from the standard basis by Gram-Schmidt.
std::vector<std::vector<double>> complete_basis(std::vector<std::vector<double>> seed,
                                                std::size_t d) {
    for (std::size_t e = 0; e < d && seed.size() < d; ++e) {
        std::vector<double> v(d, 0.0);
        v[e] = 1.0;
        for (const auto& u : seed) axpy(v, -dot(v, u), u);
        double n = norm2(v);
        if (n > 1e-9) {
            for (double& x : v) x /= n;
            seed.push_back(std::move(v));
        }
    }
    return seed;
}

}  // namespace

AchievabilityReport check_achievable(const LinearSeparator& f_star, const LinearSeparator& g,
                                     const PrecedentSet& history) {
    if (f_star.dim() != g.dim()) throw std::invalid_argument("separator dimension mismatch");
    require_consistent_history(f_star, history);

    AchievabilityReport rep;
    double cosang = std::clamp(dot(g.normal, f_star.normal), -1.0, 1.0);
    rep.theta_deg = std::acos(cosang) * 180.0 / M_PI;

    if (cosang >= 1.0 - kCond) {
        rep.kind = AchievableCase::Parallel;
        rep.delta = std::abs(f_star.offset - g.offset);
        for (const auto& c : history.cases()) {
            if (std::abs(g.signed_value(c.point)) < rep.delta - kCond) {
                rep.blockers.push_back(c);
            }
        }
        rep.achievable = rep.blockers.empty();
        if (!rep.achievable) rep.reason = "historical data closer than delta to g";
        return rep;
    }
    if (cosang > kCond) {
        rep.kind = AchievableCase::Intersecting;
        for (const auto& c : history.cases()) {
            bool disagreement = f_star.at(c.point) != g.at(c.point);
            bool on_plane = std::abs(g.signed_value(c.point)) < kCond;
            if (disagreement || on_plane) rep.blockers.push_back(c);
        }
        rep.achievable = rep.blockers.empty();
        if (!rep.achievable) rep.reason = "historical data in the disagreement region or on g";
        return rep;
    }
    rep.kind = AchievableCase::Blocked;
    rep.reason = "w_g must have positive inner product with w_{f*}";
    return rep;
}

TwoPointPlan teach_two_points(const LinearSeparator& f_star, const LinearSeparator& g,
                              const PrecedentSet& history) {
    AchievabilityReport rep = check_achievable(f_star, g, history);
    if (!rep.achievable) throw NotAchievable(std::move(rep));

    double min_hist = std::numeric_limits<double>::infinity();
    for (const auto& c : history.cases()) {
        min_hist = std::min(min_hist, std::abs(g.signed_value(c.point)));
    }

    CasePoint x0;
    double t;
    if (rep.kind == AchievableCase::Parallel) {
        x0 = CasePoint{scaled(g.normal, -g.offset)};
        t = history.empty() ? rep.delta + 1.0 : std::max(min_hist / 2.0, rep.delta);
    } else {
        x0 = plane_intersection_foot(f_star, g);
        t = history.empty() ? 1.0 : min_hist / 2.0;
    }

    auto build = [&](double step) {
        std::vector<double> plus = x0.coords, minus = x0.coords;
        axpy(plus, step, g.normal);
        axpy(minus, -step, g.normal);
        return std::pair<CasePoint, CasePoint>{CasePoint{std::move(plus)},
                                               CasePoint{std::move(minus)}};
    };
    auto [xp, xm] = build(t);
    if (f_star.at(xp) != Label::Positive || f_star.at(xm) != Label::Negative) {
        // the delta floor put the negative point on f*'s boundary; back off
        t = (rep.delta + (history.empty() ? rep.delta + 2.0 : min_hist)) / 2.0;
        std::tie(xp, xm) = build(t);
    }

    TwoPointPlan plan;
    plan.points = {xp, xm};
    plan.expected_labels = {f_star.at(xp), f_star.at(xm)};

    PrecedentSet augmented = history;
    augmented.upsert({xp, plan.expected_labels[0], Era::Current});
    augmented.upsert({xm, plan.expected_labels[1], Era::Current});
    SvmModel m = svm_fit(augmented);
    bool two_svs = m.support_vectors.size() == 2 &&
                   ((m.support_vectors[0].point == xp && m.support_vectors[1].point == xm) ||
                    (m.support_vectors[0].point == xm && m.support_vectors[1].point == xp));
    if (m.degenerate || !same_separator(m.separator, g, kRepro) || !two_svs) {
        throw std::runtime_error("two-point teaching construction failed verification");
    }
    return plan;
}

namespace {

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

}  // namespace

BestAchievableResult best_achievable(const LinearSeparator& f_star, const LinearSeparator& g,
                                     const PrecedentSet& history, const SamplerSpec& sampler,
                                     double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
    if (sampler.dim() != f_star.dim()) throw std::invalid_argument("sampler dimension mismatch");

    if (auto rep = check_achievable(f_star, g, history); rep.achievable) {
        return {g, 0.0, false};
    }

    const std::size_t d = f_star.dim();
    const std::size_t n = default_sample_size(d, epsilon);
    std::vector<CasePoint> sample = sampler.sample(n);
    std::vector<Label> g_labels(n);
    for (std::size_t i = 0; i < n; ++i) g_labels[i] = g.at(sample[i]);

    bool have = false;
    LinearSeparator best;
    double best_err = 0.0, best_theta = 0.0;

    auto consider = [&](const PrecedentSet& training) {
        SvmModel m;
        try {
            m = svm_fit(training);
        } catch (const InconsistentPrecedent&) {
            return;
        }
        if (m.degenerate) return;
        auto rep = check_achievable(f_star, m.separator, history);
        if (!rep.achievable) return;
        std::size_t dis = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (m.separator.at(sample[i]) != g_labels[i]) ++dis;
        }
        double err = static_cast<double>(dis) / static_cast<double>(n);
        auto key = std::tuple(err, rep.theta_deg, m.separator.normal, m.separator.offset);
        if (!have || key < std::tuple(best_err, best_theta, best.normal, best.offset)) {
            have = true;
            best = m.separator;
            best_err = err;
            best_theta = rep.theta_deg;
        }
    };

    consider(history);
    for (std::size_t s = 1; s <= d + 1 && s <= n; ++s) {
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        do {
            PrecedentSet training = history;
            for (std::size_t i : idx) {
                training.upsert({sample[i], f_star.at(sample[i]), Era::Current});
            }
            consider(training);
        } while (next_combination(idx, n));
    }

    if (!have) {
        std::size_t dis = 0;
        for (Label l : g_labels) {
            if (l != Label::Positive) ++dis;
        }
        return {ConstantRule{Label::Positive}, static_cast<double>(dis) / n, true};
    }
    return {best, best_err, false};
}

std::vector<PoolFunction> enumerate_pool_functions(const LinearSeparator& f_star,
                                                   const PrecedentSet& history,
                                                   const std::vector<CasePoint>& pool) {
    if (pool.size() > 25) throw std::invalid_argument("pool enumeration is capped at 25 points");
    const std::size_t d = f_star.dim();
    if (d > 4) throw std::invalid_argument("pool enumeration is capped at 4 dimensions");

    std::vector<PoolFunction> out;
    auto seen = [&](const CourtRule& rule) {
        for (const auto& pf : out) {
            if (const auto* a = std::get_if<ConstantRule>(&pf.rule)) {
                if (const auto* b = std::get_if<ConstantRule>(&rule); b && a->label == b->label) {
                    return true;
                }
            } else if (const auto* sa = std::get_if<LinearSeparator>(&pf.rule)) {
                if (const auto* sb = std::get_if<LinearSeparator>(&rule);
                    sb && same_separator(*sa, *sb, kCond)) {
                    return true;
                }
            }
        }
        return false;
    };

    for (std::size_t s = 0; s <= std::min(d + 1, pool.size()); ++s) {
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        bool more = !idx.empty() || s == 0;
        do {
            PrecedentSet training = history;
            std::vector<CasePoint> subset;
            for (std::size_t i : idx) {
                training.upsert({pool[i], f_star.at(pool[i]), Era::Current});
                subset.push_back(pool[i]);
            }
            SvmModel m;
            try {
                m = svm_fit(training);
            } catch (const InconsistentPrecedent&) {
                continue;
            }
            CourtRule rule = m.rule();
            if (!seen(rule)) out.push_back({std::move(rule), std::move(subset)});
        } while (s > 0 && next_combination(idx, pool.size()));
        (void)more;
    }
    return out;
}

OverturnPlan teach_with_overturning(const LinearSeparator& f_star, const LinearSeparator& g,
                                    const PrecedentSet& history_with_stale,
                                    const OverturnTeachConfig& config) {
    if (f_star.dim() != g.dim()) throw std::invalid_argument("separator dimension mismatch");
    const std::size_t d = f_star.dim();
    if (d < 2) throw std::invalid_argument("overturning construction requires d >= 2");
    if (config.retries < 1) throw std::invalid_argument("retries must be >= 1");

    PrecedentSet current;
    std::vector<LabeledCase> stale;
    for (const auto& c : history_with_stale.cases()) {
        if (c.era == Era::Stale) {
            stale.push_back(c);
        } else {
            current.upsert(c);
        }
    }

    AchievabilityReport rep = check_achievable(f_star, g, current);
    if (!rep.achievable) {
        throw std::invalid_argument("g is not achievable relative to the current-era history: " +
                                    rep.reason);
    }
    for (const auto& c : stale) {
        bool against_f = f_star.at(c.point) != c.label;
        bool against_g = g.at(c.point) != c.label;
        if (!against_f) {
            throw std::invalid_argument("stale case agrees with f_star; nothing to overturn");
        }
        if (!against_g && !config.relaxed_disagreement) {
            throw std::invalid_argument(
                "stale case lies in the f*/g disagreement region (label matches g); "
                "enable relaxed_disagreement to allow it");
        }
    }

    double extent = 1.0;
    for (const auto& c : history_with_stale.cases()) {
        for (double v : c.point.coords) extent = std::max(extent, std::abs(v));
    }
    extent = std::max({extent, std::abs(f_star.offset), std::abs(g.offset)});

    double eps0 = config.epsilon > 0.0 ? config.epsilon : 1e-3 * extent;
    double alpha0 = config.alpha > 0.0 ? config.alpha : 1e3 * extent;
    // the "unboundedly far" pair points only need to dominate the data extent;
    // the symmetric-pair argument pins the normal for any magnitude, and
    // keeping the spread/margin ratio near 1e6 keeps the fits well conditioned
    double big_m0 = config.big_m > 0.0 ? config.big_m : 1e3 * extent;

    for (int attempt = 0; attempt < config.retries; ++attempt) {
        double scale = std::pow(10.0, attempt);
        double eps = eps0 / scale, alpha = alpha0 * scale, big_m = big_m0 * scale;

        std::vector<CasePoint> points;
        if (stale.empty()) {
            // nothing to overturn: the two teaching points suffice
            if (rep.kind == AchievableCase::Parallel) {
                double shift = rep.delta + eps;
                std::vector<double> plus = scaled(g.normal, -g.offset);
                std::vector<double> minus = plus;
                axpy(plus, shift, g.normal);
                axpy(minus, -shift, g.normal);
                points.push_back(CasePoint{std::move(minus)});
                points.push_back(CasePoint{std::move(plus)});
            } else {
                CasePoint origin = plane_intersection_foot(f_star, g);
                std::vector<double> plus = origin.coords, minus = origin.coords;
                axpy(plus, eps, g.normal);
                axpy(minus, -eps, g.normal);
                points.push_back(CasePoint{std::move(minus)});
                points.push_back(CasePoint{std::move(plus)});
            }
        } else if (rep.kind == AchievableCase::Intersecting) {
            // frame: origin on both hyperplanes, u1 = w_{f*}, u2 spans w_g's
            // remaining component; f* is the halfspace coord1 >= 0
            CasePoint origin = plane_intersection_foot(f_star, g);
            std::vector<double> u1 = f_star.normal;
            std::vector<double> u2 = g.normal;
            axpy(u2, -dot(g.normal, u1), u1);
            double s_theta = norm2(u2);
            for (double& v : u2) v /= s_theta;
            auto basis = complete_basis({u1, u2}, d);
            double c_theta = dot(g.normal, u1);

            auto world = [&](const std::vector<double>& frame) {
                std::vector<double> x = origin.coords;
                for (std::size_t i = 0; i < basis.size(); ++i) axpy(x, frame[i], basis[i]);
                return CasePoint{std::move(x)};
            };
            std::vector<double> wg(d, 0.0), wperp(d, 0.0);
            wg[0] = c_theta;
            wg[1] = s_theta;
            wperp[0] = s_theta;
            wperp[1] = -c_theta;

            // sweep points first (no removals needed for them), teaching last.
            // The far point is nudged off f*'s hyperplane by eps: filed exactly
            // on the plane, its court label would be decided by rounding noise
            // in the frame-to-world transform (which grows with alpha).
            std::vector<double> e2(d, 0.0);
            e2[0] = eps;
            e2[1] = alpha;
            points.push_back(world(e2));

            // stale negatives sitting exactly on f*'s boundary need an anchor
            // between them and the frame origin
            double c_closest = std::numeric_limits<double>::infinity();
            double side = 1.0;
            for (const auto& c : stale) {
                if (std::abs(f_star.signed_value(c.point)) > kCond) continue;
                std::vector<double> rel = c.point.coords;
                axpy(rel, -1.0, origin.coords);
                double dist = norm2(rel);
                if (dist < c_closest) {
                    c_closest = dist;
                    side = dot(rel, basis[1]) >= 0.0 ? 1.0 : -1.0;
                }
            }
            if (std::isfinite(c_closest)) {
                double half = config.c_half > 0.0 ? config.c_half : c_closest / 2.0;
                std::vector<double> anchor(d, 0.0);
                anchor[0] = eps;  // same nudge: keep the court label off the knife edge
                anchor[1] = side * half;
                points.push_back(world(anchor));
            }

            std::vector<double> sweep = scaled(wg, eps);
            axpy(sweep, 1.0, scaled(wperp, alpha));
            points.push_back(world(sweep));

            for (std::size_t i = 2; i < d; ++i) {
                for (double sgn : {1.0, -1.0}) {
                    std::vector<double> p = scaled(wg, eps);
                    p[i] += sgn * big_m;
                    points.push_back(world(p));
                }
            }
            points.push_back(world(scaled(wg, -eps)));
            points.push_back(world(scaled(wg, eps)));
        } else {
            // parallel: frame origin on g's hyperplane, u1 = w_g; file the
            // (delta+eps)-shifted pairs, then the two teaching points
            std::vector<double> u1 = g.normal;
            auto basis = complete_basis({u1}, d);
            CasePoint origin{scaled(g.normal, -g.offset)};
            double shift = rep.delta + eps;

            auto world = [&](const std::vector<double>& frame) {
                std::vector<double> x = origin.coords;
                for (std::size_t i = 0; i < basis.size(); ++i) axpy(x, frame[i], basis[i]);
                return CasePoint{std::move(x)};
            };
            for (std::size_t j = 1; j < d; ++j) {
                for (double sgn : {1.0, -1.0}) {
                    std::vector<double> p(d, 0.0);
                    p[0] = shift;
                    p[j] = sgn * big_m;
                    points.push_back(world(p));
                }
            }
            std::vector<double> minus(d, 0.0), plus(d, 0.0);
            minus[0] = -shift;
            plus[0] = shift;
            points.push_back(world(minus));
            points.push_back(world(plus));
        }

        // simulate the session and verify the construction end to end
        PrecedentSet precedent = history_with_stale;
        bool failed = false;
        for (std::size_t i = 0; i < points.size() && !failed; ++i) {
            try {
                auto outcome = decide(CourtRule{f_star}, precedent, points[i], LearnerKind::Svm,
                                      RemovalPolicy::lexicographic(), i);
                precedent = std::move(outcome.new_precedent);
            } catch (const std::exception&) {
                failed = true;
            }
        }
        if (!failed) {
            for (const auto& c : stale) {
                if (config.relaxed_disagreement && g.at(c.point) == c.label) continue;
                const LabeledCase* now = precedent.find(c.point);
                if (now && now->label == c.label) failed = true;  // stale label survived
            }
        }
        if (!failed) {
            try {
                SvmModel m = svm_fit(precedent);
                failed = m.degenerate || !same_separator(m.separator, g, kRepro);
            } catch (const InconsistentPrecedent&) {
                failed = true;
            }
        }
        if (!failed) {
            OverturnPlan plan;
            plan.points = std::move(points);
            for (const auto& p : plan.points) plan.expected_labels.push_back(f_star.at(p));
            plan.kind = rep.kind;
            plan.used = config;
            plan.used.epsilon = eps;
            plan.used.alpha = alpha;
            plan.used.big_m = big_m;
            return plan;
        }
    }
    throw std::runtime_error(
        "overturning construction failed verification after all retries; the finite "
        "epsilon/alpha/big_m stand-ins were insufficient for this instance");
}

}  // namespace precedent
