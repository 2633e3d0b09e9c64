#include "precedent/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace precedent {

PiecewiseUniform1D PiecewiseUniform1D::uniform(double lo, double hi) {
    PiecewiseUniform1D d;
    d.breakpoints = {lo, hi};
    d.densities = {1.0 / (hi - lo)};
    d.validate();
    return d;
}

void PiecewiseUniform1D::validate() const {
    if (breakpoints.size() < 2 || densities.size() != breakpoints.size() - 1) {
        throw std::invalid_argument("distribution needs n breakpoints and n-1 densities");
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) {
            throw std::invalid_argument("distribution breakpoints must be strictly increasing");
        }
        if (!(densities[i] >= 0.0) || !std::isfinite(densities[i])) {
            throw std::invalid_argument("densities must be finite and nonnegative");
        }
        total += densities[i] * (breakpoints[i + 1] - breakpoints[i]);
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("distribution must integrate to 1");
    }
}

double PiecewiseUniform1D::mass(double a, double b) const {
    if (a > b) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double lo = std::max(a, breakpoints[i]);
        double hi = std::min(b, breakpoints[i + 1]);
        if (hi > lo) total += densities[i] * (hi - lo);
    }
    return total;
}

double PiecewiseUniform1D::cdf(double x) const { return mass(breakpoints.front(), x); }

std::size_t SamplerSpec::dim() const {
    return std::visit(
        [](const auto& d) -> std::size_t {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformBox>) return d.lo.size();
            if constexpr (std::is_same_v<T, GaussianSampler>) return d.mean.size();
            if constexpr (std::is_same_v<T, EmpiricalSampler>)
                return d.points.empty() ? 0 : d.points.front().dim();
        },
        dist);
}

void SamplerSpec::validate() const {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformBox>) {
                if (d.lo.size() != d.hi.size() || d.lo.empty())
                    throw std::invalid_argument("box bounds must be nonempty and matching");
                for (std::size_t i = 0; i < d.lo.size(); ++i)
                    if (!(d.lo[i] < d.hi[i]))
                        throw std::invalid_argument("box requires lo < hi per coordinate");
            } else if constexpr (std::is_same_v<T, GaussianSampler>) {
                if (d.mean.size() != d.stddev.size() || d.mean.empty())
                    throw std::invalid_argument("gaussian mean/stddev must be nonempty and matching");
                for (double s : d.stddev)
                    if (!(s > 0.0)) throw std::invalid_argument("gaussian stddev must be > 0");
            } else {
                if (d.points.empty()) throw std::invalid_argument("empirical sampler needs points");
            }
        },
        dist);
}

std::vector<CasePoint> SamplerSpec::sample(std::size_t n) const {
    validate();
    std::mt19937_64 rng(seed);
    std::vector<CasePoint> out;
    out.reserve(n);
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformBox>) {
                for (std::size_t k = 0; k < n; ++k) {
                    std::vector<double> c(d.lo.size());
                    for (std::size_t i = 0; i < c.size(); ++i) {
                        std::uniform_real_distribution<double> u(d.lo[i], d.hi[i]);
                        c[i] = u(rng);
                    }
                    out.emplace_back(std::move(c));
                }
            } else if constexpr (std::is_same_v<T, GaussianSampler>) {
                for (std::size_t k = 0; k < n; ++k) {
                    std::vector<double> c(d.mean.size());
                    for (std::size_t i = 0; i < c.size(); ++i) {
                        std::normal_distribution<double> z(d.mean[i], d.stddev[i]);
                        c[i] = z(rng);
                    }
                    out.emplace_back(std::move(c));
                }
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, d.points.size() - 1);
                for (std::size_t k = 0; k < n; ++k) out.push_back(d.points[pick(rng)]);
            }
        },
        dist);
    return out;
}

double discrepancy_1d(const Piecewise1DFn& f, const Piecewise1DFn& g,
                      double interval_lo, double interval_hi,
                      const PiecewiseUniform1D& dist) {
    if (interval_hi <= interval_lo) return 0.0;
    // Merge all boundary/breakpoint coordinates inside the interval; on each
    // resulting cell both functions and the density are constant.
    std::vector<double> cuts;
    cuts.reserve(f.boundaries.size() + g.boundaries.size() + dist.breakpoints.size() + 2);
    cuts.push_back(interval_lo);
    for (double b : f.boundaries)
        if (b > interval_lo && b < interval_hi) cuts.push_back(b);
    for (double b : g.boundaries)
        if (b > interval_lo && b < interval_hi) cuts.push_back(b);
    for (double b : dist.breakpoints)
        if (b > interval_lo && b < interval_hi) cuts.push_back(b);
    cuts.push_back(interval_hi);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        // half-open convention: the left endpoint's labels hold on [a, b)
        if (f.at(a) != g.at(a)) total += dist.mass(a, b);
    }
    return total;
}

double cdf_rescale_point(const PiecewiseUniform1D& dist, double x) {
    if (x < dist.lo() || x > dist.hi()) {
        throw std::invalid_argument("point outside distribution domain");
    }
    for (std::size_t i = 0; i + 1 < dist.breakpoints.size(); ++i) {
        if (x >= dist.breakpoints[i] && x <= dist.breakpoints[i + 1] && dist.densities[i] == 0.0) {
            bool at_left_edge_of_mass = (x == dist.breakpoints[i]) &&
                                        (i > 0 && dist.densities[i - 1] > 0.0);
            bool at_right_edge_of_mass = (x == dist.breakpoints[i + 1]) &&
                                         (i + 2 < dist.breakpoints.size() && dist.densities[i + 1] > 0.0);
            if (!at_left_edge_of_mass && !at_right_edge_of_mass) {
                throw std::invalid_argument("point lies in a zero-density segment; rescale would collapse it");
            }
        }
    }
    return dist.cdf(x);
}

Piecewise1DFn cdf_rescale_fn(const PiecewiseUniform1D& dist, const Piecewise1DFn& fn) {
    // Map each boundary through the CDF; segments that collapse to zero mass
    // vanish, after which equal-label neighbors merge.
    std::vector<double> mapped;
    std::vector<Label> labels;
    labels.push_back(fn.leftmost_label);
    Label cur = fn.leftmost_label;
    for (double b : fn.boundaries) {
        mapped.push_back(dist.cdf(b));
        cur = flip(cur);
        labels.push_back(cur);
    }
    std::vector<double> keep_b;
    std::vector<Label> keep_l;
    keep_l.push_back(labels[0]);
    for (std::size_t i = 0; i < mapped.size(); ++i) {
        double t = mapped[i];
        if (t <= 0.0 || t >= 1.0) {
            // leading/trailing segment has no mass; its label takes over
            if (t <= 0.0) keep_l.back() = labels[i + 1];
            continue;
        }
        if (!keep_b.empty() && t == keep_b.back()) {
            keep_l.back() = labels[i + 1];  // zero-mass middle segment vanishes
            continue;
        }
        keep_b.push_back(t);
        keep_l.push_back(labels[i + 1]);
    }
    return make_piecewise(keep_l, keep_b, 0.0, 1.0);
}

ErrorEstimate estimate_error(const CourtRule& f, const CourtRule& g,
                             const SamplerSpec& sampler, std::size_t n_samples) {
    if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    auto pts = sampler.sample(n_samples);
    std::size_t differ = 0;
    for (const auto& p : pts) {
        if (evaluate(f, p) != evaluate(g, p)) ++differ;
    }
    ErrorEstimate e;
    e.estimate = static_cast<double>(differ) / static_cast<double>(n_samples);
    e.half_width = std::sqrt(std::log(40.0) / (2.0 * static_cast<double>(n_samples)));
    return e;
}

std::size_t default_sample_size(std::size_t d, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(d) / (eps * eps) * std::log(1.0 / eps)));
}

}  // namespace precedent
