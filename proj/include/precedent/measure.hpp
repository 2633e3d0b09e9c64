#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "precedent/core.hpp"

namespace precedent {

/// A piecewise-uniform density on a bounded interval: breakpoints span the
/// domain, one nonnegative density per segment, total mass 1 within 1e-12.
struct PiecewiseUniform1D {
    std::vector<double> breakpoints;  // increasing, breakpoints.front() = lo, .back() = hi
    std::vector<double> densities;    // densities.size() == breakpoints.size() - 1

    static PiecewiseUniform1D uniform(double lo = 0.0, double hi = 1.0);

    double lo() const { return breakpoints.front(); }
    double hi() const { return breakpoints.back(); }
    void validate() const;

    /// Probability mass of [a, b] (clamped to the domain).
    double mass(double a, double b) const;
    double cdf(double x) const;
};

struct UniformBox {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct GaussianSampler {
    std::vector<double> mean;
    std::vector<double> stddev;  // per-coordinate, > 0
};

struct EmpiricalSampler {
    std::vector<CasePoint> points;  // nonempty
};

/// A d-dimensional sampler spec with a mandatory seed; sampling is
/// reproducible bit-exactly for a fixed seed.
struct SamplerSpec {
    std::variant<UniformBox, GaussianSampler, EmpiricalSampler> dist;
    std::uint64_t seed = 0;

    std::size_t dim() const;
    void validate() const;
    std::vector<CasePoint> sample(std::size_t n) const;
};

/// Exact probability mass of {x in [lo,hi] : f(x) != g(x)} under dist.
double discrepancy_1d(const Piecewise1DFn& f, const Piecewise1DFn& g,
                      double interval_lo, double interval_hi,
                      const PiecewiseUniform1D& dist);

/// CDF rescale of Algorithm-style inputs onto [0,1]: x -> CDF(x). Point
/// ordering is preserved on the support; discrepancy under the uniform
/// distribution after rescaling equals discrepancy under dist before.
double cdf_rescale_point(const PiecewiseUniform1D& dist, double x);
Piecewise1DFn cdf_rescale_fn(const PiecewiseUniform1D& dist, const Piecewise1DFn& fn);

struct ErrorEstimate {
    double estimate = 0.0;
    double half_width = 0.0;  // Hoeffding 95% bound sqrt(ln(40) / (2n))
};

/// Monte Carlo disagreement mass between two rules under the sampler.
ErrorEstimate estimate_error(const CourtRule& f, const CourtRule& g,
                             const SamplerSpec& sampler, std::size_t n_samples);

/// ceil(d / eps^2 * ln(1/eps)); the default sample size when unspecified.
std::size_t default_sample_size(std::size_t d, double eps = 0.05);

}  // namespace precedent
