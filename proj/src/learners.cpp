#include "precedent/learners.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace precedent {

namespace {

// Solves A x = rhs in place by Gaussian elimination with partial pivoting.
// Returns false when the system is (near-)singular. Extended precision: the
// KKT systems get very ill-conditioned when support vectors sit orders of
// magnitude apart (Gram entries spanning ~1e12), and the feasibility recheck
// below has no true slack for active constraints, so the extra mantissa bits
// are what keep knife-edge separable sets from being rejected.
bool solve_dense(std::vector<long double>& a, std::vector<long double>& rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        long double best = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            long double v = std::abs(a[r * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-12L) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        long double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            long double factor = a[r * n + col] / d;
            if (factor == 0.0L) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
            rhs[r] -= factor * rhs[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        long double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * rhs[c];
        rhs[i] = s / a[i * n + i];
    }
    return true;
}

double round_to(double v, double grid) { return std::round(v / grid) * grid; }

// true if (w1,b1) < (w2,b2) lexicographically after rounding to 1e-12
bool lex_less(const std::vector<double>& w1, double b1,
              const std::vector<double>& w2, double b2) {
    for (std::size_t i = 0; i < w1.size(); ++i) {
        double a = round_to(w1[i], 1e-12), b = round_to(w2[i], 1e-12);
        if (a != b) return a < b;
    }
    return round_to(b1, 1e-12) < round_to(b2, 1e-12);
}

struct Candidate {
    std::vector<double> w;  // unit
    double b = 0.0;
    double margin = 0.0;
};

// Enumerates candidate support subsets of size 2..d+1, solves the hard-margin
// KKT equality system for each, and keeps the feasible candidate with maximum
// margin. Returns nullopt when no candidate separates the data.
std::optional<Candidate> best_separator(const std::vector<LabeledCase>& cases) {
    const std::size_t n = cases.size();
    const std::size_t d = cases.front().point.dim();
    const std::size_t max_sv = std::min(n, d + 1);

    std::vector<long double> y(n);
    std::vector<long double> pt_norm(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = cases[i].label == Label::Positive ? 1.0L : -1.0L;
        pt_norm[i] = static_cast<long double>(norm2(cases[i].point.coords));
    }
    std::vector<long double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < d; ++k)
                acc += static_cast<long double>(cases[i].point.coords[k]) *
                       static_cast<long double>(cases[j].point.coords[k]);
            gram[i * n + j] = acc;
        }

    std::optional<Candidate> best;
    std::vector<std::size_t> idx;
    std::vector<long double> mat, rhs, v;

    auto consider = [&](const std::vector<std::size_t>& sub) {
        const std::size_t m = sub.size();
        bool has_pos = false, has_neg = false;
        for (auto i : sub) (y[i] > 0 ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) return;

        // Unknowns: alpha_1..alpha_m, c.
        //   row i: sum_j alpha_j y_i y_j <x_i, x_j> + y_i c = 1
        //   row m: sum_j alpha_j y_j = 0
        mat.assign((m + 1) * (m + 1), 0.0L);
        rhs.assign(m + 1, 0.0L);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c)
                mat[r * (m + 1) + c] = y[sub[r]] * y[sub[c]] * gram[sub[r] * n + sub[c]];
            mat[r * (m + 1) + m] = y[sub[r]];
            rhs[r] = 1.0L;
        }
        for (std::size_t c = 0; c < m; ++c) mat[m * (m + 1) + c] = y[sub[c]];
        if (!solve_dense(mat, rhs, m + 1)) return;

        long double max_alpha = 0.0L;
        for (std::size_t j = 0; j < m; ++j) max_alpha = std::max(max_alpha, std::abs(rhs[j]));
        for (std::size_t j = 0; j < m; ++j) {
            if (rhs[j] < -1e-9L * std::max(1.0L, max_alpha)) return;  // not a KKT point
        }
        long double c = rhs[m];

        v.assign(d, 0.0L);
        for (std::size_t j = 0; j < m; ++j) {
            long double coeff = rhs[j] * y[sub[j]];
            for (std::size_t k = 0; k < d; ++k) v[k] += coeff * cases[sub[j]].point.coords[k];
        }
        long double vn = 0.0L;
        for (std::size_t k = 0; k < d; ++k) vn += v[k] * v[k];
        vn = std::sqrt(vn);
        if (!(vn > 1e-12L) || !std::isfinite(static_cast<double>(vn))) return;

        // Feasibility on every training point, with scale-aware slack so far
        // away, large-magnitude points do not get rejected on rounding noise.
        // The candidate plane itself inherits the coordinate rounding of its
        // support subset, so the subset's magnitude enters the slack as well.
        long double sub_norm = 0.0L;
        for (std::size_t j = 0; j < m; ++j) sub_norm = std::max(sub_norm, pt_norm[sub[j]]);
        for (std::size_t k = 0; k < n; ++k) {
            long double val = c;
            for (std::size_t q = 0; q < d; ++q) val += v[q] * cases[k].point.coords[q];
            long double slack = 1e-9L + 1e-13L * (vn * (pt_norm[k] + sub_norm) + std::abs(c));
            if (y[k] * val < 1.0L - slack) return;
        }

        Candidate cand;
        cand.w.resize(d);
        for (std::size_t k = 0; k < d; ++k) cand.w[k] = static_cast<double>(v[k] / vn);
        cand.b = static_cast<double>(c / vn);
        cand.margin = static_cast<double>(1.0L / vn);
        if (!best || cand.margin > best->margin + 1e-12 * std::max(1.0, cand.margin)) {
            best = cand;
        } else if (std::abs(cand.margin - best->margin) <= 1e-12 * std::max(1.0, cand.margin) &&
                   lex_less(cand.w, cand.b, best->w, best->b)) {
            best = cand;
        }
    };

    // all subsets of size 2..max_sv, in lexicographic index order
    for (std::size_t m = 2; m <= max_sv; ++m) {
        idx.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i) idx[i] = i;
        while (true) {
            consider(idx);
            std::size_t i = m;
            bool done = true;
            while (i-- > 0) {
                if (idx[i] < i + n - m) {
                    done = false;
                    break;
                }
            }
            if (done) break;
            ++idx[i];
            for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return best;
}

}  // namespace

Piecewise1DFn nn_fit(const PrecedentSet& precedent, double domain_lo, double domain_hi) {
    const auto& cases = precedent.cases();
    if (cases.empty()) return Piecewise1DFn::constant(Label::Positive, domain_lo, domain_hi);
    Piecewise1DFn fn;
    fn.domain_lo = domain_lo;
    fn.domain_hi = domain_hi;
    fn.leftmost_label = cases.front().label;
    for (const auto& c : cases) {
        if (c.point.dim() != 1) throw std::invalid_argument("nn_fit requires 1D points");
        double x = c.point[0];
        if (x < domain_lo || x > domain_hi)
            throw std::invalid_argument("nn_fit: point outside domain interval");
    }
    for (std::size_t i = 0; i + 1 < cases.size(); ++i) {
        if (cases[i].label == cases[i + 1].label) continue;
        double mid = 0.5 * (cases[i].point[0] + cases[i + 1].point[0]);
        // exact midpoint takes the left neighbor's label
        fn.boundaries.push_back(std::nextafter(mid, std::numeric_limits<double>::infinity()));
    }
    return fn;
}

SvmModel svm_fit(const PrecedentSet& precedent) {
    SvmModel model;
    const auto& cases = precedent.cases();
    bool has_pos = false, has_neg = false;
    for (const auto& c : cases) (c.label == Label::Positive ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        model.degenerate = true;
        model.constant_label = cases.empty() ? Label::Positive : cases.front().label;
        return model;
    }

    auto best = best_separator(cases);
    if (!best || best->margin <= 1e-12) {
        throw InconsistentPrecedent("precedent is not linearly separable");
    }
    model.degenerate = false;
    model.separator = LinearSeparator(best->w, best->b);
    model.margin = best->margin;
    for (const auto& c : cases) {
        double dist = std::abs(model.separator.signed_value(c.point));
        if (std::abs(dist - model.margin) <= 1e-9 * std::max(1.0, model.margin)) {
            model.support_vectors.push_back(c);
        }
    }
    return model;
}

bool is_separable(const PrecedentSet& precedent) {
    const auto& cases = precedent.cases();
    bool has_pos = false, has_neg = false;
    for (const auto& c : cases) (c.label == Label::Positive ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) return true;
    auto best = best_separator(cases);
    return best && best->margin > 1e-12;
}

}  // namespace precedent
