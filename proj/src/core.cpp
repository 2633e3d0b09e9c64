#include "precedent/core.hpp"

#include <algorithm>
#include <cmath>

namespace precedent {

PrecedentSet::PrecedentSet(std::vector<LabeledCase> cases) {
    for (auto& c : cases) upsert(c);
}

std::size_t PrecedentSet::dim() const {
    return cases_.empty() ? 0 : cases_.front().point.dim();
}

void PrecedentSet::upsert(const LabeledCase& c) {
    for (double v : c.point.coords) {
        if (!std::isfinite(v)) throw std::invalid_argument("case coordinates must be finite");
    }
    if (!cases_.empty() && c.point.dim() != cases_.front().point.dim()) {
        throw std::invalid_argument("case dimension does not match precedent set");
    }
    auto it = std::lower_bound(cases_.begin(), cases_.end(), c,
                               [](const LabeledCase& a, const LabeledCase& b) { return a.point < b.point; });
    if (it != cases_.end() && it->point == c.point) {
        *it = c;
    } else {
        cases_.insert(it, c);
    }
}

bool PrecedentSet::erase(const CasePoint& p) {
    auto it = std::find_if(cases_.begin(), cases_.end(),
                           [&](const LabeledCase& c) { return c.point == p; });
    if (it == cases_.end()) return false;
    cases_.erase(it);
    return true;
}

const LabeledCase* PrecedentSet::find(const CasePoint& p) const {
    auto it = std::find_if(cases_.begin(), cases_.end(),
                           [&](const LabeledCase& c) { return c.point == p; });
    return it == cases_.end() ? nullptr : &*it;
}

Label Piecewise1DFn::at(double x) const {
    // boundary point belongs to the segment on its right
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
    std::size_t seg = static_cast<std::size_t>(it - boundaries.begin());
    return (seg % 2 == 0) ? leftmost_label : flip(leftmost_label);
}

Piecewise1DFn canonicalize(const Piecewise1DFn& fn) {
    for (std::size_t i = 0; i < fn.boundaries.size(); ++i) {
        double b = fn.boundaries[i];
        if (!std::isfinite(b) || b <= fn.domain_lo || b >= fn.domain_hi) {
            throw std::invalid_argument("boundary outside open domain interval");
        }
        if (i > 0 && !(fn.boundaries[i - 1] < b)) {
            throw std::invalid_argument("boundaries must be strictly increasing");
        }
    }
    // In this representation adjacent segments always alternate, so the only
    // canonical form is the input itself; kept as a validation + copy.
    return fn;
}

Piecewise1DFn make_piecewise(const std::vector<Label>& segment_labels,
                             const std::vector<double>& boundaries,
                             double domain_lo, double domain_hi) {
    if (segment_labels.size() != boundaries.size() + 1) {
        throw std::invalid_argument("need one label per segment");
    }
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        double b = boundaries[i];
        if (!std::isfinite(b) || b <= domain_lo || b >= domain_hi ||
            (i > 0 && !(boundaries[i - 1] < b))) {
            throw std::invalid_argument("boundaries must be strictly increasing inside the domain");
        }
    }
    Piecewise1DFn fn;
    fn.leftmost_label = segment_labels.front();
    fn.domain_lo = domain_lo;
    fn.domain_hi = domain_hi;
    Label prev = segment_labels.front();
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (segment_labels[i + 1] != prev) {
            fn.boundaries.push_back(boundaries[i]);
            prev = segment_labels[i + 1];
        }
    }
    return fn;
}

LinearSeparator::LinearSeparator(std::vector<double> w, double b) : normal(std::move(w)), offset(b) {
    double n = norm2(normal);
    if (std::abs(n - 1.0) > 1e-12) {
        if (n <= 0.0 || !std::isfinite(n)) throw std::invalid_argument("normal must be nonzero and finite");
        for (double& v : normal) v /= n;
        offset /= n;
    }
}

double LinearSeparator::signed_value(const CasePoint& x) const {
    if (x.dim() != normal.size()) throw std::invalid_argument("dimension mismatch between rule and point");
    double s = offset;
    for (std::size_t i = 0; i < normal.size(); ++i) s += normal[i] * x.coords[i];
    return s;
}

Label evaluate(const Piecewise1DFn& rule, const CasePoint& x) {
    if (x.dim() != 1) throw std::invalid_argument("1D rule evaluated on non-1D point");
    return rule.at(x.coords[0]);
}

Label evaluate(const LinearSeparator& rule, const CasePoint& x) { return rule.at(x); }

Label evaluate(const CourtRule& rule, const CasePoint& x) {
    return std::visit(
        [&](const auto& r) -> Label {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ConstantRule>) {
                return r.label;
            } else {
                return evaluate(r, x);
            }
        },
        rule);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace precedent
