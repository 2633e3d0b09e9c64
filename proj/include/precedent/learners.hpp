#pragma once

#include <limits>
#include <vector>

#include "precedent/core.hpp"

namespace precedent {

/// Thrown when no hypothesis in the scenario's class is consistent with the
/// training data (the realizability assumption is violated).
struct InconsistentPrecedent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Nearest-neighbor fit over 1D precedent: boundaries at midpoints between
/// consecutive differently-labeled points. Empty precedent yields the
/// all-positive function; single-class precedent the constant function of
/// that class. An exact midpoint takes the left neighbor's label, so the
/// stored boundary is the next representable value above the midpoint.
Piecewise1DFn nn_fit(const PrecedentSet& precedent, double domain_lo = 0.0, double domain_hi = 1.0);

struct SvmModel {
    bool degenerate = false;       // empty or single-class precedent
    Label constant_label = Label::Positive;
    LinearSeparator separator;     // valid iff !degenerate
    std::vector<LabeledCase> support_vectors;
    double margin = std::numeric_limits<double>::infinity();

    CourtRule rule() const {
        if (degenerate) return ConstantRule{constant_label};
        return separator;
    }
    Label classify(const CasePoint& x) const {
        return degenerate ? constant_label : separator.at(x);
    }
};

/// Exact maximum hard-margin separator, found by enumerating candidate
/// support subsets of size 2..d+1 and solving the KKT equality system for
/// each. Deterministic: margin ties break lexicographically on (w, b)
/// rounded to 1e-12. Throws InconsistentPrecedent when the data is not
/// linearly separable.
SvmModel svm_fit(const PrecedentSet& precedent);

/// True iff some linear separator classifies every case correctly with a
/// strictly positive margin (> 1e-12). Empty or single-class data is
/// trivially separable.
bool is_separable(const PrecedentSet& precedent);

}  // namespace precedent
