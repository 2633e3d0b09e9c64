#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace precedent {

enum class Label { Negative = 0, Positive = 1 };

inline Label flip(Label l) { return l == Label::Positive ? Label::Negative : Label::Positive; }
inline const char* to_string(Label l) { return l == Label::Positive ? "positive" : "negative"; }

/// A case fact pattern: a point in d-dimensional instance space (d >= 1).
struct CasePoint {
    std::vector<double> coords;

    CasePoint() = default;
    explicit CasePoint(std::vector<double> c) : coords(std::move(c)) {}
    CasePoint(std::initializer_list<double> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }

    friend bool operator==(const CasePoint& a, const CasePoint& b) { return a.coords == b.coords; }
    friend bool operator<(const CasePoint& a, const CasePoint& b) { return a.coords < b.coords; }
};

/// Whether a historical label agrees with the current high court's function
/// by construction. Stale cases were labeled by an earlier court.
enum class Era { Current, Stale };

struct LabeledCase {
    CasePoint point;
    Label label = Label::Positive;
    Era era = Era::Current;

    friend bool operator==(const LabeledCase& a, const LabeledCase& b) {
        return a.point == b.point && a.label == b.label && a.era == b.era;
    }
};

/// The set of historical labeled data S_h. Cases are kept in canonical
/// (lexicographic by coordinates) order and coordinates are unique: a
/// re-brought duplicate replaces its predecessor.
class PrecedentSet {
public:
    PrecedentSet() = default;
    explicit PrecedentSet(std::vector<LabeledCase> cases);

    const std::vector<LabeledCase>& cases() const { return cases_; }
    bool empty() const { return cases_.empty(); }
    std::size_t size() const { return cases_.size(); }
    std::size_t dim() const;

    /// Insert or replace-at-equal-coordinates, keeping canonical order.
    void upsert(const LabeledCase& c);
    /// Remove the case at exactly these coordinates; returns false if absent.
    bool erase(const CasePoint& p);
    const LabeledCase* find(const CasePoint& p) const;

    friend bool operator==(const PrecedentSet& a, const PrecedentSet& b) { return a.cases_ == b.cases_; }

private:
    std::vector<LabeledCase> cases_;
};

/// A Boolean function on a closed interval with finitely many alternations.
/// Segment membership is half-open: a boundary point takes the label of the
/// segment to its right.
struct Piecewise1DFn {
    Label leftmost_label = Label::Positive;
    std::vector<double> boundaries;  // strictly increasing, inside (lo, hi)
    double domain_lo = 0.0;
    double domain_hi = 1.0;

    Label at(double x) const;

    static Piecewise1DFn constant(Label l, double lo = 0.0, double hi = 1.0) {
        Piecewise1DFn f;
        f.leftmost_label = l;
        f.domain_lo = lo;
        f.domain_hi = hi;
        return f;
    }

    friend bool operator==(const Piecewise1DFn& a, const Piecewise1DFn& b) {
        return a.leftmost_label == b.leftmost_label && a.boundaries == b.boundaries &&
               a.domain_lo == b.domain_lo && a.domain_hi == b.domain_hi;
    }
};

/// Validates the boundary ordering and removes boundaries across which the
/// label would not change. Idempotent.
Piecewise1DFn canonicalize(const Piecewise1DFn& fn);

/// Builds a canonical Piecewise1DFn from explicit per-segment labels
/// (segment_labels.size() == boundaries.size() + 1). Boundaries between
/// equal-labeled segments are dropped.
Piecewise1DFn make_piecewise(const std::vector<Label>& segment_labels,
                             const std::vector<double>& boundaries,
                             double domain_lo = 0.0, double domain_hi = 1.0);

/// A halfspace classifier sign(w.x + b) with unit normal; points exactly on
/// the hyperplane are Positive.
struct LinearSeparator {
    std::vector<double> normal;  // ||w||_2 = 1 within 1e-12
    double offset = 0.0;

    LinearSeparator() = default;
    LinearSeparator(std::vector<double> w, double b);

    std::size_t dim() const { return normal.size(); }
    double signed_value(const CasePoint& x) const;
    Label at(const CasePoint& x) const {
        return signed_value(x) >= 0.0 ? Label::Positive : Label::Negative;
    }

    friend bool operator==(const LinearSeparator& a, const LinearSeparator& b) {
        return a.normal == b.normal && a.offset == b.offset;
    }
};

/// A constant rule; the degenerate learner output when precedent is empty or
/// single-class in the d-dimensional setting.
struct ConstantRule {
    Label label = Label::Positive;
    friend bool operator==(const ConstantRule& a, const ConstantRule& b) { return a.label == b.label; }
};

using CourtRule = std::variant<Piecewise1DFn, LinearSeparator, ConstantRule>;

Label evaluate(const CourtRule& rule, const CasePoint& x);
Label evaluate(const Piecewise1DFn& rule, const CasePoint& x);
Label evaluate(const LinearSeparator& rule, const CasePoint& x);

// --- small vector helpers shared across modules ---

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace precedent
