// Python bindings for the strategic-litigation library: the JSON scenario
// pipeline plus direct access to the learners and the teaching constructions.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "precedent/learners.hpp"
#include "precedent/litigatesvm.hpp"
#include "precedent/measure.hpp"
#include "precedent/render.hpp"
#include "precedent/scenario.hpp"

namespace py = pybind11;
using namespace precedent;

namespace {

PrecedentSet make_precedent(const std::vector<std::vector<double>>& points,
                            const std::vector<bool>& positive,
                            const std::vector<bool>& stale) {
    if (points.size() != positive.size() || (!stale.empty() && stale.size() != points.size())) {
        throw std::invalid_argument("points, labels and eras must have equal lengths");
    }
    PrecedentSet s;
    for (std::size_t i = 0; i < points.size(); ++i) {
        s.upsert({CasePoint{points[i]},
                  positive[i] ? Label::Positive : Label::Negative,
                  (!stale.empty() && stale[i]) ? Era::Stale : Era::Current});
    }
    return s;
}

py::dict piecewise_dict(const Piecewise1DFn& f) {
    py::dict d;
    d["leftmost_positive"] = f.leftmost_label == Label::Positive;
    d["boundaries"] = f.boundaries;
    d["domain"] = py::make_tuple(f.domain_lo, f.domain_hi);
    return d;
}

py::dict svm_dict(const SvmModel& m) {
    py::dict d;
    d["degenerate"] = m.degenerate;
    if (m.degenerate) {
        d["constant_positive"] = m.constant_label == Label::Positive;
    } else {
        d["normal"] = m.separator.normal;
        d["offset"] = m.separator.offset;
        d["margin"] = m.margin;
        std::vector<std::vector<double>> svs;
        for (const auto& c : m.support_vectors) svs.push_back(c.point.coords);
        d["support_vectors"] = svs;
    }
    return d;
}

std::vector<bool> labels_of(const std::vector<Label>& ls) {
    std::vector<bool> out;
    for (Label l : ls) out.push_back(l == Label::Positive);
    return out;
}

std::vector<std::vector<double>> coords_of(const std::vector<CasePoint>& ps) {
    std::vector<std::vector<double>> out;
    for (const auto& p : ps) out.push_back(p.coords);
    return out;
}

}  // namespace

PYBIND11_MODULE(_precedent, m) {
    m.doc() = "strategic-litigation model: scenario pipeline, learners, teaching";

    py::register_exception<ScenarioError>(m, "ScenarioError");
    py::register_exception<InconsistentPrecedent>(m, "InconsistentPrecedent");

    // --- scenario pipeline (JSON text in, JSON/SVG text out) --------------
    m.def(
        "validate_scenario",
        [](const std::string& text) { return scenario_to_json(load_scenario_text(text)); },
        py::arg("scenario_json"),
        "Validates a scenario document and returns its normalized form.");
    m.def(
        "run_scenario",
        [](const std::string& text) { return run_scenario(load_scenario_text(text)); },
        py::arg("scenario_json"),
        "Runs the scenario's solver and returns the result document.");
    m.def(
        "render_svg",
        [](const std::string& scenario_text, const std::string& result_json) {
            return render_svg(load_scenario_text(scenario_text), result_json);
        },
        py::arg("scenario_json"), py::arg("result_json"),
        "Renders a scenario plus its result as an SVG 1.1 document.");

    // --- learners ----------------------------------------------------------
    m.def(
        "nn_fit",
        [](const std::vector<double>& points, const std::vector<bool>& positive, double lo,
           double hi) {
            PrecedentSet s;
            if (points.size() != positive.size()) {
                throw std::invalid_argument("points and labels must have equal lengths");
            }
            for (std::size_t i = 0; i < points.size(); ++i) {
                s.upsert({CasePoint{points[i]},
                          positive[i] ? Label::Positive : Label::Negative, Era::Current});
            }
            return piecewise_dict(nn_fit(s, lo, hi));
        },
        py::arg("points"), py::arg("positive"), py::arg("lo") = 0.0, py::arg("hi") = 1.0,
        "1D nearest-neighbor fit: midpoint boundaries between unlike neighbors.");
    m.def(
        "svm_fit",
        [](const std::vector<std::vector<double>>& points, const std::vector<bool>& positive) {
            return svm_dict(svm_fit(make_precedent(points, positive, {})));
        },
        py::arg("points"), py::arg("positive"),
        "Exact maximum hard-margin separator; raises InconsistentPrecedent if inseparable.");
    m.def(
        "is_separable",
        [](const std::vector<std::vector<double>>& points, const std::vector<bool>& positive) {
            return is_separable(make_precedent(points, positive, {}));
        },
        py::arg("points"), py::arg("positive"));

    // --- measure ------------------------------------------------------------
    m.def(
        "discrepancy_1d",
        [](bool f_leftmost_positive, const std::vector<double>& f_bounds,
           bool g_leftmost_positive, const std::vector<double>& g_bounds,
           const std::vector<double>& breakpoints, const std::vector<double>& densities) {
            Piecewise1DFn f{f_leftmost_positive ? Label::Positive : Label::Negative, f_bounds,
                            breakpoints.front(), breakpoints.back()};
            Piecewise1DFn g{g_leftmost_positive ? Label::Positive : Label::Negative, g_bounds,
                            breakpoints.front(), breakpoints.back()};
            PiecewiseUniform1D d{breakpoints, densities};
            d.validate();
            return discrepancy_1d(f, g, d.lo(), d.hi(), d);
        },
        py::arg("f_leftmost_positive"), py::arg("f_boundaries"),
        py::arg("g_leftmost_positive"), py::arg("g_boundaries"), py::arg("breakpoints"),
        py::arg("densities"),
        "Exact disagreement mass of two piecewise rules under a piecewise-uniform density.");

    // --- teaching -------------------------------------------------------------
    m.def(
        "check_achievable",
        [](const std::vector<double>& w_f, double b_f, const std::vector<double>& w_g,
           double b_g, const std::vector<std::vector<double>>& points,
           const std::vector<bool>& positive) {
            auto rep = check_achievable(LinearSeparator(w_f, b_f), LinearSeparator(w_g, b_g),
                                        make_precedent(points, positive, {}));
            py::dict d;
            d["achievable"] = rep.achievable;
            d["theta_deg"] = rep.theta_deg;
            d["kind"] = rep.kind == AchievableCase::Parallel      ? "parallel"
                        : rep.kind == AchievableCase::Intersecting ? "intersecting"
                                                                    : "blocked";
            d["delta"] = rep.delta;
            d["reason"] = rep.reason;
            d["blockers"] = [&] {
                std::vector<std::vector<double>> out;
                for (const auto& c : rep.blockers) out.push_back(c.point.coords);
                return out;
            }();
            return d;
        },
        py::arg("f_normal"), py::arg("f_offset"), py::arg("g_normal"), py::arg("g_offset"),
        py::arg("history_points") = std::vector<std::vector<double>>{},
        py::arg("history_positive") = std::vector<bool>{},
        "Whether the max-margin learner can be forced to output g.");
    m.def(
        "teach_two_points",
        [](const std::vector<double>& w_f, double b_f, const std::vector<double>& w_g,
           double b_g, const std::vector<std::vector<double>>& points,
           const std::vector<bool>& positive) {
            auto plan = teach_two_points(LinearSeparator(w_f, b_f), LinearSeparator(w_g, b_g),
                                         make_precedent(points, positive, {}));
            py::dict d;
            d["points"] = coords_of(plan.points);
            d["positive"] = labels_of(plan.expected_labels);
            return d;
        },
        py::arg("f_normal"), py::arg("f_offset"), py::arg("g_normal"), py::arg("g_offset"),
        py::arg("history_points") = std::vector<std::vector<double>>{},
        py::arg("history_positive") = std::vector<bool>{},
        "The two filings that force the learner to output g exactly.");
    m.def(
        "teach_with_overturning",
        [](const std::vector<double>& w_f, double b_f, const std::vector<double>& w_g,
           double b_g, const std::vector<std::vector<double>>& points,
           const std::vector<bool>& positive, const std::vector<bool>& stale) {
            auto plan = teach_with_overturning(LinearSeparator(w_f, b_f),
                                               LinearSeparator(w_g, b_g),
                                               make_precedent(points, positive, stale));
            py::dict d;
            d["points"] = coords_of(plan.points);
            d["positive"] = labels_of(plan.expected_labels);
            d["kind"] = plan.kind == AchievableCase::Parallel ? "parallel" : "intersecting";
            return d;
        },
        py::arg("f_normal"), py::arg("f_offset"), py::arg("g_normal"), py::arg("g_offset"),
        py::arg("history_points"), py::arg("history_positive"), py::arg("history_stale"),
        "Filing sequence that removes every stale case and leaves the court at g.");
}
