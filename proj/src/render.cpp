#include "precedent/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace precedent {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kPos = "#2a9d8f";
constexpr const char* kNeg = "#e76f51";
constexpr const char* kGrid = "#bbbbbb";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Svg {
    std::string body;
    double width = 0.0, height = 0.0;

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double w = 1.0, const std::string& dash = "") {
        body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(w) +
                "\"";
        if (!dash.empty()) body += " stroke-dasharray=\"" + dash + "\"";
        body += "/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill) {
        body += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
                "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& fill,
                const std::string& stroke) {
        body += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
                "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
    }
    void text(double x, double y, const std::string& s, double size = 12.0) {
        body += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"monospace\" " +
                "font-size=\"" + num(size) + "\">" + s + "</text>\n";
    }
    void cross(double cx, double cy, double r) {
        line(cx - r, cy - r, cx + r, cy + r, "#000000", 1.5);
        line(cx - r, cy + r, cx + r, cy - r, "#000000", 1.5);
    }
    void triangle(double cx, double cy, double r, const std::string& fill) {
        body += "<path d=\"M " + num(cx) + " " + num(cy - r) + " L " + num(cx + r) + " " +
                num(cy + r) + " L " + num(cx - r) + " " + num(cy + r) + " Z\" fill=\"" + fill +
                "\"/>\n";
    }
    std::string finish() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
               num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) +
               " " + num(height) + "\">\n" + body + "</svg>\n";
    }
};

Piecewise1DFn rule_from_json(const Json& j) {
    Piecewise1DFn f;
    if (j["type"] == "constant") {
        f.leftmost_label = j["label"] == "positive" ? Label::Positive : Label::Negative;
        return f;
    }
    f.leftmost_label = j["leftmost_label"] == "positive" ? Label::Positive : Label::Negative;
    for (const auto& b : j["boundaries"]) f.boundaries.push_back(b.get<double>());
    f.domain_lo = j["domain_lo"].get<double>();
    f.domain_hi = j["domain_hi"].get<double>();
    return f;
}

// --- 1D: colored segment bars plus point glyphs on an axis ---

std::string render_1d(const Scenario& s, const Json& result) {
    const auto& dist = std::get<PiecewiseUniform1D>(s.distribution);
    double lo = dist.lo(), hi = dist.hi();
    const double margin = 60.0, inner = 680.0, bar_h = 22.0, gap = 14.0;
    auto X = [&](double x) { return margin + (x - lo) / (hi - lo) * inner; };

    Svg svg;
    svg.width = margin * 2 + inner;

    double y = 20.0;
    auto bar = [&](const Piecewise1DFn& f, const std::string& name) {
        std::vector<double> cuts{lo};
        for (double b : f.boundaries) cuts.push_back(b);
        cuts.push_back(hi);
        Label cur = f.leftmost_label;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            svg.rect(X(cuts[i]), y, X(cuts[i + 1]) - X(cuts[i]), bar_h,
                     cur == Label::Positive ? kPos : kNeg);
            cur = flip(cur);
        }
        svg.text(4.0, y + bar_h - 6.0, name);
        y += bar_h + gap;
    };

    bar(std::get<Piecewise1DFn>(s.f_star), "f*");
    bar(std::get<Piecewise1DFn>(s.g), "g");
    if (result.contains("learned")) bar(rule_from_json(result["learned"]), "f");

    // axis with history, pool and chosen glyphs
    double axis_y = y + 24.0;
    svg.line(X(lo), axis_y, X(hi), axis_y, "#000000");
    for (double p : s.pool) svg.line(X(p), axis_y - 4.0, X(p), axis_y + 4.0, kGrid);
    for (const auto& c : s.history.cases()) {
        svg.circle(X(c.point[0]), axis_y, 5.0,
                   c.label == Label::Positive ? kPos : kNeg,
                   c.era == Era::Stale ? "#000000" : "none");
    }
    if (result.contains("chosen")) {
        std::size_t i = 0;
        for (const auto& p : result["chosen"]) {
            bool positive = result["labels"][i++] == "positive";
            svg.triangle(X(p.get<double>()), axis_y - 12.0, 6.0, positive ? kPos : kNeg);
        }
    }
    svg.text(X(lo) - 4.0, axis_y + 18.0, num(lo));
    svg.text(X(hi) - 4.0, axis_y + 18.0, num(hi));
    if (result.contains("achieved_error")) {
        svg.text(margin, axis_y + 36.0,
                 "error " + num(result["achieved_error"].get<double>()));
    }
    svg.height = axis_y + 48.0;
    return svg.finish();
}

// --- 2D: scatter with separator lines; sessions as stacked frames ---

struct Bounds {
    double lo_x = -1.0, hi_x = 1.0, lo_y = -1.0, hi_y = 1.0;
    void include(const CasePoint& p) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    void pad() {
        double dx = (hi_x - lo_x) * 0.1 + 1e-9, dy = (hi_y - lo_y) * 0.1 + 1e-9;
        lo_x -= dx;
        hi_x += dx;
        lo_y -= dy;
        hi_y += dy;
    }
};

void draw_separator(Svg& svg, const Bounds& b, double frame_y, double side,
                    const LinearSeparator& sep, const std::string& stroke,
                    const std::string& dash) {
    // a long chord through the foot of the origin, clipped by the viewport
    double cx = -sep.offset * sep.normal[0], cy = -sep.offset * sep.normal[1];
    double dx = -sep.normal[1], dy = sep.normal[0];
    double reach = 4.0 * (std::abs(b.hi_x - b.lo_x) + std::abs(b.hi_y - b.lo_y) +
                          std::abs(cx) + std::abs(cy));
    auto X = [&](double x) { return (x - b.lo_x) / (b.hi_x - b.lo_x) * side; };
    auto Y = [&](double y) { return frame_y + side - (y - b.lo_y) / (b.hi_y - b.lo_y) * side; };
    svg.line(X(cx - reach * dx), Y(cy - reach * dy), X(cx + reach * dx), Y(cy + reach * dy),
             stroke, 1.5, dash);
}

void draw_cases(Svg& svg, const Bounds& b, double frame_y, double side,
                const std::vector<LabeledCase>& cases,
                const std::vector<CasePoint>& struck) {
    auto X = [&](double x) { return (x - b.lo_x) / (b.hi_x - b.lo_x) * side; };
    auto Y = [&](double y) { return frame_y + side - (y - b.lo_y) / (b.hi_y - b.lo_y) * side; };
    for (const auto& c : cases) {
        svg.circle(X(c.point[0]), Y(c.point[1]), 4.5,
                   c.label == Label::Positive ? kPos : kNeg,
                   c.era == Era::Stale ? "#000000" : "none");
    }
    for (const auto& p : struck) svg.cross(X(p[0]), Y(p[1]), 6.0);
}

std::string render_2d(const Scenario& s, const Json& result) {
    const double side = 360.0, label_h = 20.0;

    // one frame for plain results; initial + per-step frames for sessions
    bool session = result["solver"] == "session";
    std::size_t frames = session ? result["steps"].size() + 1 : 1;

    Bounds b;
    for (const auto& c : s.history.cases()) b.include(c.point);
    for (const auto& p : s.pool_points) b.include(p);
    for (const auto& p : s.filings) b.include(p);
    if (result.contains("points")) {
        for (const auto& p : result["points"]) {
            b.include(CasePoint{p[0].get<double>(), p[1].get<double>()});
        }
    }
    b.pad();

    Svg svg;
    svg.width = side;
    svg.height = frames * (side + label_h);

    const auto& f_sep = std::get<LinearSeparator>(s.f_star);
    const auto& g_sep = std::get<LinearSeparator>(s.g);

    auto parse_sep = [](const Json& j) {
        std::vector<double> w;
        for (const auto& v : j["normal"]) w.push_back(v.get<double>());
        return LinearSeparator(w, j["offset"].get<double>());
    };

    if (!session) {
        svg.text(4.0, 14.0, "f* solid, g dashed");
        draw_separator(svg, b, label_h, side, f_sep, "#000000", "");
        draw_separator(svg, b, label_h, side, g_sep, "#555555", "6,4");
        std::vector<LabeledCase> cases(s.history.cases());
        if (result.contains("points")) {
            std::size_t i = 0;
            for (const auto& p : result["points"]) {
                Label l = result["labels"][i++] == "positive" ? Label::Positive : Label::Negative;
                cases.push_back({CasePoint{p[0].get<double>(), p[1].get<double>()}, l,
                                 Era::Current});
            }
        }
        if (result.contains("final_separator") &&
            result["final_separator"]["type"] == "linear_separator") {
            draw_separator(svg, b, label_h, side, parse_sep(result["final_separator"]), kPos,
                           "2,3");
        }
        if (result.contains("proxy") && result["proxy"]["type"] == "linear_separator") {
            draw_separator(svg, b, label_h, side, parse_sep(result["proxy"]), kPos, "2,3");
        }
        draw_cases(svg, b, label_h, side, cases, {});
        return svg.finish();
    }

    // session frames: replay the transcript on top of the initial precedent
    PrecedentSet precedent = s.history;
    double fy = 0.0;
    svg.text(4.0, fy + 14.0, "initial");
    draw_separator(svg, b, fy + label_h, side, f_sep, "#000000", "");
    if (result["initial"]["rule"]["type"] == "linear_separator") {
        draw_separator(svg, b, fy + label_h, side, parse_sep(result["initial"]["rule"]), kPos,
                       "2,3");
    }
    draw_cases(svg, b, fy + label_h, side, precedent.cases(), {});
    fy += side + label_h;

    std::size_t step_no = 1;
    for (const auto& st : result["steps"]) {
        CasePoint brought{st["brought"][0].get<double>(), st["brought"][1].get<double>()};
        Label lab = st["label"] == "positive" ? Label::Positive : Label::Negative;
        std::vector<CasePoint> struck;
        for (const auto& rm : st["removed"]) {
            CasePoint p{rm["point"][0].get<double>(), rm["point"][1].get<double>()};
            precedent.erase(p);
            struck.push_back(std::move(p));
        }
        precedent.upsert({brought, lab, Era::Current});
        svg.text(4.0, fy + 14.0, "step " + std::to_string(step_no++));
        draw_separator(svg, b, fy + label_h, side, f_sep, "#000000", "");
        if (st["rule"]["type"] == "linear_separator") {
            draw_separator(svg, b, fy + label_h, side, parse_sep(st["rule"]), kPos, "2,3");
        }
        draw_cases(svg, b, fy + label_h, side, precedent.cases(), struck);
        fy += side + label_h;
    }
    return svg.finish();
}

}  // namespace

std::string render_svg(const Scenario& scenario, const std::string& result_json) {
    if (scenario.dimension > 2) {
        throw ScenarioError("field 'dimension': rendering supports d <= 2 only");
    }
    Json result;
    try {
        result = Json::parse(result_json);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("result is not valid JSON: ") + e.what());
    }
    if (scenario.setting == Setting::Nn1D) return render_1d(scenario, result);
    return render_2d(scenario, result);
}

}  // namespace precedent
