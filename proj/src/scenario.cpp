#include "precedent/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "precedent/learners.hpp"
#include "precedent/litigate1d.hpp"
#include "precedent/litigatesvm.hpp"

namespace precedent {

using Json = nlohmann::ordered_json;

namespace {

// --- 17-significant-digit JSON emission (round-trip exact, byte stable) ---

void dump_value(const Json& j, std::string& out, int depth) {
    auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                pad(depth + 1);
                out += Json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, depth + 1);
            }
            out += "\n";
            pad(depth);
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars = true;
            for (const auto& v : j) {
                if (v.is_structured()) scalars = false;
            }
            out += "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += scalars ? ", " : ",";
                if (!scalars) {
                    out += first ? "\n" : "\n";
                    pad(depth + 1);
                }
                first = false;
                dump_value(v, out, depth + 1);
            }
            if (!scalars) {
                out += "\n";
                pad(depth);
            }
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            // keep floats distinguishable from integers on re-parse
            if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) {
                out += ".0";
            }
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

std::string dump_17(const Json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

// --- field helpers ---

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ScenarioError("field '" + field + "': " + why);
}

const Json& need(const Json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) fail(key, "missing");
    return *it;
}

double need_real(const Json& j, const std::string& key) {
    const Json& v = need(j, key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
}

std::vector<double> real_vector(const Json& v, const std::string& field) {
    if (!v.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail(field, "expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Label parse_label(const Json& v, const std::string& field) {
    if (v == "positive") return Label::Positive;
    if (v == "negative") return Label::Negative;
    fail(field, "expected \"positive\" or \"negative\"");
}

Json label_json(Label l) { return to_string(l); }

CourtRule parse_rule(const Json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected a rule object");
    const Json& type = need(j, "type");
    if (type == "piecewise1d") {
        Piecewise1DFn f;
        f.leftmost_label = parse_label(need(j, "leftmost_label"), field + ".leftmost_label");
        f.boundaries = real_vector(need(j, "boundaries"), field + ".boundaries");
        f.domain_lo = need_real(j, "domain_lo");
        f.domain_hi = need_real(j, "domain_hi");
        try {
            return canonicalize(f);
        } catch (const std::invalid_argument& e) {
            fail(field + ".boundaries", e.what());
        }
    }
    if (type == "linear_separator") {
        try {
            return LinearSeparator(real_vector(need(j, "normal"), field + ".normal"),
                                   need_real(j, "offset"));
        } catch (const std::invalid_argument& e) {
            fail(field + ".normal", e.what());
        }
    }
    if (type == "constant") {
        return ConstantRule{parse_label(need(j, "label"), field + ".label")};
    }
    fail(field + ".type", "unknown rule type");
}

Json rule_json(const CourtRule& r) {
    Json j;
    if (const auto* f = std::get_if<Piecewise1DFn>(&r)) {
        j["type"] = "piecewise1d";
        j["leftmost_label"] = label_json(f->leftmost_label);
        j["boundaries"] = f->boundaries;
        j["domain_lo"] = f->domain_lo;
        j["domain_hi"] = f->domain_hi;
    } else if (const auto* s = std::get_if<LinearSeparator>(&r)) {
        j["type"] = "linear_separator";
        j["normal"] = s->normal;
        j["offset"] = s->offset;
    } else {
        j["type"] = "constant";
        j["label"] = label_json(std::get<ConstantRule>(r).label);
    }
    return j;
}

CasePoint parse_point(const Json& v, std::size_t dim, const std::string& field) {
    auto coords = real_vector(v, field);
    if (coords.size() != dim) {
        fail(field, "point " + Json(v).dump() + " has dimension " +
                        std::to_string(coords.size()) + ", scenario dimension is " +
                        std::to_string(dim));
    }
    return CasePoint{std::move(coords)};
}

Json point_json(const CasePoint& p) { return Json(p.coords); }

Json case_json(const LabeledCase& c) {
    Json j;
    j["point"] = point_json(c.point);
    j["label"] = label_json(c.label);
    j["era"] = c.era == Era::Stale ? "stale" : "current";
    return j;
}

std::variant<PiecewiseUniform1D, SamplerSpec> parse_distribution(const Json& j,
                                                                 std::uint64_t seed,
                                                                 const std::string& field) {
    if (!j.is_object()) fail(field, "expected a distribution object");
    const Json& type = need(j, "type");
    if (type == "piecewise_uniform") {
        PiecewiseUniform1D d;
        d.breakpoints = real_vector(need(j, "breakpoints"), field + ".breakpoints");
        d.densities = real_vector(need(j, "densities"), field + ".densities");
        try {
            d.validate();
        } catch (const std::invalid_argument& e) {
            fail(field, e.what());
        }
        return d;
    }
    SamplerSpec spec;
    spec.seed = seed;
    if (type == "uniform_box") {
        spec.dist = UniformBox{real_vector(need(j, "lo"), field + ".lo"),
                               real_vector(need(j, "hi"), field + ".hi")};
    } else if (type == "gaussian") {
        spec.dist = GaussianSampler{real_vector(need(j, "mean"), field + ".mean"),
                                    real_vector(need(j, "stddev"), field + ".stddev")};
    } else if (type == "empirical") {
        EmpiricalSampler e;
        const Json& pts = need(j, "points");
        if (!pts.is_array() || pts.empty()) fail(field + ".points", "expected a nonempty array");
        for (const auto& p : pts) {
            e.points.push_back(CasePoint{real_vector(p, field + ".points")});
        }
        spec.dist = std::move(e);
    } else {
        fail(field + ".type", "unknown distribution type");
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        fail(field, e.what());
    }
    return spec;
}

Json distribution_json(const std::variant<PiecewiseUniform1D, SamplerSpec>& d) {
    Json j;
    if (const auto* pu = std::get_if<PiecewiseUniform1D>(&d)) {
        j["type"] = "piecewise_uniform";
        j["breakpoints"] = pu->breakpoints;
        j["densities"] = pu->densities;
        return j;
    }
    const auto& spec = std::get<SamplerSpec>(d);
    if (const auto* b = std::get_if<UniformBox>(&spec.dist)) {
        j["type"] = "uniform_box";
        j["lo"] = b->lo;
        j["hi"] = b->hi;
    } else if (const auto* g = std::get_if<GaussianSampler>(&spec.dist)) {
        j["type"] = "gaussian";
        j["mean"] = g->mean;
        j["stddev"] = g->stddev;
    } else {
        j["type"] = "empirical";
        Json pts = Json::array();
        for (const auto& p : std::get<EmpiricalSampler>(spec.dist).points) {
            pts.push_back(point_json(p));
        }
        j["points"] = std::move(pts);
    }
    return j;
}

SolverKind parse_solver(const Json& v) {
    if (v == "optimal") return SolverKind::Optimal;
    if (v == "budgeted") return SolverKind::Budgeted;
    if (v == "relabel") return SolverKind::Relabel;
    if (v == "greedy") return SolverKind::Greedy;
    if (v == "pair_lookahead") return SolverKind::PairLookahead;
    if (v == "teach2") return SolverKind::Teach2;
    if (v == "best_achievable") return SolverKind::BestAchievable;
    if (v == "overturn_teach") return SolverKind::OverturnTeach;
    if (v == "session") return SolverKind::Session;
    fail("solver", "unknown solver " + v.dump());
}

const char* solver_name(SolverKind k) {
    switch (k) {
        case SolverKind::Optimal: return "optimal";
        case SolverKind::Budgeted: return "budgeted";
        case SolverKind::Relabel: return "relabel";
        case SolverKind::Greedy: return "greedy";
        case SolverKind::PairLookahead: return "pair_lookahead";
        case SolverKind::Teach2: return "teach2";
        case SolverKind::BestAchievable: return "best_achievable";
        case SolverKind::OverturnTeach: return "overturn_teach";
        case SolverKind::Session: return "session";
    }
    return "?";
}

const char* policy_name(RemovalPolicy::Kind k) {
    switch (k) {
        case RemovalPolicy::Kind::LexicographicFirst: return "lexicographic_first";
        case RemovalPolicy::Kind::SeededRandom: return "seeded_random";
        case RemovalPolicy::Kind::AdversarialWorst: return "adversarial_worst";
    }
    return "?";
}

}  // namespace

Scenario load_scenario_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");

    Scenario s;
    const Json& setting = need(j, "setting");
    if (setting == "nn1d") {
        s.setting = Setting::Nn1D;
    } else if (setting == "svm") {
        s.setting = Setting::Svm;
    } else {
        fail("setting", "expected \"nn1d\" or \"svm\"");
    }

    const Json& dim = need(j, "dimension");
    if (!dim.is_number_unsigned() || dim.get<std::uint64_t>() == 0) {
        fail("dimension", "expected a positive integer");
    }
    s.dimension = dim.get<std::size_t>();
    if (s.setting == Setting::Nn1D && s.dimension != 1) fail("dimension", "nn1d requires 1");
    if (s.setting == Setting::Svm && s.dimension < 2) fail("dimension", "svm requires >= 2");

    s.solver = parse_solver(need(j, "solver"));

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        s.seed = j["seed"].get<std::uint64_t>();
        s.seed_set = true;
    }

    s.f_star = parse_rule(need(j, "f_star"), "f_star");
    s.g = parse_rule(need(j, "g"), "g");
    for (const CourtRule* r : {&s.f_star, &s.g}) {
        std::size_t d = 1;
        if (const auto* sep = std::get_if<LinearSeparator>(r)) d = sep->dim();
        if (std::holds_alternative<ConstantRule>(*r)) continue;
        bool is_pw = std::holds_alternative<Piecewise1DFn>(*r);
        if (s.setting == Setting::Nn1D && !is_pw) {
            fail(r == &s.f_star ? "f_star" : "g", "nn1d requires piecewise1d rules");
        }
        if (s.setting == Setting::Svm && is_pw) {
            fail(r == &s.f_star ? "f_star" : "g", "svm requires linear_separator rules");
        }
        if (s.setting == Setting::Svm && d != s.dimension) {
            fail(r == &s.f_star ? "f_star" : "g", "dimension mismatch");
        }
    }

    s.distribution = parse_distribution(need(j, "distribution"), s.seed, "distribution");
    if (const auto* spec = std::get_if<SamplerSpec>(&s.distribution)) {
        if (!s.seed_set) fail("seed", "mandatory when a sampler is used");
        if (spec->dim() != s.dimension) fail("distribution", "dimension mismatch");
    }

    if (j.contains("history")) {
        if (!j["history"].is_array()) fail("history", "expected an array of cases");
        for (const auto& c : j["history"]) {
            LabeledCase lc;
            lc.point = parse_point(need(c, "point"), s.dimension, "history.point");
            lc.label = parse_label(need(c, "label"), "history.label");
            if (c.contains("era")) {
                if (c["era"] == "stale") {
                    lc.era = Era::Stale;
                } else if (c["era"] == "current") {
                    lc.era = Era::Current;
                } else {
                    fail("history.era", "expected \"current\" or \"stale\"");
                }
            }
            s.history.upsert(lc);
        }
    }

    if (j.contains("pool")) {
        if (!j["pool"].is_array()) fail("pool", "expected an array");
        if (s.setting == Setting::Nn1D) {
            s.pool = real_vector(j["pool"], "pool");
        } else {
            for (const auto& p : j["pool"]) {
                s.pool_points.push_back(parse_point(p, s.dimension, "pool"));
            }
        }
    }
    if (j.contains("filings")) {
        if (!j["filings"].is_array()) fail("filings", "expected an array of points");
        for (const auto& p : j["filings"]) {
            s.filings.push_back(parse_point(p, s.dimension, "filings"));
        }
    }

    if (j.contains("k")) {
        if (!j["k"].is_number_unsigned()) fail("k", "expected a nonnegative integer");
        s.k = j["k"].get<std::size_t>();
    } else if (s.solver == SolverKind::Budgeted) {
        fail("k", "missing (required by the budgeted solver)");
    }
    if (j.contains("epsilon")) {
        s.epsilon = need_real(j, "epsilon");
        if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) fail("epsilon", "must be in (0,1)");
    }
    if (j.contains("sample_n")) {
        if (!j["sample_n"].is_number_unsigned() || j["sample_n"].get<std::uint64_t>() == 0) {
            fail("sample_n", "expected a positive integer");
        }
        s.sample_n = j["sample_n"].get<std::size_t>();
    }
    if (j.contains("removal_policy")) {
        const Json& p = j["removal_policy"];
        if (p == "lexicographic_first") {
            s.policy = RemovalPolicy::Kind::LexicographicFirst;
        } else if (p == "seeded_random") {
            s.policy = RemovalPolicy::Kind::SeededRandom;
            if (!s.seed_set) fail("seed", "mandatory with the seeded_random policy");
        } else if (p == "adversarial_worst") {
            s.policy = RemovalPolicy::Kind::AdversarialWorst;
        } else {
            fail("removal_policy", "unknown policy " + p.dump());
        }
    }

    bool needs_1d_dist = s.setting == Setting::Nn1D;
    if (needs_1d_dist && !std::holds_alternative<PiecewiseUniform1D>(s.distribution)) {
        fail("distribution", "nn1d requires a piecewise_uniform distribution");
    }
    if (s.solver == SolverKind::BestAchievable &&
        !std::holds_alternative<SamplerSpec>(s.distribution)) {
        fail("distribution", "best_achievable requires a sampler");
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_text(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
    Json j;
    j["setting"] = s.setting == Setting::Nn1D ? "nn1d" : "svm";
    j["dimension"] = s.dimension;
    j["solver"] = solver_name(s.solver);
    if (s.seed_set) j["seed"] = s.seed;
    j["f_star"] = rule_json(s.f_star);
    j["g"] = rule_json(s.g);
    j["distribution"] = distribution_json(s.distribution);
    Json hist = Json::array();
    for (const auto& c : s.history.cases()) hist.push_back(case_json(c));
    j["history"] = std::move(hist);
    if (s.setting == Setting::Nn1D) {
        j["pool"] = s.pool;
    } else {
        Json pool = Json::array();
        for (const auto& p : s.pool_points) pool.push_back(point_json(p));
        j["pool"] = std::move(pool);
    }
    Json filings = Json::array();
    for (const auto& p : s.filings) filings.push_back(point_json(p));
    j["filings"] = std::move(filings);
    j["k"] = s.k;
    j["epsilon"] = s.epsilon;
    j["sample_n"] = s.sample_n;
    j["removal_policy"] = policy_name(s.policy);
    return dump_17(j);
}

namespace {

Json selection_json(const SelectionResult& r) {
    Json j;
    j["chosen"] = r.chosen;
    Json labels = Json::array();
    for (Label l : r.labels) labels.push_back(label_json(l));
    j["labels"] = std::move(labels);
    j["achieved_error"] = r.achieved_error;
    j["learned"] = rule_json(CourtRule{r.learned});
    return j;
}

Json steps_json(const std::vector<StrategyStep>& steps) {
    Json arr = Json::array();
    for (const auto& st : steps) {
        Json e;
        e["picked"] = st.picked;
        e["error_after"] = st.error_after;
        arr.push_back(std::move(e));
    }
    return arr;
}

Json run_nn1d(const Scenario& s) {
    const auto& f = std::get<Piecewise1DFn>(s.f_star);
    const auto& g = std::get<Piecewise1DFn>(s.g);
    const auto& d = std::get<PiecewiseUniform1D>(s.distribution);
    Pool1D pool = Pool1D::of(s.pool);
    Json out;
    out["solver"] = solver_name(s.solver);
    switch (s.solver) {
        case SolverKind::Optimal:
            out.update(selection_json(solve_optimal(f, g, d, s.history, pool)));
            break;
        case SolverKind::Budgeted:
            out["k"] = s.k;
            out.update(selection_json(solve_budgeted(f, g, d, s.history, pool, s.k)));
            break;
        case SolverKind::Relabel:
            out.update(selection_json(solve_with_relabel(f, g, d, s.history, pool)));
            break;
        case SolverKind::Greedy: {
            auto r = greedy_strategy(f, g, d, s.history, pool);
            out.update(selection_json(r.result));
            out["steps"] = steps_json(r.steps);
            break;
        }
        case SolverKind::PairLookahead: {
            auto r = pair_lookahead_strategy(f, g, d, s.history, pool);
            out.update(selection_json(r.result));
            out["steps"] = steps_json(r.steps);
            break;
        }
        default:
            throw ScenarioError("field 'solver': not valid for the nn1d setting");
    }
    return out;
}

Json run_svm(const Scenario& s) {
    const auto& f = std::get<LinearSeparator>(s.f_star);
    Json out;
    out["solver"] = solver_name(s.solver);
    switch (s.solver) {
        case SolverKind::Teach2: {
            const auto& g = std::get<LinearSeparator>(s.g);
            auto plan = teach_two_points(f, g, s.history);
            Json pts = Json::array();
            for (const auto& p : plan.points) pts.push_back(point_json(p));
            out["points"] = std::move(pts);
            Json labels = Json::array();
            for (Label l : plan.expected_labels) labels.push_back(label_json(l));
            out["labels"] = std::move(labels);
            PrecedentSet all = s.history;
            for (std::size_t i = 0; i < plan.points.size(); ++i) {
                all.upsert({plan.points[i], plan.expected_labels[i], Era::Current});
            }
            out["final_separator"] = rule_json(svm_fit(all).rule());
            break;
        }
        case SolverKind::BestAchievable: {
            const auto& g = std::get<LinearSeparator>(s.g);
            auto r = best_achievable(f, g, s.history, std::get<SamplerSpec>(s.distribution),
                                     s.epsilon);
            out["proxy"] = rule_json(r.proxy);
            out["sample_error"] = r.sample_error;
            out["fallback"] = r.fallback;
            break;
        }
        case SolverKind::OverturnTeach: {
            const auto& g = std::get<LinearSeparator>(s.g);
            auto plan = teach_with_overturning(f, g, s.history);
            Json pts = Json::array();
            for (const auto& p : plan.points) pts.push_back(point_json(p));
            out["points"] = std::move(pts);
            Json labels = Json::array();
            for (Label l : plan.expected_labels) labels.push_back(label_json(l));
            out["labels"] = std::move(labels);
            out["case"] =
                plan.kind == AchievableCase::Parallel ? "parallel" : "intersecting";
            out["epsilon"] = plan.used.epsilon;
            out["alpha"] = plan.used.alpha;
            out["big_m"] = plan.used.big_m;
            break;
        }
        default:
            throw ScenarioError("field 'solver': not valid for the svm setting");
    }
    return out;
}

Json run_session_scenario(const Scenario& s) {
    LearnerKind kind = s.setting == Setting::Nn1D ? LearnerKind::Nn1D : LearnerKind::Svm;
    ErrorModel err{s.g, s.distribution, s.sample_n};
    RemovalPolicy policy;
    policy.kind = s.policy;
    policy.seed = s.seed;
    auto t = run_session(s.f_star, kind, s.history, s.filings, err, policy);

    Json out;
    out["solver"] = "session";
    Json initial;
    initial["rule"] = rule_json(t.initial_rule);
    initial["error"] = t.initial_error;
    out["initial"] = std::move(initial);
    Json steps = Json::array();
    for (const auto& st : t.steps) {
        Json e;
        e["brought"] = point_json(st.brought);
        e["label"] = label_json(st.assigned);
        Json removed = Json::array();
        for (const auto& c : st.removed) removed.push_back(case_json(c));
        e["removed"] = std::move(removed);
        e["rule"] = rule_json(st.rule);
        e["error"] = st.error;
        steps.push_back(std::move(e));
    }
    out["steps"] = std::move(steps);
    Json fin = Json::array();
    for (const auto& c : t.final_precedent.cases()) fin.push_back(case_json(c));
    out["final_precedent"] = std::move(fin);
    return out;
}

}  // namespace

std::string run_scenario(const Scenario& s) {
    if (s.solver == SolverKind::Session) return dump_17(run_session_scenario(s));
    if (s.setting == Setting::Nn1D) return dump_17(run_nn1d(s));
    return dump_17(run_svm(s));
}

}  // namespace precedent
