// precedent-cli: scenario runner for the strategic-litigation model.
//
// Subcommands:
//   run <scenario> [-o result] [--render svg] [--seed N] [--policy P]
//   render <scenario> <result> [-o svg]
//   validate <scenario>
//   suite [--dir scenarios] [--update]
//
// Exit codes: 0 success, 2 validation failure, 3 solver/model error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "precedent/render.hpp"
#include "precedent/scenario.hpp"

namespace fs = std::filesystem;
using namespace precedent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

struct Overrides {
    bool seed_set = false;
    std::uint64_t seed = 0;
    std::string policy;
};

void apply(Scenario& s, const Overrides& ov) {
    if (ov.seed_set) {
        s.seed = ov.seed;
        s.seed_set = true;
        if (auto* spec = std::get_if<SamplerSpec>(&s.distribution)) spec->seed = ov.seed;
    }
    if (!ov.policy.empty()) {
        if (ov.policy == "lexicographic_first") {
            s.policy = RemovalPolicy::Kind::LexicographicFirst;
        } else if (ov.policy == "seeded_random") {
            s.policy = RemovalPolicy::Kind::SeededRandom;
            if (!s.seed_set) throw ScenarioError("field 'seed': mandatory with the seeded_random policy");
        } else if (ov.policy == "adversarial_worst") {
            s.policy = RemovalPolicy::Kind::AdversarialWorst;
        } else {
            throw ScenarioError("field 'removal_policy': unknown policy \"" + ov.policy + "\"");
        }
    }
}

int cmd_run(const std::string& scenario_path, const std::string& out_path,
            const std::string& render_path, const Overrides& ov) {
    Scenario s = load_scenario(scenario_path);
    apply(s, ov);
    std::string result = run_scenario(s);
    if (out_path.empty()) {
        std::cout << result;
    } else {
        spit(out_path, result);
    }
    if (!render_path.empty()) spit(render_path, render_svg(s, result));
    return kExitOk;
}

int cmd_render(const std::string& scenario_path, const std::string& result_path,
               const std::string& out_path) {
    Scenario s = load_scenario(scenario_path);
    std::string svg = render_svg(s, slurp(result_path));
    if (out_path.empty()) {
        std::cout << svg;
    } else {
        spit(out_path, svg);
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
    load_scenario(scenario_path);
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_suite(const std::string& dir, bool update) {
    std::vector<fs::path> scenarios;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json" &&
            e.path().stem().string().ends_with(".scenario")) {
            scenarios.push_back(e.path());
        }
    }
    std::sort(scenarios.begin(), scenarios.end());
    if (scenarios.empty()) {
        std::cerr << "no *.scenario.json files in " << dir << "\n";
        return kExitValidation;
    }

    // independent scenarios may run concurrently
    struct Outcome {
        std::string name;
        bool ok = false;
        std::string message;
        std::string produced;
        fs::path expected_path;
    };
    std::vector<std::future<Outcome>> futures;
    for (const auto& path : scenarios) {
        futures.push_back(std::async(std::launch::async, [path]() {
            Outcome o;
            std::string stem = path.stem().string();  // "<name>.scenario"
            o.name = stem.substr(0, stem.size() - 9);
            o.expected_path = path.parent_path() / (o.name + ".result.json");
            try {
                o.produced = run_scenario(load_scenario(path.string()));
            } catch (const std::exception& e) {
                o.message = e.what();
                return o;
            }
            if (!fs::exists(o.expected_path)) {
                o.message = "missing expected result " + o.expected_path.string();
                return o;
            }
            std::ifstream in(o.expected_path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            if (buf.str() == o.produced) {
                o.ok = true;
            } else {
                o.message = "result differs from " + o.expected_path.string();
            }
            return o;
        }));
    }

    bool all_ok = true;
    for (auto& f : futures) {
        Outcome o = f.get();
        if (update && !o.produced.empty()) {
            spit(o.expected_path.string(), o.produced);
            std::cout << o.name << ": updated\n";
            continue;
        }
        std::cout << o.name << ": " << (o.ok ? "ok" : "FAIL " + o.message) << "\n";
        all_ok = all_ok && o.ok;
    }
    if (update) return kExitOk;
    return all_ok ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strategic-litigation scenario runner"};
    app.require_subcommand(1);

    std::string scenario_path, result_path, out_path, render_path, suite_dir = "scenarios";
    bool update = false;
    Overrides ov;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--seed", ov.seed, "override the scenario seed")
            ->each([&](const std::string&) { ov.seed_set = true; });
        cmd->add_option("--policy", ov.policy,
                        "override the removal policy (lexicographic_first | "
                        "seeded_random | adversarial_worst)");
    };

    auto* run = app.add_subcommand("run", "run a scenario and write its result");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("-o,--output", out_path, "result file (default: stdout)");
    run->add_option("--render", render_path, "also render the result to this SVG file");
    add_overrides(run);

    auto* render = app.add_subcommand("render", "render a scenario plus an existing result");
    render->add_option("scenario", scenario_path, "scenario file")->required();
    render->add_option("result", result_path, "result file")->required();
    render->add_option("-o,--output", out_path, "SVG file (default: stdout)");

    auto* validate = app.add_subcommand("validate", "validate a scenario file");
    validate->add_option("scenario", scenario_path, "scenario file")->required();

    auto* suite = app.add_subcommand("suite", "run the bundled golden scenarios");
    suite->add_option("--dir", suite_dir, "directory of *.scenario.json files");
    suite->add_flag("--update", update, "rewrite the expected result files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_path, render_path, ov);
        if (render->parsed()) return cmd_render(scenario_path, result_path, out_path);
        if (validate->parsed()) return cmd_validate(scenario_path);
        return cmd_suite(suite_dir, update);
    } catch (const ScenarioError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}
