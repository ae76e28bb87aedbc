// Command-line front end: build, verify, curvature, deform, example, sample.
//
// Exit codes: 0 all checks pass, 1 verification failure, 2 config or parse
// error, 3 numeric singularity (witness written to stderr as JSON).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cms/pipeline.hpp"

namespace {

using namespace cms;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json load_json_file(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + out_path + "'");
    out << content;
}

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::vector<int> grid;
    double tol = -1.0;
    int quad_steps = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool config_required) {
    auto* c = cmd->add_option("-c,--config", opt.config_path, "input JSON file");
    if (config_required) c->required();
    cmd->add_option("-o,--out", opt.out_path, "output file (default: stdout)");
    cmd->add_option("--grid", opt.grid, "override grid as n1 n2 n3")->expected(3);
    cmd->add_option("--tol", opt.tol, "override the axiom tolerance");
    cmd->add_option("--quad-steps", opt.quad_steps, "override Simpson step count");
}

void apply_overrides(RunConfig& cfg, const CommonOptions& opt) {
    if (!opt.grid.empty())
        for (int a = 0; a < 3; ++a) cfg.domain.cells[a] = opt.grid[a];
    if (opt.tol > 0.0) cfg.tolerances.axiom = opt.tol;
    if (opt.quad_steps > 0) cfg.quadrature.steps = opt.quad_steps;
    cfg.validate();
}

int finish_with_report(const VerificationReport& rep, const std::string& out_path) {
    write_output(serialize_json(report_json(rep)), out_path);
    return rep.overall_pass ? 0 : 1;
}

int cmd_build(const CommonOptions& opt) {
    RunConfig cfg = run_config_from_json(load_json_file(opt.config_path));
    apply_overrides(cfg, opt);
    RunResult result = run_algorithm(cfg);
    std::cout << serialize_json(report_json(result.report));
    if (result.structure && !opt.out_path.empty())
        write_output(serialize_json(structure_to_json(result)), opt.out_path);
    else if (!opt.out_path.empty())
        std::cerr << "no structure produced; nothing written to '" << opt.out_path << "'\n";
    return result.report.overall_pass ? 0 : 1;
}

int cmd_verify(const CommonOptions& opt) {
    VerificationReport rep = verify_structure_json(load_json_file(opt.config_path));
    return finish_with_report(rep, opt.out_path);
}

int cmd_curvature(const CommonOptions& opt) {
    Json input = load_json_file(opt.config_path);
    LoadedStructure loaded = load_structure(input);
    if (!opt.grid.empty())
        for (int a = 0; a < 3; ++a) loaded.domain.cells[a] = opt.grid[a];
    loaded.domain.validate();
    write_output(serialize_json(curvature_report_to_json(loaded.structure, loaded.domain)),
                 opt.out_path);
    return 0;
}

int cmd_deform(const CommonOptions& opt) {
    DeformConfig cfg = deform_config_from_json(load_json_file(opt.config_path));
    if (!opt.grid.empty())
        for (int a = 0; a < 3; ++a) cfg.domain.cells[a] = opt.grid[a];
    if (opt.tol > 0.0) cfg.tolerances.axiom = opt.tol;
    cfg.domain.validate();
    DeformResult result = run_deform(cfg);
    std::cout << serialize_json(report_json(result.report));
    if (!opt.out_path.empty())
        write_output(serialize_json(structure_to_json(result)), opt.out_path);
    return result.report.overall_pass ? 0 : 1;
}

int cmd_example(const CommonOptions& opt) {
    RunConfig cfg = example_config();
    apply_overrides(cfg, opt);
    RunResult result = run_example(cfg);
    return finish_with_report(result.report, opt.out_path);
}

int cmd_sample(const CommonOptions& opt) {
    Json input = load_json_file(opt.config_path);
    LoadedStructure loaded = load_structure(input);
    if (!opt.grid.empty())
        for (int a = 0; a < 3; ++a) loaded.domain.cells[a] = opt.grid[a];
    loaded.domain.validate();
    write_output(sample_csv(loaded.structure, loaded.domain), opt.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contact metric structures on coordinate patches of 3-manifolds"};
    app.require_subcommand(1);

    CommonOptions opt;
    auto* build = app.add_subcommand("build", "run the construction pipeline; report to stdout, "
                                              "structure JSON to -o");
    add_common(build, opt, true);
    auto* verify = app.add_subcommand("verify", "re-check a stored structure JSON");
    add_common(verify, opt, true);
    auto* curv = app.add_subcommand("curvature", "emit a curvature report over the grid");
    add_common(curv, opt, true);
    auto* deform = app.add_subcommand("deform", "deform a declared-orthonormal frame into an "
                                                "associated structure");
    add_common(deform, opt, true);
    auto* example = app.add_subcommand("example", "run the built-in fixture");
    add_common(example, opt, false);
    auto* sample = app.add_subcommand("sample", "tabulate g and frame invariants as CSV");
    add_common(sample, opt, true);

    try {
        app.parse(argc, argv);
        if (build->parsed()) return cmd_build(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (curv->parsed()) return cmd_curvature(opt);
        if (deform->parsed()) return cmd_deform(opt);
        if (example->parsed()) return cmd_example(opt);
        if (sample->parsed()) return cmd_sample(opt);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cms::HypothesisViolatedError& e) {
        Json err;
        err["error"] = e.what();
        err["violated_hypotheses"] = e.violated();
        Json witnesses = Json::array();
        for (const auto& w : e.witnesses()) witnesses.push_back(cms::point_json(w));
        err["witnesses"] = std::move(witnesses);
        std::cerr << cms::serialize_json(err);
        return 1;
    } catch (const cms::NumericSingularityError& e) {
        Json err;
        err["error"] = e.what();
        err["witness"] = cms::point_json(e.witness());
        std::cerr << cms::serialize_json(err);
        return 3;
    } catch (const cms::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const cms::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cms::FieldConstraintError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
