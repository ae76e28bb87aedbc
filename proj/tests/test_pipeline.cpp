#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <map>
#include <numeric>

#include "cms/pipeline.hpp"

using namespace cms;

namespace {

RunConfig golden_small() {
    RunConfig cfg = example_config();
    cfg.domain.cells = {4, 4, 4};
    return cfg;
}

RunConfig linear_config() {
    RunConfig cfg;
    cfg.alpha = "x3";
    cfg.beta = "1";
    cfg.epsilon = "x2";
    cfg.F = "0";
    cfg.K = "1";
    cfg.domain.lo = {0.5, 0.5, 0.5};
    cfg.domain.hi = {2.0, 2.0, 2.0};
    cfg.domain.cells = {4, 4, 4};
    return cfg;
}

std::map<std::string, bool> pass_map(const VerificationReport& rep) {
    std::map<std::string, bool> m;
    for (const auto& c : rep.checks)
        if (!c.skipped) m[c.name] = c.pass;
    return m;
}

}  // namespace

TEST_CASE("config validation") {
    RunConfig cfg = golden_small();
    cfg.domain.cells = {1, 4, 4};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = golden_small();
    cfg.tolerances.axiom = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = golden_small();
    cfg.quadrature.base_x2 = 10.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = golden_small();
    cfg.quadrature.steps = 15;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    // forced branch must match the decision
    cfg = golden_small();
    cfg.branch = BranchChoice::Linear;
    CHECK_THROWS_AS(run_algorithm(cfg), ConfigError);

    // config json round trip
    RunConfig parsed = run_config_from_json(run_config_to_json(golden_small()));
    CHECK(parsed.alpha == "0");
    CHECK(parsed.beta == "x2");
    CHECK(*parsed.zeta_override == "-1/(x2^2)");
    CHECK(parsed.domain.cells[0] == 4);
    CHECK(parsed.quadrature.steps == 256);
}

TEST_CASE("run_algorithm on the golden generators") {
    RunResult r = run_algorithm(golden_small());
    REQUIRE(r.structure.has_value());
    CHECK(r.report.overall_pass);
    CHECK(r.report.branch == "riccati");
    CHECK(r.report.det_b_sign == "negative");
    CHECK(r.report.zeta_provenance == "riccati branch");
    CHECK(r.report.grid_points_checked == 64);
    const CheckStats* agree = r.report.find("riccati_solver_agreement");
    REQUIRE(agree != nullptr);
    CHECK(agree->pass);
    CHECK(agree->points_checked == 16);  // one per (x2,x3) pair
}

TEST_CASE("run_algorithm on the linear branch") {
    RunResult r = run_algorithm(linear_config());
    REQUIRE(r.structure.has_value());
    CHECK(r.report.overall_pass);
    CHECK(r.report.branch == "linear-solvable");
    CHECK(r.report.zeta_provenance == "linear branch");
    REQUIRE(r.structure->generators.has_value());
    CHECK(r.structure->generators->zeta.is_literal());
    CHECK(r.structure->generators->zeta.literal_value() == -2.0);
    const CheckStats* lin = r.report.find("linear_solution_residual");
    REQUIRE(lin != nullptr);
    CHECK(lin->pass);
}

TEST_CASE("run_algorithm reports the no-solution branch as structured failure") {
    RunConfig cfg = linear_config();
    cfg.alpha = "0";
    RunResult r = run_algorithm(cfg);
    CHECK_FALSE(r.structure.has_value());
    CHECK_FALSE(r.report.overall_pass);
    CHECK(r.report.branch == "no-solution");
    CHECK(r.report.branch_rationale.find("2/beta") != std::string::npos);
    const CheckStats* c = r.report.find("branch_admits_solution");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
}

TEST_CASE("riccati branch without an override runs the pointwise checks") {
    RunConfig cfg = golden_small();
    cfg.zeta_override.reset();
    cfg.zeta_provenance_label.clear();
    cfg.quadrature.steps = 64;
    cfg.domain.cells = {3, 3, 3};
    RunResult r = run_algorithm(cfg);
    CHECK_FALSE(r.structure.has_value());
    CHECK(r.report.overall_pass);
    CHECK(r.report.zeta_provenance == "riccati branch (pointwise quadrature)");
    const CheckStats* fd = r.report.find("riccati_residual_sampled");
    REQUIRE(fd != nullptr);
    CHECK(fd->pass);
    CHECK(fd->points_checked == 9);
    const CheckStats* wedge = r.report.find("wedge_identity_sampled");
    REQUIRE(wedge != nullptr);
    CHECK(wedge->pass);
    const CheckStats* ax = r.report.find("axiom_eta_xi");
    REQUIRE(ax != nullptr);
    CHECK(ax->skipped);
    CHECK_FALSE(ax->skip_reason.empty());

    CHECK_THROWS_AS(structure_from_config(cfg), ConfigError);
}

TEST_CASE("riccati branch with a coupled x3-dependent alpha") {
    // generators with (alpha/beta)_3 = x2, so the outer integral of the
    // closed form is nonzero; zeta below is the exact solution for K = 1
    // (checked by hand: at x2 = 1 it gives zeta = -1, zeta_2 = 1, and the
    // equation 1 + x2 zeta^2 + 2 zeta = 0 holds)
    RunConfig cfg;
    cfg.alpha = "x2*x3";
    cfg.beta = "1";
    cfg.epsilon = "x1+x3";
    cfg.F = "1";
    cfg.K = "1";
    cfg.zeta_override = "exp(-2*(x2-1))/(-0.25-(x2/2+0.25)*exp(-2*(x2-1)))";
    cfg.domain.lo = {0.5, 0.5, 0.5};
    cfg.domain.hi = {2.0, 2.0, 2.0};
    cfg.domain.cells = {3, 3, 3};
    cfg.quadrature.steps = 128;
    cfg.quadrature.base_x2 = 1.0;

    RunResult r = run_algorithm(cfg);
    REQUIRE(r.structure.has_value());
    INFO(serialize_json(report_json(r.report)));
    CHECK(r.report.overall_pass);
    CHECK(r.report.branch == "riccati");
    const CheckStats* agree = r.report.find("riccati_solver_agreement");
    REQUIRE(agree != nullptr);
    CHECK(agree->pass);
    CHECK(agree->max_residual > 0.0);  // genuine quadrature, not the J = 0 shortcut
    CHECK(r.report.det_b_sign == "negative");
}

TEST_CASE("build then verify reproduces the report byte for byte") {
    RunResult built = run_algorithm(golden_small());
    REQUIRE(built.structure.has_value());
    Json stored = structure_to_json(built);
    VerificationReport verified = verify_structure_json(stored);
    CHECK(pass_map(built.report) == pass_map(verified));
    CHECK(serialize_json(report_json(built.report)) ==
          serialize_json(report_json(verified)));
}

TEST_CASE("deform round trip through the stored frame structure") {
    DeformConfig cfg;
    cfg.e1 = {"1", "0", "0"};
    cfg.e2 = {"0", "1", "4*x1"};
    cfg.e3 = {"0", "0", "1"};
    cfg.domain.lo = {0.5, 0.5, 0.5};
    cfg.domain.hi = {2.0, 2.0, 2.0};
    cfg.domain.cells = {3, 3, 3};
    DeformResult r = run_deform(cfg);
    CHECK(r.report.overall_pass);
    CHECK(r.report.branch == "deformation");

    Json stored = structure_to_json(r);
    VerificationReport verified = verify_structure_json(stored);
    CHECK(pass_map(r.report) == pass_map(verified));
    CHECK(verified.overall_pass);
}

TEST_CASE("excluded loci are skipped and recorded") {
    RunConfig cfg = linear_config();
    cfg.domain.lo = {0.0, 0.5, 0.5};
    cfg.domain.hi = {2.0, 2.0, 2.0};
    cfg.domain.cells = {2, 2, 2};
    cfg.excluded = {"x1-0.5"};  // hits the cell centers with x1 = 0.5
    RunResult r = run_algorithm(cfg);
    CHECK(r.report.grid_points_total == 8);
    CHECK(r.report.grid_points_checked == 4);
    REQUIRE(r.report.skipped_points.size() == 4);
    CHECK(r.report.skipped_points[0].reason.find("excluded locus") != std::string::npos);
    CHECK(r.report.overall_pass);

    // excluding everything must not pass vacuously
    cfg.excluded = {"x1-0.5", "x1-1.5"};
    RunResult all_skipped = run_algorithm(cfg);
    CHECK(all_skipped.report.grid_points_checked == 0);
    CHECK_FALSE(all_skipped.report.overall_pass);
}

TEST_CASE("determinism of the example report") {
    std::string a = serialize_json(report_json(run_example().report));
    std::string b = serialize_json(report_json(run_example().report));
    CHECK(a == b);
    CHECK(a.find("\"overall_pass\": true") != std::string::npos);
}

TEST_CASE("sample csv has the documented header and one row per point") {
    RunResult r = run_algorithm(linear_config());
    REQUIRE(r.structure.has_value());
    std::string csv = sample_csv(*r.structure, r.config.domain);
    CHECK(csv.rfind("x1,x2,x3,g11,g12,g13,g22,g23,g33,lambda,a,b,c\n", 0) == 0);
    long rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 1 + 64);
    CHECK(csv == sample_csv(*r.structure, r.config.domain));
}

TEST_CASE("curvature report json aggregates the grid") {
    RunConfig cfg = golden_small();
    cfg.domain.cells = {2, 2, 2};
    ContactStructure s = structure_from_config(cfg);
    Json j = curvature_report_to_json(s, cfg.domain);
    CHECK(j["kind"] == "curvature_report");
    CHECK(j["points"].size() == 8);
    CHECK(j["max_route_delta"].get<double>() <= 1e-5);
    CHECK(j["max_riemann_symmetry_residual"].get<double>() <= 1e-7);
}

TEST_CASE("parallel_for_index covers every slot once with any worker count") {
    for (int workers : {1, 2, 4, 7}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for_index(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); }, workers);
        for (const auto& h : hits) REQUIRE(h.load() == 1);
    }

    // when several indices throw, the smallest one wins deterministically
    for (int trial = 0; trial < 5; ++trial) {
        try {
            parallel_for_index(
                64,
                [&](std::size_t i) {
                    if (i % 7 == 3) throw std::runtime_error(std::to_string(i));
                },
                4);
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            REQUIRE(std::string(e.what()) == "3");
        }
    }
}

TEST_CASE("serialize_json prints floats with 17 significant digits") {
    Json j;
    j["x"] = 0.1;
    j["n"] = 42;
    j["s"] = "a\"b";
    std::string out = serialize_json(j);
    CHECK(out.find("0.10000000000000001") != std::string::npos);
    CHECK(out.find("\"n\": 42") != std::string::npos);
    CHECK(out.find("\"a\\\"b\"") != std::string::npos);
}
