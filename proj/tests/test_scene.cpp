#include "canalkit/scene.hpp"

#include "canalkit/errors.hpp"
#include "canalkit/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace canalkit;
using njson = nlohmann::json;

namespace {

std::string scene_dir(const std::string& name) {
    const std::string dir = "test_artifacts/" + name;
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

const char* kHelixScene = R"({
  "spine": {"kind": "circular_helix", "params": {"a": 3.0, "b": 4.0},
            "domain": [0.0, 1.0]},
  "radius": {"form": "linear", "params": {"slope": 0.8, "offset": 0.1}},
  "branch": "plus",
  "grid": {"n_s": 9, "n_theta": 16},
  "tol": 1e-6,
  "synth": {"method": "quadrature", "theta_star": 1.5707963267948966,
            "c": 0.1},
  "trace": {"mode": "vessiot", "s0": 0.0, "theta0": 4.71238898038469,
            "samples": 21}
})";

const char* kTorusScene = R"({
  "spine": {"kind": "circle", "params": {"radius": 2.0}},
  "radius": {"form": "constant", "params": {"r": 0.5}},
  "grid": {"n_s": 17, "n_theta": 16, "wrap_s": true}
})";

}  // namespace

TEST_SUITE_BEGIN("scene");

TEST_CASE("scene parsing: fields and defaults") {
    const SceneConfig cfg = parse_scene_json(kHelixScene, "scene");
    REQUIRE(cfg.spine);
    REQUIRE(cfg.radius);
    CHECK_FALSE(cfg.profile);
    CHECK(cfg.branch == SignBranch::plus);
    CHECK(cfg.n_s == 9);
    CHECK(cfg.n_theta == 16);
    CHECK(cfg.wrap_theta);
    CHECK_FALSE(cfg.wrap_s);
    CHECK(cfg.tol == 1e-6);
    CHECK(cfg.theta_star == doctest::Approx(kPi / 2.0));
    CHECK(cfg.c == doctest::Approx(0.1));
    CHECK(cfg.trace.mode == "vessiot");
    CHECK(cfg.trace.samples == 21);
    CHECK(cfg.spine->kind() == SpineKind::circular_helix);
    CHECK(cfg.radius->value(1.0) == doctest::Approx(0.9));

    const SceneConfig dflt =
        parse_scene_json(R"({"spine": {"kind": "circle",
                             "params": {"radius": 1.0}}})",
                         "scene");
    CHECK(dflt.branch == SignBranch::minus);
    CHECK(dflt.n_s == 33);
    CHECK(dflt.n_theta == 64);
    CHECK(dflt.tol == 1e-6);
}

TEST_CASE("scene parsing: diagnostics and validation") {
    // the dangling comma sits on line 2
    CHECK_THROWS_WITH_AS(
        parse_scene_json("{\n  \"tol\": ,\n}", "cfg.json"),
        doctest::Contains("cfg.json:2:"), InvalidParameter);
    CHECK_THROWS_WITH_AS(parse_scene_json("[1, 2]", "cfg.json"),
                         doctest::Contains("object"), InvalidParameter);
    CHECK_THROWS_AS(
        parse_scene_json(R"({"spine": {"kind": "mystery", "params": {}}})",
                         "x"),
        InvalidParameter);
    CHECK_THROWS_WITH_AS(
        parse_scene_json(R"({"spine": {"kind": "circular_helix",
                             "params": {"a": 3.0}}})",
                         "x"),
        doctest::Contains("'b'"), InvalidParameter);
    CHECK_THROWS_AS(parse_scene_json(R"({"tol": -1.0})", "x"),
                    InvalidParameter);
    CHECK_THROWS_AS(parse_scene_json(R"({"branch": "both"})", "x"),
                    InvalidParameter);
    CHECK_THROWS_WITH_AS(
        parse_scene_json(
            R"({"spine": {"kind": "circle", "params": {"radius": 1.0}},
                "radius": {"form": "constant", "params": {"r": 0.2}},
                "profile": {"form": "constant", "params": {"u": 0.2}}})",
            "x"),
        doctest::Contains("pick one"), InvalidParameter);
    CHECK_THROWS_AS(
        parse_scene_json(
            R"({"spine": {"kind": "circle", "params": {"radius": 1.0},
                          "domain": [2.0, 1.0]}})",
            "x"),
        InvalidParameter);
}

TEST_CASE("scene parsing: sampled spine from points and csv") {
    njson doc;
    doc["spine"]["kind"] = "sampled";
    njson pts = njson::array();
    for (int i = 0; i <= 24; ++i) {
        const double t = 2.0 * kPi * i / 24.0;
        pts.push_back(
            njson::array({t, 2.0 * std::cos(t), 2.0 * std::sin(t), 0.0}));
    }
    doc["spine"]["params"]["points"] = pts;
    const SceneConfig cfg = parse_scene_json(doc.dump(), "inline");
    REQUIRE(cfg.spine);
    CHECK(cfg.spine->kind() == SpineKind::sampled);
    // arc length of a full radius-2 circle
    CHECK(cfg.spine->domain().length() ==
          doctest::Approx(4.0 * kPi).epsilon(1e-3));

    const std::string dir = scene_dir("sampled_csv");
    std::ostringstream csv;
    csv << "t,x,y,z\n";
    for (int i = 0; i <= 24; ++i) {
        const double t = 2.0 * kPi * i / 24.0;
        csv << format_g9(t) << ',' << format_g9(2.0 * std::cos(t)) << ','
            << format_g9(2.0 * std::sin(t)) << ",0\n";
    }
    write_text_atomic(dir + "/spine_samples.csv", csv.str());
    njson doc2;
    doc2["spine"]["kind"] = "sampled";
    doc2["spine"]["params"]["csv"] = dir + "/spine_samples.csv";
    const SceneConfig cfg2 = parse_scene_json(doc2.dump(), "inline");
    CHECK(cfg2.spine->domain().length() ==
          doctest::Approx(4.0 * kPi).epsilon(1e-3));

    doc2["spine"]["params"]["csv"] = dir + "/no_such.csv";
    CHECK_THROWS_AS(parse_scene_json(doc2.dump(), "inline"), IoError);

    doc["spine"]["domain"] = njson::array({0.0, 1.0});
    CHECK_THROWS_WITH_AS(parse_scene_json(doc.dump(), "inline"),
                         doctest::Contains("arc length"), InvalidParameter);
}

TEST_CASE("cmd_spine writes the table and classification") {
    SceneConfig cfg = parse_scene_json(kHelixScene, "scene");
    RunOptions opts;
    opts.out_dir = scene_dir("spine_helix");
    opts.grid_s = 5;
    const auto written = cmd_spine(cfg, opts);
    REQUIRE(written.size() == 2);

    const auto rows = csv_rows(read_text_file(written[0]));
    REQUIRE(rows.size() == 6);  // header + 5
    CHECK(rows[0][0] == "s");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(std::stod(rows[k][1]) == doctest::Approx(0.12).epsilon(1e-12));
        CHECK(std::stod(rows[k][2]) == doctest::Approx(0.16).epsilon(1e-12));
    }
    const njson j = njson::parse(read_text_file(written[1]));
    CHECK(j["classification"] == "circular_helix");
    CHECK(j["kind"] == "circular_helix");

    SceneConfig circ = parse_scene_json(kTorusScene, "scene");
    RunOptions copts;
    copts.out_dir = scene_dir("spine_circle");
    const auto cw = cmd_spine(circ, copts);
    const njson cj = njson::parse(read_text_file(cw[1]));
    CHECK(cj["classification"] == "planar");
}

TEST_CASE("cmd_analyze on the torus") {
    SceneConfig cfg = parse_scene_json(kTorusScene, "scene");
    RunOptions opts;
    opts.out_dir = scene_dir("analyze_torus");
    const auto written = cmd_analyze(cfg, opts);
    REQUIRE(written.size() == 2);

    const auto rows = csv_rows(read_text_file(written[0]));
    CHECK(rows.size() == 1 + 17 * 16);
    REQUIRE(rows[0].size() == 13);
    CHECK(rows[0][12] == "regular_flag");
    // every torus node is regular with F = f = 0
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k][12] == "1");
        CHECK(std::abs(std::stod(rows[k][3])) <= 1e-9);
        CHECK(std::abs(std::stod(rows[k][6])) <= 1e-7);
    }

    const njson j = njson::parse(read_text_file(written[1]));
    CHECK(j["surface"] == "canal");
    CHECK(j["theorem3"] == "verified");
    CHECK(j["theta_curves_loc"] == "vacuous");
    CHECK(j["singular_count"] == 0);
    CHECK(j["F"].size() == 17 * 16);

    // byte determinism across runs
    RunOptions opts2;
    opts2.out_dir = scene_dir("analyze_torus_2");
    const auto written2 = cmd_analyze(cfg, opts2);
    CHECK(read_text_file(written[0]) == read_text_file(written2[0]));
    CHECK(read_text_file(written[1]) == read_text_file(written2[1]));
}

TEST_CASE("cmd_analyze on the synthesized helix canal") {
    SceneConfig cfg = parse_scene_json(kHelixScene, "scene");
    RunOptions opts;
    opts.out_dir = scene_dir("analyze_synth");
    const auto written = cmd_analyze(cfg, opts);
    const njson j = njson::parse(read_text_file(written[1]));
    CHECK(j["theorem3"] == "verified");
    CHECK(j["theta_curves_loc"] == "obstructed");
    CHECK(j["theta_obstruction"]["max_residual"].get<double>() > 1e-3);
}

TEST_CASE("cmd_synth: quadrature table and closed slope") {
    SceneConfig cfg = parse_scene_json(kHelixScene, "scene");
    RunOptions opts;
    opts.out_dir = scene_dir("synth_quadrature");
    const auto written = cmd_synth(cfg, opts);
    REQUIRE(written.size() == 2);
    const njson j = njson::parse(read_text_file(written[0]));
    CHECK(j["slope_or_table"] == "table");
    CHECK(j["residual_max"].get<double>() <= 1e-12);
    CHECK(j["valid_thetas"].size() == 1);
    const auto rows = csv_rows(read_text_file(written[1]));
    REQUIRE(rows.size() == 10);  // header + n_s
    CHECK(rows[0][2] == "r_prime");
    for (std::size_t k = 1; k < rows.size(); ++k)
        CHECK(std::stod(rows[k][2]) == doctest::Approx(0.8).epsilon(1e-9));

    cfg.synth_method = "circular_helix";
    cfg.synth_a = 3.0;
    cfg.synth_b = 4.0;
    RunOptions opts2;
    opts2.out_dir = scene_dir("synth_closed");
    const auto written2 = cmd_synth(cfg, opts2);
    const njson j2 = njson::parse(read_text_file(written2[0]));
    CHECK(j2["slope_or_table"].get<double>() ==
          doctest::Approx(0.8).epsilon(1e-12));

    cfg.synth_method = "general_helix";
    CHECK_THROWS_WITH_AS(cmd_synth(cfg, opts2), doctest::Contains("phi"),
                         InvalidParameter);
}

TEST_CASE("cmd_build writes a deterministic OBJ") {
    SceneConfig cfg = parse_scene_json(kTorusScene, "scene");
    RunOptions opts;
    opts.out_dir = scene_dir("build_torus");
    const auto written = cmd_build(cfg, opts);
    REQUIRE(written.size() == 1);
    const std::string text = read_text_file(written[0]);
    int v_lines = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("v ", 0) == 0) ++v_lines;
    CHECK(v_lines == 17 * 16);

    RunOptions opts2;
    opts2.out_dir = scene_dir("build_torus_2");
    const auto written2 = cmd_build(cfg, opts2);
    CHECK(read_text_file(written2[0]) == text);
}

TEST_CASE("cmd_trace: vessiot flow sits still at the synthesized angle") {
    SceneConfig cfg = parse_scene_json(kHelixScene, "scene");
    RunOptions opts;
    opts.out_dir = scene_dir("trace_vessiot");
    const auto written = cmd_trace(cfg, opts);
    REQUIRE(written.size() == 2);
    const auto rows = csv_rows(read_text_file(written[0]));
    REQUIRE(rows.size() == 22);  // header + samples
    CHECK(rows[0][6] == "k_n");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(std::abs(std::stod(rows[k][2]) - 1.5 * kPi) <= 1e-6);
        // the followed family of a synthesized curve has vanishing normal
        // curvature
        CHECK(std::abs(std::stod(rows[k][6])) <= 1e-5);
    }
    const njson j = njson::parse(read_text_file(written[1]));
    CHECK(j["mode"] == "vessiot");
    CHECK(std::abs(j["theta_end"].get<double>() - 1.5 * kPi) <= 1e-6);
}

TEST_CASE("cmd_trace: principal trace on the torus") {
    SceneConfig cfg = parse_scene_json(kTorusScene, "scene");
    cfg.trace.mode = "principal";
    cfg.trace.s0 = 2.0;
    cfg.trace.theta0 = 0.5;
    cfg.trace.family = 1;
    cfg.trace.max_steps = 150;
    RunOptions opts;
    opts.out_dir = scene_dir("trace_principal");
    const auto written = cmd_trace(cfg, opts);
    const njson j = njson::parse(read_text_file(written[1]));
    CHECK(j["mode"] == "principal");
    CHECK(j["termination"] == "step-limit");
    const auto rows = csv_rows(read_text_file(written[0]));
    CHECK(rows.size() == 151);  // header + max_steps nodes
    // meridians of the tube carry the larger curvature 1/r = 2
    for (std::size_t k = 1; k < rows.size(); k += 30)
        CHECK(std::stod(rows[k][6]) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("commands reject incomplete scenes") {
    SceneConfig empty;
    CHECK_THROWS_AS(cmd_spine(empty), InvalidParameter);
    SceneConfig no_surface = parse_scene_json(
        R"({"spine": {"kind": "circle", "params": {"radius": 1.0}}})",
        "scene");
    no_surface.out_dir = scene_dir("rejects");
    CHECK_THROWS_AS(cmd_analyze(no_surface), InvalidParameter);
    CHECK_THROWS_AS(cmd_build(no_surface), InvalidParameter);
    CHECK_THROWS_AS(cmd_trace(no_surface), InvalidParameter);
    CHECK_THROWS_AS(cmd_synth(no_surface), InvalidParameter);  // no theta_star
}

TEST_SUITE_END();
