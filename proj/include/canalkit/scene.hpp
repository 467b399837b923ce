#pragma once

#include "canalkit/surface.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace canalkit {

struct TraceSpec {
    std::string mode = "vessiot";  // "vessiot" or "principal"
    double s0 = 0.0;
    double theta0 = 0.0;
    std::optional<double> s_end;  // vessiot only; default: domain end
    int family = 1;               // principal only
    int max_steps = 2000;
    double step = 0.01;
    int samples = 201;  // rows written for a vessiot trace
};

/// One scene document: a spine plus either a radius function (canal surface)
/// or a profile (generalized tube), with grid, tolerance, synthesis and
/// trace settings. Parsed from JSON; every command consumes the same shape.
struct SceneConfig {
    std::optional<SpineCurve> spine;
    std::optional<RadiusFunction> radius;
    std::optional<Profile> profile;
    SignBranch branch = SignBranch::minus;
    int n_s = 33;
    int n_theta = 64;
    bool wrap_theta = true;
    bool wrap_s = false;
    double tol = 1e-6;
    std::optional<double> theta_star;
    std::optional<double> c;
    std::string synth_method = "quadrature";
    std::optional<double> synth_phi;  // general_helix / salkowski methods
    std::optional<double> synth_a;    // circular_helix method
    std::optional<double> synth_b;
    TraceSpec trace;
    std::string out_dir = ".";
};

/// Parses a scene document. `origin` names the source in diagnostics;
/// malformed JSON is reported with line and column.
SceneConfig parse_scene_json(const std::string& text,
                             const std::string& origin);
SceneConfig parse_scene_file(const std::string& path);

/// Per-invocation overrides; zero/empty fields fall back to the scene.
struct RunOptions {
    std::string out_dir;
    int grid_s = 0;
    int grid_theta = 0;
    double tol = 0.0;
    std::uint64_t seed = 42;
    int threads = 0;
};

// Commands write their artifacts under the resolved out_dir and return the
// paths written, in a deterministic order. Identical scene + options always
// produce byte-identical files (writes are atomic, floats format through
// format_g9, JSON serialization is canonical).

/// curvature/torsion table (spine.csv) + classification (spine.json)
std::vector<std::string> cmd_spine(const SceneConfig& cfg,
                                   const RunOptions& opts = {});
/// fundamental-forms grid (forms_grid.csv) + line-of-curvature report
/// (loc_report.json for canal surfaces, gt_report.json for tubes)
std::vector<std::string> cmd_analyze(const SceneConfig& cfg,
                                     const RunOptions& opts = {});
/// synthesis report (synthesis.json) + radius table (radius.csv)
std::vector<std::string> cmd_synth(const SceneConfig& cfg,
                                   const RunOptions& opts = {});
/// tessellated surface (surface.obj)
std::vector<std::string> cmd_build(const SceneConfig& cfg,
                                   const RunOptions& opts = {});
/// curvature-line / Vessiot flow trace (trace_*.csv + trace_report.json)
std::vector<std::string> cmd_trace(const SceneConfig& cfg,
                                   const RunOptions& opts = {});

}  // namespace canalkit
