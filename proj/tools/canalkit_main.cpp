#include "canalkit/errors.hpp"
#include "canalkit/scene.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

using namespace canalkit;

int main(int argc, char** argv) {
    CLI::App app{
        "canal surfaces, generalized tubes and their curvature lines"};
    app.require_subcommand(1);

    std::string config_path;
    RunOptions opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scene JSON document")
            ->required();
        sub->add_option("--out-dir", opts.out_dir,
                        "output directory (default: the scene's out_dir)");
        sub->add_option("--grid-s", opts.grid_s, "override the s grid size");
        sub->add_option("--grid-theta", opts.grid_theta,
                        "override the theta grid size");
        sub->add_option("--tol", opts.tol, "override the scene tolerance");
        sub->add_option("--seed", opts.seed, "seed for randomized sweeps");
        sub->add_option("--threads", opts.threads,
                        "worker threads (0: CANALKIT_THREADS, then hardware)");
        return sub;
    };

    CLI::App* c_spine = add_common(app.add_subcommand(
        "spine", "curvature/torsion table and classification"));
    CLI::App* c_analyze = add_common(app.add_subcommand(
        "analyze", "fundamental-forms grid and line-of-curvature report"));
    CLI::App* c_synth = add_common(
        app.add_subcommand("synth", "radius synthesis report and table"));
    CLI::App* c_build =
        add_common(app.add_subcommand("build", "tessellate to OBJ"));
    add_common(app.add_subcommand(
        "trace", "vessiot or principal curvature-line trace"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const SceneConfig cfg = parse_scene_file(config_path);
        std::vector<std::string> written;
        if (c_spine->parsed())
            written = cmd_spine(cfg, opts);
        else if (c_analyze->parsed())
            written = cmd_analyze(cfg, opts);
        else if (c_synth->parsed())
            written = cmd_synth(cfg, opts);
        else if (c_build->parsed())
            written = cmd_build(cfg, opts);
        else
            written = cmd_trace(cfg, opts);
        for (const auto& path : written) std::cout << path << '\n';
        return 0;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
