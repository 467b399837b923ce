#include "canalkit/scene.hpp"

#include "canalkit/errors.hpp"
#include "canalkit/forms.hpp"
#include "canalkit/io.hpp"
#include "canalkit/loc.hpp"
#include "canalkit/mesh.hpp"
#include "canalkit/synthesis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

namespace canalkit {

namespace {

using njson = nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw InvalidParameter(origin + ": " + msg);
}

njson parse_with_diagnostics(const std::string& text,
                             const std::string& origin) {
    try {
        return njson::parse(text);
    } catch (const njson::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop =
            std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(origin + ":" + std::to_string(line) + ":" + std::to_string(col),
             std::string("malformed JSON: ") + e.what());
    }
}

double need_num(const njson& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number())
        throw InvalidParameter(ctx + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

double opt_num(const njson& j, const char* key, double dflt) {
    if (j.is_object() && j.contains(key) && j[key].is_number())
        return j[key].get<double>();
    return dflt;
}

Vec3 need_vec3(const njson& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3)
        throw InvalidParameter(ctx + ": field '" + key +
                               "' must be an [x, y, z] array");
    const auto& a = j[key];
    for (int k = 0; k < 3; ++k)
        if (!a[k].is_number())
            throw InvalidParameter(ctx + ": field '" + key +
                                   "' must be numeric");
    return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

std::optional<Interval> opt_domain(const njson& j, const std::string& ctx) {
    if (!j.contains("domain")) return std::nullopt;
    const auto& d = j["domain"];
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() ||
        !d[1].is_number())
        throw InvalidParameter(ctx + ": domain must be [s0, s1]");
    Interval iv{d[0].get<double>(), d[1].get<double>()};
    if (!(iv.lo < iv.hi))
        throw InvalidParameter(ctx + ": domain must be increasing");
    return iv;
}

std::vector<std::vector<double>> parse_csv_numeric(const std::string& text,
                                                   std::size_t min_cols,
                                                   const std::string& ctx) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header row
            }
            throw InvalidParameter(ctx + ": non-numeric CSV row: " + line);
        }
        first = false;
        if (row.size() < min_cols)
            throw InvalidParameter(ctx + ": CSV row has fewer than " +
                                   std::to_string(min_cols) +
                                   " columns: " + line);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidParameter(ctx + ": CSV has no data rows");
    return rows;
}

SpineCurve parse_spine(const njson& doc, const std::string& origin) {
    const std::string ctx = origin + ": spine";
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw InvalidParameter(ctx + ": missing string field 'kind'");
    const std::string kind = doc["kind"].get<std::string>();
    const njson params =
        doc.contains("params") ? doc["params"] : njson::object();
    const std::optional<Interval> dom = opt_domain(doc, ctx);

    if (kind == "circle") {
        const double r = need_num(params, "radius", ctx);
        return dom ? SpineCurve::circle(r, *dom) : SpineCurve::circle(r);
    }
    if (kind == "line") {
        const Vec3 o = need_vec3(params, "origin", ctx);
        const Vec3 d = need_vec3(params, "direction", ctx);
        return dom ? SpineCurve::line(o, d, *dom) : SpineCurve::line(o, d);
    }
    if (kind == "circular_helix") {
        const double a = need_num(params, "a", ctx);
        const double b = need_num(params, "b", ctx);
        return dom ? SpineCurve::circular_helix(a, b, *dom)
                   : SpineCurve::circular_helix(a, b);
    }
    if (kind == "general_helix_like") {
        const double phi = need_num(params, "phi", ctx);
        const double k0 = need_num(params, "kappa0", ctx);
        const double k1 = need_num(params, "kappa1", ctx);
        const double om = need_num(params, "omega", ctx);
        return dom ? SpineCurve::general_helix_like(phi, k0, k1, om, *dom)
                   : SpineCurve::general_helix_like(phi, k0, k1, om);
    }
    if (kind == "salkowski") {
        const double m = need_num(params, "m", ctx);
        return dom ? SpineCurve::salkowski(m, *dom) : SpineCurve::salkowski(m);
    }
    if (kind == "sampled") {
        if (dom)
            throw InvalidParameter(
                ctx + ": sampled spines derive their domain from arc length");
        std::vector<std::vector<double>> rows;
        if (params.contains("csv") && params["csv"].is_string()) {
            const std::string path = params["csv"].get<std::string>();
            rows = parse_csv_numeric(read_text_file(path), 4, ctx);
        } else if (params.contains("points") && params["points"].is_array()) {
            for (const auto& p : params["points"]) {
                if (!p.is_array() || p.size() != 4)
                    throw InvalidParameter(
                        ctx + ": points rows must be [t, x, y, z]");
                rows.push_back({p[0].get<double>(), p[1].get<double>(),
                                p[2].get<double>(), p[3].get<double>()});
            }
        } else {
            throw InvalidParameter(ctx +
                                   ": sampled spine needs 'points' or 'csv'");
        }
        std::vector<double> t;
        std::vector<Vec3> pts;
        for (const auto& r : rows) {
            t.push_back(r[0]);
            pts.emplace_back(r[1], r[2], r[3]);
        }
        return SpineCurve::from_samples(t, pts);
    }
    throw InvalidParameter(ctx + ": unknown kind '" + kind + "'");
}

RadiusFunction parse_radius(const njson& doc, const std::string& origin) {
    const std::string ctx = origin + ": radius";
    if (!doc.is_object() || !doc.contains("form") || !doc["form"].is_string())
        throw InvalidParameter(ctx + ": missing string field 'form'");
    const std::string form = doc["form"].get<std::string>();
    const njson params =
        doc.contains("params") ? doc["params"] : njson::object();

    if (form == "constant")
        return RadiusFunction::constant(need_num(params, "r", ctx));
    if (form == "linear")
        return RadiusFunction::linear(need_num(params, "slope", ctx),
                                      need_num(params, "offset", ctx));
    if (form == "salkowski_closed")
        return RadiusFunction::salkowski_closed(need_num(params, "phi", ctx),
                                                need_num(params, "theta", ctx),
                                                need_num(params, "c", ctx));
    if (form == "samples") {
        std::vector<double> s, r;
        if (params.contains("csv") && params["csv"].is_string()) {
            const auto rows = parse_csv_numeric(
                read_text_file(params["csv"].get<std::string>()), 2, ctx);
            for (const auto& row : rows) {
                s.push_back(row[0]);
                r.push_back(row[1]);
            }
        } else if (params.contains("s") && params.contains("r")) {
            for (const auto& v : params["s"]) s.push_back(v.get<double>());
            for (const auto& v : params["r"]) r.push_back(v.get<double>());
        } else {
            throw InvalidParameter(ctx +
                                   ": samples need 's'+'r' arrays or 'csv'");
        }
        return RadiusFunction::from_samples(s, r);
    }
    throw InvalidParameter(ctx + ": unknown form '" + form + "'");
}

Profile parse_profile(const njson& doc, const std::string& origin) {
    const std::string ctx = origin + ": profile";
    if (!doc.is_object() || !doc.contains("form") || !doc["form"].is_string())
        throw InvalidParameter(ctx + ": missing string field 'form'");
    const std::string form = doc["form"].get<std::string>();
    const njson params =
        doc.contains("params") ? doc["params"] : njson::object();
    if (form == "constant")
        return Profile::constant(need_num(params, "u", ctx));
    if (form == "cosine")
        return Profile::cosine(need_num(params, "base", ctx),
                               need_num(params, "amp", ctx));
    throw InvalidParameter(ctx + ": unknown form '" + form + "'");
}

// --- resolved run context ---------------------------------------------------

struct Resolved {
    std::string out_dir;
    int n_s;
    int n_theta;
    double tol;
    int threads;
};

Resolved resolve(const SceneConfig& cfg, const RunOptions& opts) {
    Resolved r;
    r.out_dir = opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
    r.n_s = opts.grid_s > 0 ? opts.grid_s : cfg.n_s;
    r.n_theta = opts.grid_theta > 0 ? opts.grid_theta : cfg.n_theta;
    r.tol = opts.tol > 0.0 ? opts.tol : cfg.tol;
    r.threads = opts.threads;
    std::error_code ec;
    std::filesystem::create_directories(r.out_dir, ec);
    if (ec && !std::filesystem::is_directory(r.out_dir))
        throw IoError("cannot create output directory: " + r.out_dir);
    return r;
}

std::string join(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

const SpineCurve& need_spine(const SceneConfig& cfg) {
    if (!cfg.spine) throw InvalidParameter("scene: missing 'spine'");
    return *cfg.spine;
}

// jets stencils cannot step over the spine domain edge; pull the evaluation
// point inside (same policy as the mesher)
double stencil_center(const Interval& dom, double s, double step) {
    const double halo = 2.0 * step;
    if (dom.length() <= 2.0 * halo) return dom.lerp(0.5);
    return std::min(std::max(s, dom.lo + halo), dom.hi - halo);
}

std::string dump_json(const njson& j) { return j.dump(2) + "\n"; }

njson interval_json(const Interval& iv) { return njson::array({iv.lo, iv.hi}); }

// --- forms grid ---------------------------------------------------------------

void append_forms_row(std::ostringstream& out, double s, double theta,
                      const FirstForm& I, const SecondForm* II,
                      const ShapeOperatorAt* shp, bool regular) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << format_g9(s) << ',' << format_g9(theta) << ',' << format_g9(I.E)
        << ',' << format_g9(I.F) << ',' << format_g9(I.G) << ','
        << format_g9(II ? II->e : nan) << ',' << format_g9(II ? II->f : nan)
        << ',' << format_g9(II ? II->g_II : nan) << ','
        << format_g9(shp ? shp->gaussian : nan) << ','
        << format_g9(shp ? shp->mean : nan) << ','
        << format_g9(shp ? shp->k1 : nan) << ','
        << format_g9(shp ? shp->k2 : nan) << ',' << (regular ? 1 : 0) << '\n';
}

const char* kFormsHeader = "s,theta,E,F,G,e,f,g_II,K,H,k1,k2,regular_flag\n";

}  // namespace

// --- parsing -------------------------------------------------------------------

SceneConfig parse_scene_json(const std::string& text,
                             const std::string& origin) {
    const njson j = parse_with_diagnostics(text, origin);
    if (!j.is_object()) fail(origin, "top-level JSON must be an object");

    SceneConfig cfg;
    if (j.contains("spine")) cfg.spine = parse_spine(j["spine"], origin);
    if (j.contains("radius")) cfg.radius = parse_radius(j["radius"], origin);
    if (j.contains("profile"))
        cfg.profile = parse_profile(j["profile"], origin);
    if (cfg.radius && cfg.profile)
        fail(origin, "scene has both 'radius' and 'profile'; pick one");

    if (j.contains("branch")) {
        if (!j["branch"].is_string())
            fail(origin, "branch must be \"plus\" or \"minus\"");
        const std::string b = j["branch"].get<std::string>();
        if (b == "plus")
            cfg.branch = SignBranch::plus;
        else if (b == "minus")
            cfg.branch = SignBranch::minus;
        else
            fail(origin, "branch must be \"plus\" or \"minus\", got '" + b +
                             "'");
    }

    if (j.contains("grid")) {
        const njson& g = j["grid"];
        cfg.n_s = static_cast<int>(opt_num(g, "n_s", cfg.n_s));
        cfg.n_theta = static_cast<int>(opt_num(g, "n_theta", cfg.n_theta));
        if (g.contains("wrap_theta"))
            cfg.wrap_theta = g["wrap_theta"].get<bool>();
        if (g.contains("wrap_s")) cfg.wrap_s = g["wrap_s"].get<bool>();
        if (cfg.n_s < 2 || cfg.n_theta < 3)
            fail(origin, "grid needs n_s >= 2 and n_theta >= 3");
    }

    if (j.contains("tol")) {
        if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0.0))
            fail(origin, "tol must be a positive number");
        cfg.tol = j["tol"].get<double>();
    }

    if (j.contains("synth")) {
        const njson& s = j["synth"];
        if (s.contains("theta_star"))
            cfg.theta_star = need_num(s, "theta_star", origin + ": synth");
        if (s.contains("c")) cfg.c = need_num(s, "c", origin + ": synth");
        if (s.contains("method")) {
            cfg.synth_method = s["method"].get<std::string>();
            static const char* known[] = {"quadrature", "general_helix",
                                          "circular_helix", "salkowski"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) {
                                 return cfg.synth_method == k;
                             }) == std::end(known))
                fail(origin,
                     "synth method must be one of quadrature, general_helix, "
                     "circular_helix, salkowski");
        }
        if (s.contains("phi"))
            cfg.synth_phi = need_num(s, "phi", origin + ": synth");
        if (s.contains("a")) cfg.synth_a = need_num(s, "a", origin + ": synth");
        if (s.contains("b")) cfg.synth_b = need_num(s, "b", origin + ": synth");
    }

    if (j.contains("trace")) {
        const njson& t = j["trace"];
        if (t.contains("mode")) {
            cfg.trace.mode = t["mode"].get<std::string>();
            if (cfg.trace.mode != "vessiot" && cfg.trace.mode != "principal")
                fail(origin, "trace mode must be \"vessiot\" or \"principal\"");
        }
        cfg.trace.s0 = opt_num(t, "s0", cfg.trace.s0);
        cfg.trace.theta0 = opt_num(t, "theta0", cfg.trace.theta0);
        if (t.contains("s_end"))
            cfg.trace.s_end = need_num(t, "s_end", origin + ": trace");
        cfg.trace.family =
            static_cast<int>(opt_num(t, "family", cfg.trace.family));
        cfg.trace.max_steps =
            static_cast<int>(opt_num(t, "max_steps", cfg.trace.max_steps));
        cfg.trace.step = opt_num(t, "step", cfg.trace.step);
        cfg.trace.samples =
            static_cast<int>(opt_num(t, "samples", cfg.trace.samples));
        if (cfg.trace.samples < 2) fail(origin, "trace samples must be >= 2");
    }

    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    return cfg;
}

SceneConfig parse_scene_file(const std::string& path) {
    return parse_scene_json(read_text_file(path), path);
}

// --- commands --------------------------------------------------------------------

std::vector<std::string> cmd_spine(const SceneConfig& cfg,
                                   const RunOptions& opts) {
    const SpineCurve& spine = need_spine(cfg);
    const Resolved run = resolve(cfg, opts);
    const Interval dom = spine.domain();

    std::ostringstream csv;
    csv << "s,kappa,tau\n";
    const int n = std::max(run.n_s, 2);
    for (int i = 0; i < n; ++i) {
        const double s = dom.lerp(static_cast<double>(i) / (n - 1));
        csv << format_g9(s) << ',' << format_g9(spine.curvature(s)) << ','
            << format_g9(spine.torsion(s)) << '\n';
    }
    const std::string csv_path = join(run.out_dir, "spine.csv");
    write_text_atomic(csv_path, csv.str());

    const SpineClassification cls = spine.classify();
    njson j;
    j["kind"] = to_string(spine.kind());
    j["domain"] = interval_json(dom);
    j["classification"] = to_string(cls.kind);
    j["phi"] = cls.phi;
    j["max_abs_tau"] = cls.max_abs_tau;
    j["kappa_variation"] = cls.kappa_variation;
    j["tau_variation"] = cls.tau_variation;
    j["ratio_variation"] = cls.ratio_variation;
    const std::string json_path = join(run.out_dir, "spine.json");
    write_text_atomic(json_path, dump_json(j));
    return {csv_path, json_path};
}

std::vector<std::string> cmd_analyze(const SceneConfig& cfg,
                                     const RunOptions& opts) {
    const SpineCurve& spine = need_spine(cfg);
    const Resolved run = resolve(cfg, opts);

    if (cfg.profile) {
        GeneralizedTube gt(spine, *cfg.profile);
        const Interval dom = gt.s_domain();
        std::ostringstream csv;
        csv << kFormsHeader;
        double max_F = 0.0, max_f = 0.0;
        for (int i = 0; i < run.n_s; ++i) {
            const double s =
                dom.lerp(static_cast<double>(i) / (run.n_s - 1));
            for (int j = 0; j < run.n_theta; ++j) {
                const double theta = 2.0 * kPi * j / run.n_theta;
                const GtClosedFF closed = gt_F_f_closed(gt, s, theta);
                max_F = std::max(max_F, std::abs(closed.F));
                max_f = std::max(max_f, std::abs(closed.f));
                const SurfaceJets jets = numeric_jets(
                    gt, stencil_center(dom, s, 1e-3), theta, 1e-3);
                try {
                    const auto [I, II] = forms_from_jets(jets);
                    const ShapeOperatorAt shp = shape_operator(I, II);
                    append_forms_row(csv, s, theta, I, &II, &shp, true);
                } catch (const RegularityError&) {
                    FirstForm I;
                    I.E = jets.Ks.squaredNorm();
                    I.F = jets.Ks.dot(jets.Kt);
                    I.G = jets.Kt.squaredNorm();
                    append_forms_row(csv, s, theta, I, nullptr, nullptr,
                                     false);
                }
            }
        }
        const std::string csv_path = join(run.out_dir, "forms_grid.csv");
        write_text_atomic(csv_path, csv.str());

        const SpineClassification cls = spine.classify();
        njson j;
        j["surface"] = "generalized_tube";
        j["planar_spine"] = cls.kind == SpineClass::planar;
        j["max_abs_F_closed"] = max_F;
        j["max_abs_f_closed"] = max_f;
        j["F_f_both_vanish"] = max_F <= 1e-12 && max_f <= 1e-12;
        const std::string json_path = join(run.out_dir, "gt_report.json");
        write_text_atomic(json_path, dump_json(j));
        return {csv_path, json_path};
    }

    if (!cfg.radius)
        throw InvalidParameter("scene: analyze needs 'radius' or 'profile'");
    CanalSurface surf(spine, *cfg.radius, cfg.branch);
    const LocReport rep = verify_theorem3(surf, run.n_s, run.n_theta, run.tol);

    std::ostringstream csv;
    csv << kFormsHeader;
    const Interval dom = surf.s_domain();
    for (int i = 0; i < run.n_s; ++i)
        for (int j = 0; j < run.n_theta; ++j) {
            const double s = rep.s_nodes[i];
            const double theta = rep.theta_nodes[j];
            const bool regular = rep.regular[rep.index(i, j)] != 0;
            if (!regular) {
                const FirstForm I = first_form_closed(surf, s, theta);
                append_forms_row(csv, s, theta, I, nullptr, nullptr, false);
                continue;
            }
            const SurfaceJets jets =
                numeric_jets(surf, stencil_center(dom, s, 1e-3), theta, 1e-3);
            try {
                const auto [I, II] = forms_from_jets(jets);
                const ShapeOperatorAt shp = shape_operator(I, II);
                append_forms_row(csv, s, theta, I, &II, &shp, true);
            } catch (const RegularityError&) {
                const FirstForm I = first_form_closed(surf, s, theta);
                append_forms_row(csv, s, theta, I, nullptr, nullptr, false);
            }
        }
    const std::string csv_path = join(run.out_dir, "forms_grid.csv");
    write_text_atomic(csv_path, csv.str());

    const ThetaObstruction obs = theta_curve_obstruction(surf, dom.lerp(0.5));
    njson j;
    j["surface"] = "canal";
    j["branch"] = to_string(cfg.branch);
    j["n_s"] = run.n_s;
    j["n_theta"] = run.n_theta;
    j["tol"] = rep.tol;
    j["s_nodes"] = rep.s_nodes;
    j["theta_nodes"] = rep.theta_nodes;
    j["F"] = rep.F;
    j["f"] = rep.f;
    j["residual"] = rep.residual;
    njson reg = njson::array();
    for (unsigned char r : rep.regular) reg.push_back(r ? 1 : 0);
    j["regular"] = reg;
    j["singular_count"] = rep.singular_count;
    j["max_abs_F"] = rep.max_abs_F;
    j["median_abs_F"] = rep.median_abs_F;
    j["max_abs_f"] = rep.max_abs_f;
    j["median_abs_f"] = rep.median_abs_f;
    j["max_abs_residual"] = rep.max_abs_residual;
    j["median_abs_residual"] = rep.median_abs_residual;
    j["theorem3"] = rep.theorem3_ok ? "verified" : "violated";
    j["corollary2_ok"] = rep.corollary2_ok;
    njson viol = njson::array();
    for (const auto& [vi, vj] : rep.violations)
        viol.push_back(njson::array({vi, vj}));
    j["violations"] = viol;
    j["theta_curves_loc"] = obs.vacuous ? "vacuous" : "obstructed";
    j["theta_obstruction"] = {{"s0", dom.lerp(0.5)},
                              {"max_residual", obs.max_residual},
                              {"theta_at_max", obs.theta_at_max},
                              {"vacuous", obs.vacuous}};
    const std::string json_path = join(run.out_dir, "loc_report.json");
    write_text_atomic(json_path, dump_json(j));
    return {csv_path, json_path};
}

std::vector<std::string> cmd_synth(const SceneConfig& cfg,
                                   const RunOptions& opts) {
    const Resolved run = resolve(cfg, opts);
    if (!cfg.theta_star)
        throw InvalidParameter("scene: synth needs synth.theta_star");
    const double theta_star = *cfg.theta_star;

    SynthesisResult res = [&]() {
        if (cfg.synth_method == "quadrature")
            return synth_radius_quadrature(need_spine(cfg), theta_star, cfg.c);
        if (cfg.synth_method == "general_helix") {
            if (!cfg.synth_phi)
                throw InvalidParameter("scene: synth.general_helix needs phi");
            return synth_radius_general_helix(*cfg.synth_phi, theta_star,
                                              cfg.c);
        }
        if (cfg.synth_method == "circular_helix") {
            if (!cfg.synth_a || !cfg.synth_b)
                throw InvalidParameter(
                    "scene: synth.circular_helix needs a and b");
            return synth_radius_circular_helix(*cfg.synth_a, *cfg.synth_b,
                                               theta_star, cfg.c);
        }
        if (!cfg.synth_phi)
            throw InvalidParameter("scene: synth.salkowski needs phi");
        return synth_radius_salkowski(*cfg.synth_phi, theta_star, cfg.c);
    }();

    njson j;
    j["method"] = cfg.synth_method;
    j["theta_star"] = res.theta_star;
    if (std::isnan(res.slope))
        j["slope_or_table"] = "table";
    else
        j["slope_or_table"] = res.slope;
    j["valid_thetas"] = res.valid_thetas;
    j["all_thetas"] = res.all_thetas;
    j["domain"] = interval_json(res.domain);
    j["c"] = res.c;
    j["residual_max"] = res.residual_max;
    j["regular"] = res.regular;
    const std::string json_path = join(run.out_dir, "synthesis.json");
    write_text_atomic(json_path, dump_json(j));

    std::ostringstream csv;
    csv << "s,r,r_prime\n";
    const int n = std::max(run.n_s, 2);
    if (res.domain.length() > 0.0) {
        for (int i = 0; i < n; ++i) {
            const double s = res.domain.lerp(static_cast<double>(i) / (n - 1));
            csv << format_g9(s) << ',' << format_g9(res.radius.value(s)) << ','
                << format_g9(res.radius.deriv(s)) << '\n';
        }
    } else {
        const double s = res.domain.lo;
        csv << format_g9(s) << ',' << format_g9(res.radius.value(s)) << ','
            << format_g9(res.radius.deriv(s)) << '\n';
    }
    const std::string csv_path = join(run.out_dir, "radius.csv");
    write_text_atomic(csv_path, csv.str());
    return {json_path, csv_path};
}

std::vector<std::string> cmd_build(const SceneConfig& cfg,
                                   const RunOptions& opts) {
    const SpineCurve& spine = need_spine(cfg);
    const Resolved run = resolve(cfg, opts);

    QuadMesh mesh;
    if (cfg.profile) {
        GeneralizedTube gt(spine, *cfg.profile);
        mesh = tessellate(gt, run.n_s, run.n_theta, cfg.wrap_theta, cfg.wrap_s,
                          run.threads);
    } else if (cfg.radius) {
        CanalSurface surf(spine, *cfg.radius, cfg.branch);
        mesh = tessellate(surf, run.n_s, run.n_theta, cfg.wrap_theta,
                          cfg.wrap_s, run.threads);
    } else {
        throw InvalidParameter("scene: build needs 'radius' or 'profile'");
    }
    const std::string obj_path = join(run.out_dir, "surface.obj");
    export_obj(mesh, obj_path);
    return {obj_path};
}

std::vector<std::string> cmd_trace(const SceneConfig& cfg,
                                   const RunOptions& opts) {
    const SpineCurve& spine = need_spine(cfg);
    const Resolved run = resolve(cfg, opts);
    const TraceSpec& ts = cfg.trace;

    if (ts.mode == "principal") {
        std::vector<std::string> written;
        CurvatureLineTrace tr;
        if (cfg.profile) {
            GeneralizedTube gt(spine, *cfg.profile);
            tr = trace_curvature_line(gt, ts.s0, ts.theta0, ts.family,
                                      ts.max_steps, ts.step);
        } else if (cfg.radius) {
            CanalSurface surf(spine, *cfg.radius, cfg.branch);
            tr = trace_curvature_line(surf, ts.s0, ts.theta0, ts.family,
                                      ts.max_steps, ts.step);
        } else {
            throw InvalidParameter("scene: trace needs 'radius' or 'profile'");
        }
        const std::string csv_path = join(run.out_dir, "trace_principal.csv");
        export_polyline_csv(tr, csv_path);
        njson j;
        j["mode"] = "principal";
        j["family"] = tr.family;
        j["nodes"] = tr.s.size();
        j["termination"] = to_string(tr.termination);
        const std::string json_path = join(run.out_dir, "trace_report.json");
        write_text_atomic(json_path, dump_json(j));
        return {csv_path, json_path};
    }

    if (!cfg.radius)
        throw InvalidParameter(
            "scene: a vessiot trace needs a canal surface ('radius')");
    CanalSurface surf(spine, *cfg.radius, cfg.branch);
    const Interval dom = surf.s_domain();
    const double s_end = ts.s_end ? *ts.s_end : dom.hi;
    const OdePath path = vessiot_integrate(surf, ts.s0, ts.theta0, s_end);

    CurvatureLineTrace tr;
    tr.family = 0;
    for (int i = 0; i < ts.samples; ++i) {
        const double s =
            ts.s0 + (s_end - ts.s0) * static_cast<double>(i) / (ts.samples - 1);
        const double theta = path.eval_component(s, 0);
        tr.s.push_back(s);
        tr.theta.push_back(theta);
        tr.points.push_back(surf.point(s, theta));
        double kn = std::numeric_limits<double>::quiet_NaN();
        try {
            const double tp = vessiot_rhs(surf, s, theta);
            const auto [I, II] = fundamental_forms_numeric(
                surf, stencil_center(dom, s, 1e-3), theta);
            const double num = II.e + 2.0 * II.f * tp + II.g_II * tp * tp;
            const double den = I.E + 2.0 * I.F * tp + I.G * tp * tp;
            if (den > 0.0) kn = num / den;
        } catch (const Error&) {
        }
        tr.k_n.push_back(kn);
    }
    const std::string csv_path = join(run.out_dir, "trace_vessiot.csv");
    export_polyline_csv(tr, csv_path);
    njson j;
    j["mode"] = "vessiot";
    j["s0"] = ts.s0;
    j["theta0"] = ts.theta0;
    j["s_end"] = s_end;
    j["theta_end"] = tr.theta.back();
    j["nodes"] = tr.s.size();
    const std::string json_path = join(run.out_dir, "trace_report.json");
    write_text_atomic(json_path, dump_json(j));
    return {csv_path, json_path};
}

}  // namespace canalkit
