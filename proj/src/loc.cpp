#include "canalkit/loc.hpp"

#include "canalkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace canalkit {

namespace {

double median_abs(std::vector<double> v) {
    if (v.empty()) return 0.0;
    for (double& x : v) x = std::abs(x);
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

}  // namespace

double loc_residual(const CanalSurface& canal, double s, double theta) {
    const CanalScalars v = canal.scalars(s);
    return v.ghat * v.tau + v.h * v.kappa * std::sin(theta);
}

LocReport verify_theorem3(const CanalSurface& canal, int n_s, int n_theta,
                          double tol) {
    if (n_s < 2 || n_theta < 2)
        throw InvalidParameter("verify_theorem3 needs at least a 2x2 grid");
    if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");

    LocReport rep;
    rep.tol = tol;
    const Interval dom = canal.s_domain();
    rep.s_nodes.resize(n_s);
    for (int i = 0; i < n_s; ++i)
        rep.s_nodes[i] = dom.lerp(double(i) / double(n_s - 1));
    rep.theta_nodes.resize(n_theta);
    for (int j = 0; j < n_theta; ++j)
        rep.theta_nodes[j] = kTwoPi * double(j) / double(n_theta);

    const int total = n_s * n_theta;
    rep.F.assign(total, 0.0);
    rep.f.assign(total, 0.0);
    rep.residual.assign(total, 0.0);
    rep.regular.assign(total, 0);

    for (int i = 0; i < n_s; ++i) {
        const double s = rep.s_nodes[i];
        for (int j = 0; j < n_theta; ++j) {
            const double theta = rep.theta_nodes[j];
            const int idx = rep.index(i, j);
            rep.residual[idx] = loc_residual(canal, s, theta);
            rep.F[idx] = first_form_closed(canal, s, theta).F;
            if (!canal.is_regular_at(s, theta).regular) {
                ++rep.singular_count;
                continue;
            }
            rep.regular[idx] = 1;
            rep.f[idx] = second_form_f_closed(canal, s, theta);
        }
    }
    if (rep.singular_count == total)
        throw RegularityError("verify_theorem3: every grid node is singular");

    std::vector<double> reg_F, reg_f, reg_res;
    reg_F.reserve(total);
    reg_f.reserve(total);
    reg_res.reserve(total);
    for (int idx = 0; idx < total; ++idx) {
        if (!rep.regular[idx]) continue;
        reg_F.push_back(rep.F[idx]);
        reg_f.push_back(rep.f[idx]);
        reg_res.push_back(rep.residual[idx]);
        rep.max_abs_F = std::max(rep.max_abs_F, std::abs(rep.F[idx]));
        rep.max_abs_f = std::max(rep.max_abs_f, std::abs(rep.f[idx]));
        rep.max_abs_residual =
            std::max(rep.max_abs_residual, std::abs(rep.residual[idx]));
    }
    rep.median_abs_F = median_abs(std::move(reg_F));
    rep.median_abs_f = median_abs(std::move(reg_f));
    rep.median_abs_residual = median_abs(std::move(reg_res));

    const double tol_F = tol * rep.median_abs_F;
    const double tol_f = tol * rep.median_abs_f;
    rep.theorem3_ok = true;
    for (int i = 0; i < n_s; ++i)
        for (int j = 0; j < n_theta; ++j) {
            const int idx = rep.index(i, j);
            if (!rep.regular[idx]) continue;
            const bool F_small = std::abs(rep.F[idx]) <= tol_F;
            const bool f_small = std::abs(rep.f[idx]) <= tol_f;
            if (F_small != f_small) {
                rep.theorem3_ok = false;
                rep.violations.emplace_back(i, j);
            }
        }

    rep.corollary2_ok = true;
    const double tol_res = tol * rep.median_abs_residual;
    for (int i = 0; i < n_s; ++i) {
        const CanalScalars v = canal.scalars(rep.s_nodes[i]);
        const double scale = std::max(1.0, std::abs(v.ghat));
        const bool vacuous = std::abs(v.ghat * v.tau) <= 1e-13 * scale &&
                             std::abs(v.h * v.kappa) <= 1e-13 * scale;
        if (vacuous) continue;
        double row_max = 0.0;
        for (int j = 0; j < n_theta; ++j)
            row_max =
                std::max(row_max, std::abs(rep.residual[rep.index(i, j)]));
        if (!(row_max > tol_res)) rep.corollary2_ok = false;
    }
    return rep;
}

ThetaObstruction theta_curve_obstruction(const CanalSurface& canal, double s0,
                                         int n_theta) {
    if (n_theta < 4) throw InvalidParameter("theta sweep needs >= 4 samples");
    const CanalScalars v = canal.scalars(s0);
    ThetaObstruction out;
    const double scale = std::max(1.0, std::abs(v.ghat));
    out.vacuous = std::abs(v.ghat * v.tau) <= 1e-14 * scale &&
                  std::abs(v.h * v.kappa) <= 1e-14 * scale;
    for (int j = 0; j < n_theta; ++j) {
        const double theta = kTwoPi * double(j) / double(n_theta);
        const double res =
            std::abs(v.ghat * v.tau + v.h * v.kappa * std::sin(theta));
        if (res > out.max_residual) {
            out.max_residual = res;
            out.theta_at_max = theta;
        }
    }
    return out;
}

double vessiot_rhs(const CanalSurface& canal, double s, double theta) {
    const CanalScalars v = canal.scalars(s);
    const double w2 = 1.0 - v.rp * v.rp;
    if (!(w2 > 1e-12)) {
        std::ostringstream msg;
        msg << "angle ODE breaks down, |r'| -> 1 at s = " << s;
        throw RegularityError(msg.str());
    }
    const double sigma = canal.sigma();
    return -v.tau - sigma * v.rp / std::sqrt(w2) * v.kappa * std::sin(theta);
}

OdePath vessiot_integrate(const CanalSurface& canal, double s0, double theta0,
                          double s_end, const OdeOptions& opts) {
    const Interval dom = canal.s_domain();
    if (!dom.contains(s0) || !dom.contains(s_end))
        throw InvalidParameter("angle ODE endpoints outside the s domain");
    auto rhs = [&canal](double s, const OdeState& y, OdeState& dy) {
        dy[0] = vessiot_rhs(canal, s, y[0]);
    };
    OdeIntegrator integ(opts);
    return integ.integrate(rhs, s0, OdeState{theta0}, s_end);
}

const char* to_string(TraceTermination t) {
    switch (t) {
        case TraceTermination::domain_exit: return "domain-exit";
        case TraceTermination::singular_point: return "singular-point";
        case TraceTermination::umbilic: return "umbilic";
        case TraceTermination::step_limit: return "step-limit";
    }
    return "unknown";
}

namespace {

enum class DirStatus { ok, umbilic, singular, outside };

struct DirSample {
    DirStatus status = DirStatus::ok;
    Vec2 dir = Vec2::Zero();
    double k = 0.0;
};

DirSample principal_dir(const ParametricSurface& surf, double s, double theta,
                        int family, double margin) {
    DirSample out;
    const Interval dom = surf.s_domain();
    if (s < dom.lo + margin || s > dom.hi - margin) {
        out.status = DirStatus::outside;
        return out;
    }
    try {
        const auto [I, II] = fundamental_forms_numeric(surf, s, theta);
        const ShapeOperatorAt S = shape_operator(I, II);
        if (S.umbilic) {
            out.status = DirStatus::umbilic;
            return out;
        }
        out.dir = family == 1 ? S.dir1 : S.dir2;
        out.k = family == 1 ? S.k1 : S.k2;
    } catch (const RegularityError&) {
        out.status = DirStatus::singular;
    }
    return out;
}

Vec2 oriented(const Vec2& dir, const Vec2& ref) {
    return dir.dot(ref) < 0.0 ? Vec2(-dir) : dir;
}

}  // namespace

CurvatureLineTrace trace_curvature_line(const ParametricSurface& surf,
                                        double s0, double theta0, int family,
                                        int max_steps, double step,
                                        const Vec2* dir_hint) {
    if (family != 1 && family != 2)
        throw InvalidParameter("principal family must be 1 or 2");
    if (max_steps < 1 || !(step > 0.0))
        throw InvalidParameter("trace needs positive step and step budget");

    // finite differences in principal_dir reach this far from the node
    const double margin = 2.5e-3;

    CurvatureLineTrace trace;
    trace.family = family;
    trace.termination = TraceTermination::step_limit;

    Vec2 y(s0, theta0);
    DirSample first = principal_dir(surf, y.x(), y.y(), family, margin);
    if (first.status == DirStatus::outside)
        throw InvalidParameter("trace start outside the usable s range");
    if (first.status == DirStatus::umbilic)
        throw InvalidParameter("trace start is an umbilic point");
    if (first.status == DirStatus::singular)
        throw InvalidParameter("trace start is a singular point");

    Vec2 prev = (dir_hint != nullptr && dir_hint->norm() > 0.0)
                    ? *dir_hint
                    : first.dir;

    for (int n = 0; n < max_steps; ++n) {
        DirSample d0 = principal_dir(surf, y.x(), y.y(), family, margin);
        if (d0.status != DirStatus::ok) {
            trace.termination = d0.status == DirStatus::outside
                                    ? TraceTermination::domain_exit
                                : d0.status == DirStatus::umbilic
                                    ? TraceTermination::umbilic
                                    : TraceTermination::singular_point;
            break;
        }
        d0.dir = oriented(d0.dir, prev);

        trace.s.push_back(y.x());
        trace.theta.push_back(y.y());
        trace.points.push_back(surf.point(y.x(), y.y()));
        trace.k_n.push_back(d0.k);

        auto stage = [&](const Vec2& at, DirStatus& status) {
            DirSample d = principal_dir(surf, at.x(), at.y(), family, margin);
            status = d.status;
            return oriented(d.dir, d0.dir);
        };
        DirStatus st1, st2, st3;
        const Vec2 k1 = d0.dir;
        const Vec2 k2 = stage(y + 0.5 * step * k1, st1);
        const Vec2 k3 = stage(y + 0.5 * step * k2, st2);
        const Vec2 k4 = stage(y + step * k3, st3);
        DirStatus bad = DirStatus::ok;
        for (DirStatus st : {st1, st2, st3})
            if (st != DirStatus::ok) bad = st;
        if (bad != DirStatus::ok) {
            trace.termination = bad == DirStatus::outside
                                    ? TraceTermination::domain_exit
                                : bad == DirStatus::umbilic
                                    ? TraceTermination::umbilic
                                    : TraceTermination::singular_point;
            return trace;
        }
        y += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        prev = d0.dir;
    }
    return trace;
}

LocCurveCheck is_line_of_curvature(const ParametricSurface& surf,
                                   const std::vector<double>& s_nodes,
                                   const std::vector<double>& theta_nodes,
                                   double tol) {
    const int n = static_cast<int>(s_nodes.size());
    if (n < 2 || theta_nodes.size() != s_nodes.size())
        throw InvalidParameter("curve check needs matched s/theta samples");

    const double margin = 2.5e-3;
    const Interval dom = surf.s_domain();

    LocCurveCheck out;
    out.samples = n;
    int usable = 0;
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(i - 1, 0);
        const int hi = std::min(i + 1, n - 1);
        const double a = s_nodes[hi] - s_nodes[lo];
        const double b = theta_nodes[hi] - theta_nodes[lo];
        const double s = s_nodes[i];
        const double theta = theta_nodes[i];
        if (std::hypot(a, b) < 1e-14 || s < dom.lo + margin ||
            s > dom.hi - margin) {
            ++out.flagged;
            continue;
        }
        try {
            const SurfaceJets j = numeric_jets(surf, s, theta);
            const auto [I, II] = forms_from_jets(j);
            const ShapeOperatorAt S = shape_operator(I, II);
            if (S.umbilic) {
                ++out.flagged;
                continue;
            }
            const Vec3 T = a * j.Ks + b * j.Kt;
            const Vec2 Sv = S.S * Vec2(a, b);
            const Vec3 ST = Sv.x() * j.Ks + Sv.y() * j.Kt;
            // perpendicular part of S(T-hat) against the operator scale, so
            // curvature lines with k_n = 0 (rulings, synthesized s-curves)
            // are not drowned by noise in the tiny S(T)
            const double scale =
                std::max({std::abs(S.k1), std::abs(S.k2), 1e-14});
            const double res =
                ST.cross(T).norm() / (T.squaredNorm() * scale);
            out.max_residual = std::max(out.max_residual, res);
            ++usable;
        } catch (const RegularityError&) {
            ++out.flagged;
        }
    }
    out.is_loc = usable > 0 && out.max_residual <= tol;
    return out;
}

LocCurveCheck is_line_of_curvature(const ParametricSurface& surf,
                                   const std::function<Vec2(double)>& curve,
                                   int n_samples, double tol) {
    if (!curve) throw InvalidParameter("curve callback must be set");
    if (n_samples < 2) throw InvalidParameter("curve check needs >= 2 samples");
    std::vector<double> s(n_samples), theta(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const Vec2 p = curve(double(i) / double(n_samples - 1));
        s[i] = p.x();
        theta[i] = p.y();
    }
    return is_line_of_curvature(surf, s, theta, tol);
}

}  // namespace canalkit
