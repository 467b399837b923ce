#include "canalkit/synthesis.hpp"

#include "canalkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace canalkit {

namespace {

constexpr int kScanNodes = 512;

/// Longest maximal run of scan nodes where r > 0 and |r'| < 1.
std::optional<Interval> usable_subdomain(const RadiusFunction& r,
                                         const Interval& base) {
    double best_lo = 0.0, best_hi = 0.0, run_lo = 0.0;
    bool in_run = false, found = false;
    double prev = base.lo;
    for (int i = 0; i <= kScanNodes; ++i) {
        const double s = base.lerp(double(i) / double(kScanNodes));
        const bool ok = r.value(s) > 0.0 && std::abs(r.deriv(s)) < 1.0;
        if (ok && !in_run) {
            run_lo = s;
            in_run = true;
        }
        if (in_run && (!ok || i == kScanNodes)) {
            const double run_hi = ok ? s : prev;
            if (!found || run_hi - run_lo > best_hi - best_lo) {
                best_lo = run_lo;
                best_hi = run_hi;
                found = true;
            }
            in_run = false;
        }
        prev = s;
    }
    if (!found) return std::nullopt;
    return Interval{best_lo, best_hi};
}

/// Plus-branch angles solving sin theta = -|sin theta_star|, wrapped to
/// [0, 2 pi), deduplicated when they coincide at 3 pi / 2.
std::vector<double> valid_theta_set(double theta_star) {
    const double base = std::asin(std::min(1.0, std::abs(std::sin(theta_star))));
    const double t1 = wrap_angle(kPi + base);
    const double t2 = wrap_angle(kTwoPi - base);
    if (std::abs(t1 - t2) < 1e-12) return {t1};
    return {t1, t2};
}

/// max |g tau + h kappa sin theta| over the domain for every valid theta.
double residual_sweep(const RadiusFunction& radius, const Interval& dom,
                      const std::function<double(double)>& kappa,
                      const std::function<double(double)>& tau,
                      const std::vector<double>& thetas) {
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i) {
        const double s = dom.lerp(double(i) / 256.0);
        const double r = radius.value(s);
        const double rp = radius.deriv(s);
        const double g = r * std::sqrt(std::max(0.0, 1.0 - rp * rp));
        const double h = r * rp;
        for (double theta : thetas)
            worst = std::max(worst, std::abs(g * tau(s) +
                                             h * kappa(s) * std::sin(theta)));
    }
    return worst;
}

double resolve_c(const std::optional<double>& c, double min_r_at_zero_c) {
    if (c) return *c;
    return 0.05 - min_r_at_zero_c;
}

}  // namespace

SynthesisResult synth_radius_quadrature(const SpineCurve& spine,
                                        double theta_star,
                                        std::optional<double> c) {
    const Interval dom = spine.domain();

    double kappa_min = std::numeric_limits<double>::infinity();
    double tau_max = 0.0;
    for (int i = 0; i <= kScanNodes; ++i) {
        const double s = dom.lerp(double(i) / double(kScanNodes));
        kappa_min = std::min(kappa_min, spine.curvature(s));
        tau_max = std::max(tau_max, std::abs(spine.torsion(s)));
    }
    if (!(kappa_min > 1e-9))
        throw InvalidParameter(
            "synthesis needs strictly positive curvature along the spine");

    const double st = std::sin(theta_star);
    const bool planar = tau_max <= 1e-12;
    if (planar) {
        // integrand vanishes: any constant-radius tube works, at every theta
        SynthesisResult out{RadiusFunction::constant(1.0)};
        out.theta_star = theta_star;
        out.c = c ? *c : 0.05;
        if (!(out.c > 0.0))
            throw RegularityError(
                "integration constant too small: radius not positive");
        out.radius = RadiusFunction::constant(out.c);
        out.slope = 0.0;
        out.all_thetas = true;
        out.domain = dom;
        return out;
    }
    if (std::abs(st) < 1e-12)
        throw InvalidParameter(
            "sin(theta*) = 0 needs a planar spine; the twisted integrand "
            "would hit |r'| = 1");

    const double s2 = st * st;
    auto rp = [spine, s2](double s) {
        const double tau = spine.torsion(s);
        const double kappa = spine.curvature(s);
        return tau / std::sqrt(tau * tau + kappa * kappa * s2);
    };
    auto rpp = [spine, s2](double s) {
        const double tau = spine.torsion(s);
        const double kappa = spine.curvature(s);
        const double taup = spine.torsion_derivative(s);
        const double kappap = spine.curvature_derivative(s);
        const double w = std::sqrt(tau * tau + kappa * kappa * s2);
        return kappa * s2 * (taup * kappa - tau * kappap) / (w * w * w);
    };

    const double anchor =
        dom.contains(0.0) ? 0.0 : (dom.lo > 0.0 ? dom.lo : dom.hi);
    RadiusFunction probe =
        RadiusFunction::from_derivative(rp, rpp, dom, anchor, 0.0);
    double min_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScanNodes; ++i)
        min_r = std::min(
            min_r, probe.value(dom.lerp(double(i) / double(kScanNodes))));

    SynthesisResult out{RadiusFunction::from_derivative(
        rp, rpp, dom, anchor, resolve_c(c, min_r))};
    out.theta_star = theta_star;
    out.c = resolve_c(c, min_r);
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.valid_thetas = valid_theta_set(theta_star);

    const auto usable = usable_subdomain(out.radius, dom);
    if (!usable)
        throw RegularityError(
            "integration constant too small: radius not positive anywhere "
            "on the domain");
    out.domain = *usable;
    out.residual_max = residual_sweep(
        out.radius, out.domain, [&](double s) { return spine.curvature(s); },
        [&](double s) { return spine.torsion(s); }, out.valid_thetas);
    return out;
}

SynthesisResult synth_radius_general_helix(double phi, double theta_star,
                                           std::optional<double> c) {
    if (!(phi > 0.0 && phi < kPi / 2.0 - 1e-12))
        throw InvalidParameter("slope angle phi must lie in (0, pi/2)");
    const double cot = std::cos(phi) / std::sin(phi);
    const double st = std::sin(theta_star);
    const double a = 1.0 / std::sqrt(1.0 + cot * cot * st * st);

    const double cv = c ? *c : 0.05;
    if (!(cv > 0.0)) throw InvalidParameter("c must be positive");

    SynthesisResult out{RadiusFunction::linear(a, cv)};
    out.theta_star = theta_star;
    out.slope = a;
    out.c = cv;
    out.valid_thetas = valid_theta_set(theta_star);
    out.regular = a < 1.0 - 1e-12;
    const Interval base{0.0, kTwoPi};
    out.domain = usable_subdomain(out.radius, base).value_or(Interval{0.0, 0.0});
    if (out.regular) {
        const double tanphi = std::tan(phi);
        out.residual_max = residual_sweep(
            out.radius, out.domain, [](double) { return 1.0; },
            [tanphi](double) { return tanphi; }, out.valid_thetas);
    }
    return out;
}

SynthesisResult synth_radius_circular_helix(double a, double b,
                                            double theta_star,
                                            std::optional<double> c) {
    if (!(a > 0.0)) throw InvalidParameter("helix radius a must be positive");
    if (b == 0.0)
        throw InvalidParameter("helix pitch b must be nonzero for synthesis");
    const double st = std::sin(theta_star);
    const double slope = b / std::sqrt(b * b + a * a * st * st);

    const double cv = c ? *c : 0.05;
    if (!(cv > 0.0)) throw InvalidParameter("c must be positive");

    SynthesisResult out{RadiusFunction::linear(slope, cv)};
    out.theta_star = theta_star;
    out.slope = slope;
    out.c = cv;
    out.valid_thetas = valid_theta_set(theta_star);
    out.regular = std::abs(slope) < 1.0 - 1e-12;
    const double d2 = a * a + b * b;
    const Interval base{0.0, kTwoPi * std::sqrt(d2)};
    out.domain = usable_subdomain(out.radius, base).value_or(Interval{0.0, 0.0});
    if (out.regular)
        out.residual_max = residual_sweep(
            out.radius, out.domain, [&](double) { return a / d2; },
            [&](double) { return b / d2; }, out.valid_thetas);
    return out;
}

SynthesisResult synth_radius_salkowski(double phi, double theta_star,
                                       std::optional<double> c) {
    const double tanphi = std::tan(phi);
    const double ct = std::cos(theta_star);
    const double st = std::sin(theta_star);
    // the factory revalidates; this keeps the default-c path from dividing
    // by zero first
    if (std::abs(ct) < 1e-12)
        throw InvalidParameter(
            "closed Salkowski radius is singular at theta* = +-pi/2; use "
            "synth_radius_quadrature instead");

    const double min_closed = std::abs(st * tanphi) / (ct * ct);  // at s = 0
    const double cv = c ? *c : 0.05 - min_closed;

    SynthesisResult out{RadiusFunction::salkowski_closed(phi, theta_star, cv)};
    out.theta_star = theta_star;
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.c = cv;
    out.valid_thetas = valid_theta_set(theta_star);

    // |m s| < 1 and |r'| < 1 coincide at |s| = tan(phi)
    const Interval base{-0.995 * tanphi, 0.995 * tanphi};
    const auto usable = usable_subdomain(out.radius, base);
    if (!usable)
        throw RegularityError(
            "integration constant too small: radius not positive anywhere "
            "on the domain");
    out.domain = *usable;
    const double m = 1.0 / tanphi;
    out.residual_max = residual_sweep(
        out.radius, out.domain, [](double) { return 1.0; },
        [m](double s) { return m * s / std::sqrt(1.0 - m * m * s * s); },
        out.valid_thetas);
    return out;
}

TorsionBoundReport check_torsion_bound(const SpineCurve& spine,
                                       const RadiusFunction& radius,
                                       int n_grid, double tol) {
    if (n_grid < 2) throw InvalidParameter("grid needs >= 2 nodes");
    Interval dom = spine.domain();
    if (const auto rdom = radius.domain()) {
        dom.lo = std::max(dom.lo, rdom->lo);
        dom.hi = std::min(dom.hi, rdom->hi);
        if (!(dom.lo < dom.hi))
            throw InvalidParameter("spine and radius domains do not overlap");
    }

    TorsionBoundReport rep;
    std::vector<double> g(n_grid), h(n_grid), kappa(n_grid), tau(n_grid);
    double min_rp = std::numeric_limits<double>::infinity();
    double max_g = 0.0;
    rep.max_tau_minus_kappa = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_grid; ++i) {
        const double s = dom.lerp(double(i) / double(n_grid - 1));
        const double r = radius.value(s);
        const double rp = radius.deriv(s);
        kappa[i] = spine.curvature(s);
        tau[i] = spine.torsion(s);
        g[i] = r * std::sqrt(std::max(0.0, 1.0 - rp * rp));
        h[i] = r * rp;
        min_rp = std::min(min_rp, rp);
        rep.max_abs_slope = std::max(rep.max_abs_slope, std::abs(rp));
        max_g = std::max(max_g, g[i]);
        rep.max_tau_minus_kappa =
            std::max(rep.max_tau_minus_kappa, std::abs(tau[i]) - kappa[i]);
    }
    rep.r_increasing = min_rp >= -1e-12;
    rep.torsion_bound_holds = rep.max_tau_minus_kappa < 0.0;
    rep.slope_below_inv_sqrt2 = rep.max_abs_slope < 1.0 / std::sqrt(2.0);

    // common theta: sin(theta) must equal -g tau / (h kappa) at every node
    const double scale = std::max(1.0, max_g);
    std::vector<double> x;
    bool h_degenerate_conflict = false;
    for (int i = 0; i < n_grid; ++i) {
        if (std::abs(h[i] * kappa[i]) > 1e-13 * scale)
            x.push_back(-g[i] * tau[i] / (h[i] * kappa[i]));
        else if (std::abs(g[i] * tau[i]) > tol * scale)
            h_degenerate_conflict = true;  // residual g tau, no theta helps
    }
    double sin_theta = 0.0;
    if (!x.empty()) {
        std::nth_element(x.begin(), x.begin() + x.size() / 2, x.end());
        sin_theta = std::clamp(x[x.size() / 2], -1.0, 1.0);
    }
    for (int i = 0; i < n_grid; ++i)
        rep.loc_residual = std::max(
            rep.loc_residual,
            std::abs(g[i] * tau[i] + h[i] * kappa[i] * sin_theta));
    rep.loc_holds = !h_degenerate_conflict && rep.loc_residual <= tol * scale;

    rep.implication_holds =
        !(rep.loc_holds && rep.r_increasing) || rep.torsion_bound_holds;
    return rep;
}

}  // namespace canalkit
