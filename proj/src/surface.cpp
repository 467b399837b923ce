#include "canalkit/surface.hpp"

#include "canalkit/errors.hpp"
#include "canalkit/numerics.hpp"

#include <cmath>
#include <utility>

namespace canalkit {

std::string to_string(RadiusForm form) {
    switch (form) {
        case RadiusForm::constant: return "constant";
        case RadiusForm::linear: return "linear";
        case RadiusForm::salkowski_closed: return "salkowski_closed";
        case RadiusForm::quadrature_table: return "quadrature_table";
        case RadiusForm::user_sampled: return "user_sampled";
        case RadiusForm::custom: return "custom";
    }
    return "unknown";
}

std::string to_string(SignBranch b) {
    return b == SignBranch::minus ? "minus" : "plus";
}

// ---------------------------------------------------------------------------
// RadiusFunction backends
// ---------------------------------------------------------------------------

struct RadiusFunction::Backend {
    RadiusForm form;

    explicit Backend(RadiusForm f) : form(f) {}
    virtual ~Backend() = default;
    virtual double value(double s) const = 0;
    virtual double deriv(double s) const = 0;
    virtual double deriv2(double s) const = 0;
    virtual std::optional<Interval> domain() const { return std::nullopt; }
};

namespace {

struct ConstantRadius final : RadiusFunction::Backend {
    double r;
    explicit ConstantRadius(double r_)
        : Backend(RadiusForm::constant), r(r_) {}
    double value(double) const override { return r; }
    double deriv(double) const override { return 0.0; }
    double deriv2(double) const override { return 0.0; }
};

struct LinearRadius final : RadiusFunction::Backend {
    double a, c;
    LinearRadius(double a_, double c_)
        : Backend(RadiusForm::linear), a(a_), c(c_) {}
    double value(double s) const override { return a * s + c; }
    double deriv(double) const override { return a; }
    double deriv2(double) const override { return 0.0; }
};

struct SalkowskiClosedRadius final : RadiusFunction::Backend {
    double cos2t, sin2tan2, c;
    SalkowskiClosedRadius(double phi, double theta, double c_)
        : Backend(RadiusForm::salkowski_closed), c(c_) {
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        const double tp = std::tan(phi);
        cos2t = ct * ct;
        sin2tan2 = st * st * tp * tp;
    }
    double w(double s) const { return std::sqrt(cos2t * s * s + sin2tan2); }
    double value(double s) const override { return w(s) / cos2t + c; }
    double deriv(double s) const override { return s / w(s); }
    double deriv2(double s) const override {
        const double W = w(s);
        return sin2tan2 / (W * W * W);
    }
};

struct QuadratureRadius final : RadiusFunction::Backend {
    std::function<double(double)> rp, rpp;
    CumulativeIntegral table;
    Interval dom;
    double r_anchor;

    QuadratureRadius(std::function<double(double)> rp_,
                     std::function<double(double)> rpp_, Interval domain,
                     double anchor_s, double r_anchor_)
        : Backend(RadiusForm::quadrature_table),
          rp(std::move(rp_)),
          rpp(std::move(rpp_)),
          table(rp, domain, anchor_s),
          dom(domain),
          r_anchor(r_anchor_) {}

    double value(double s) const override { return r_anchor + table.value(s); }
    double deriv(double s) const override { return rp(s); }
    double deriv2(double s) const override {
        if (rpp) return rpp(s);
        // central Richardson interior, one-sided second order at the ends
        const double h = 1e-5 * (1.0 + std::abs(s));
        if (s - dom.lo >= h && dom.hi - s >= h)
            return fd_derivative(rp, s, h);
        if (dom.hi - s >= 2.0 * h)
            return (-3.0 * rp(s) + 4.0 * rp(s + h) - rp(s + 2.0 * h)) /
                   (2.0 * h);
        return (3.0 * rp(s) - 4.0 * rp(s - h) + rp(s - 2.0 * h)) / (2.0 * h);
    }
    std::optional<Interval> domain() const override { return dom; }
};

struct SampledRadius final : RadiusFunction::Backend {
    CubicSpline spline;
    SampledRadius(const std::vector<double>& s, const std::vector<double>& r)
        : Backend(RadiusForm::user_sampled), spline(s, r) {}
    double value(double s) const override { return spline.value(s); }
    double deriv(double s) const override { return spline.deriv(s); }
    double deriv2(double s) const override { return spline.deriv2(s); }
    std::optional<Interval> domain() const override { return spline.domain(); }
};

struct CustomRadius final : RadiusFunction::Backend {
    std::function<double(double)> r, rp, rpp;
    CustomRadius(std::function<double(double)> r_,
                 std::function<double(double)> rp_,
                 std::function<double(double)> rpp_)
        : Backend(RadiusForm::custom),
          r(std::move(r_)),
          rp(std::move(rp_)),
          rpp(std::move(rpp_)) {}
    double value(double s) const override { return r(s); }
    double deriv(double s) const override { return rp(s); }
    double deriv2(double s) const override { return rpp(s); }
};

}  // namespace

RadiusFunction::RadiusFunction(std::shared_ptr<const Backend> impl)
    : impl_(std::move(impl)) {}

RadiusFunction RadiusFunction::constant(double r) {
    if (!(r > 0.0)) throw InvalidParameter("radius must be > 0");
    return RadiusFunction(std::make_shared<ConstantRadius>(r));
}

RadiusFunction RadiusFunction::linear(double slope, double offset) {
    return RadiusFunction(std::make_shared<LinearRadius>(slope, offset));
}

RadiusFunction RadiusFunction::salkowski_closed(double phi, double theta,
                                                double c) {
    if (!(std::tan(phi) > 0.0) || !(phi < kPi / 2.0))
        throw InvalidParameter(
            "salkowski_closed requires phi in (0, pi/2)");
    if (std::abs(std::cos(theta)) < 1e-12)
        throw InvalidParameter(
            "salkowski_closed undefined at cos(theta) = 0; synthesize by "
            "quadrature instead");
    return RadiusFunction(
        std::make_shared<SalkowskiClosedRadius>(phi, theta, c));
}

RadiusFunction RadiusFunction::from_derivative(
    std::function<double(double)> rp, std::function<double(double)> rpp,
    Interval domain, double anchor_s, double r_anchor) {
    if (!rp) throw InvalidParameter("from_derivative: r' callback required");
    if (!domain.contains(anchor_s))
        throw InvalidParameter("from_derivative: anchor outside domain");
    return RadiusFunction(std::make_shared<QuadratureRadius>(
        std::move(rp), std::move(rpp), domain, anchor_s, r_anchor));
}

RadiusFunction RadiusFunction::from_samples(const std::vector<double>& s,
                                            const std::vector<double>& r) {
    return RadiusFunction(std::make_shared<SampledRadius>(s, r));
}

RadiusFunction RadiusFunction::from_functions(
    std::function<double(double)> r, std::function<double(double)> rp,
    std::function<double(double)> rpp) {
    if (!r || !rp || !rpp)
        throw InvalidParameter("from_functions: r, r', r'' all required");
    return RadiusFunction(std::make_shared<CustomRadius>(
        std::move(r), std::move(rp), std::move(rpp)));
}

RadiusForm RadiusFunction::form() const { return impl_->form; }
double RadiusFunction::value(double s) const { return impl_->value(s); }
double RadiusFunction::deriv(double s) const { return impl_->deriv(s); }
double RadiusFunction::deriv2(double s) const { return impl_->deriv2(s); }
std::optional<Interval> RadiusFunction::domain() const {
    return impl_->domain();
}

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

Profile::Profile(std::function<double(double)> u,
                 std::function<double(double)> up)
    : fns_(std::make_shared<
           std::pair<std::function<double(double)>,
                     std::function<double(double)>>>(std::move(u),
                                                     std::move(up))) {
    const auto& f = fns_->first;
    if (std::abs(f(0.0) - f(kTwoPi)) > 1e-12)
        throw InvalidParameter("profile must be 2 pi periodic: u(0) != u(2 pi)");
    for (int i = 0; i < 512; ++i) {
        const double theta = kTwoPi * i / 512.0;
        if (!(f(theta) > 0.0))
            throw InvalidParameter("profile must be positive on [0, 2 pi)");
    }
}

Profile Profile::constant(double u) {
    if (!(u > 0.0)) throw InvalidParameter("profile must be positive");
    return Profile([u](double) { return u; }, [](double) { return 0.0; });
}

Profile Profile::cosine(double base, double amp) {
    return Profile([base, amp](double t) { return base + amp * std::cos(t); },
                   [amp](double t) { return -amp * std::sin(t); });
}

Profile Profile::from_functions(std::function<double(double)> u,
                                std::function<double(double)> up) {
    if (!u || !up)
        throw InvalidParameter("profile needs both u and u' callbacks");
    return Profile(std::move(u), std::move(up));
}

double Profile::value(double theta) const { return fns_->first(theta); }
double Profile::deriv(double theta) const { return fns_->second(theta); }

// ---------------------------------------------------------------------------
// CanalSurface
// ---------------------------------------------------------------------------

CanalSurface::CanalSurface(SpineCurve spine, RadiusFunction radius,
                           SignBranch branch)
    : spine_(std::move(spine)), radius_(std::move(radius)), branch_(branch) {
    const Interval sd = spine_.domain();
    if (auto rd = radius_.domain()) {
        const double tol = 1e-9 * (1.0 + sd.length());
        if (rd->lo > sd.lo + tol || rd->hi < sd.hi - tol)
            throw InvalidParameter(
                "radius function domain does not cover the spine domain");
    }
    // dense precondition sweep: r > 0 and |r'| < 1, endpoints included
    const int n = 512;
    double max_abs_rp = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = sd.lerp(static_cast<double>(i) / n);
        const double r = radius_.value(s);
        if (!(r > 0.0))
            throw InvalidParameter("radius must stay positive; r(" +
                                   std::to_string(s) +
                                   ") = " + std::to_string(r));
        const double rp = radius_.deriv(s);
        max_abs_rp = std::max(max_abs_rp, std::abs(rp));
        if (!(std::abs(rp) < 1.0))
            throw RegularityError(
                "canal surface degenerates where |r'| >= 1; offending s = " +
                std::to_string(s));
    }
    tube_ = radius_.form() == RadiusForm::constant || max_abs_rp == 0.0;
}

CanalScalars CanalSurface::scalars(double s) const {
    CanalScalars v;
    v.r = radius_.value(s);
    v.rp = radius_.deriv(s);
    v.rpp = radius_.deriv2(s);
    const double w2 = 1.0 - v.rp * v.rp;
    if (!(w2 > 0.0))
        throw RegularityError("|r'| >= 1 at s = " + std::to_string(s));
    const double w = std::sqrt(w2);
    v.h = v.r * v.rp;
    v.hp = v.rp * v.rp + v.r * v.rpp;
    v.g = v.r * w;
    v.gp = v.rp * (w2 - v.r * v.rpp) / w;
    const double sg = sigma();
    v.ghat = sg * v.g;
    v.ghatp = sg * v.gp;
    v.kappa = spine_.curvature(s);
    v.tau = spine_.torsion(s);
    return v;
}

Vec3 CanalSurface::point(double s, double theta) const {
    const CanalScalars v = scalars(s);
    const FrenetFrame f = spine_.frame(s);
    return spine_.point(s) - v.h * f.T +
           v.ghat * (std::cos(theta) * f.N + std::sin(theta) * f.B);
}

RegularityProbe CanalSurface::is_regular_at(double s, double theta,
                                            double tol) const {
    const CanalScalars v = scalars(s);
    const double ct = std::cos(theta);
    RegularityProbe probe;
    probe.residual = v.kappa * v.ghat * ct + v.hp - 1.0;
    probe.covanishing = v.ghatp - v.h * v.kappa * ct;
    probe.regular = std::abs(probe.residual) > tol;
    return probe;
}

// ---------------------------------------------------------------------------
// GeneralizedTube
// ---------------------------------------------------------------------------

GeneralizedTube::GeneralizedTube(SpineCurve spine, Profile profile)
    : spine_(std::move(spine)), profile_(std::move(profile)) {}

Vec3 GeneralizedTube::point(double s, double theta) const {
    const FrenetFrame f = spine_.frenet(s);
    const double u = profile_.value(theta);
    return spine_.point(s) +
           u * (std::cos(theta) * f.N + std::sin(theta) * f.B);
}

}  // namespace canalkit
