#include "canalkit/spine.hpp"

#include "canalkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace canalkit {

namespace {

constexpr double kKappaTol = 1e-9;

FrenetFrame frame_from_jet(const Jet3& j) {
    const Vec3 cross = j.d1.cross(j.d2);
    const double speed = j.d1.norm();
    const double cn = cross.norm();
    const double kappa = cn / (speed * speed * speed);
    if (kappa < kKappaTol)
        throw RegularityError("Frenet frame undefined: curvature below 1e-9");
    FrenetFrame f;
    f.T = j.d1 / speed;
    const Vec3 u = j.d2 - j.d2.dot(f.T) * f.T;
    f.N = u.normalized();
    f.B = f.T.cross(f.N);
    f.kappa = kappa;
    f.tau = cross.dot(j.d3) / (cn * cn);
    return f;
}

double kappa_from_jet(const Jet3& j) {
    const double speed = j.d1.norm();
    return j.d1.cross(j.d2).norm() / (speed * speed * speed);
}

double tau_from_jet(const Jet3& j) {
    const Vec3 cross = j.d1.cross(j.d2);
    const double cn2 = cross.squaredNorm();
    if (cn2 < kKappaTol * kKappaTol) return 0.0;
    return cross.dot(j.d3) / cn2;
}

}  // namespace

std::string to_string(SpineKind kind) {
    switch (kind) {
        case SpineKind::circle: return "circle";
        case SpineKind::line: return "line";
        case SpineKind::circular_helix: return "circular_helix";
        case SpineKind::general_helix_like: return "general_helix_like";
        case SpineKind::salkowski: return "salkowski";
        case SpineKind::sampled: return "sampled";
    }
    return "unknown";
}

std::string to_string(SpineClass c) {
    switch (c) {
        case SpineClass::planar: return "planar";
        case SpineClass::circular_helix: return "circular_helix";
        case SpineClass::general_helix: return "general_helix";
        case SpineClass::generic: return "generic";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Backend hierarchy
// ---------------------------------------------------------------------------

struct SpineCurve::Backend {
    SpineKind kind;
    Interval domain;

    Backend(SpineKind k, Interval d) : kind(k), domain(d) {}
    virtual ~Backend() = default;

    virtual Jet3 jet(double s) const = 0;
    virtual double curvature(double s) const { return kappa_from_jet(jet(s)); }
    virtual double torsion(double s) const { return tau_from_jet(jet(s)); }
    virtual double curvature_derivative(double s) const {
        return fd_scalar([this](double u) { return curvature(u); }, s);
    }
    virtual double torsion_derivative(double s) const {
        return fd_scalar([this](double u) { return torsion(u); }, s);
    }
    virtual FrenetFrame frenet(double s) const { return frame_from_jet(jet(s)); }
    virtual FrenetFrame frame(double s) const { return frenet(s); }
    virtual std::vector<double> knot_arclengths() const { return {}; }

    // Richardson central difference interior, second-order one-sided at the
    // ends so probes never leave the domain.
    double fd_scalar(const std::function<double(double)>& f, double s) const {
        const double h = 1e-5 * (1.0 + std::abs(s));
        if (s - domain.lo >= h && domain.hi - s >= h)
            return fd_derivative(f, s, h);
        if (domain.hi - s >= 2.0 * h)
            return (-3.0 * f(s) + 4.0 * f(s + h) - f(s + 2.0 * h)) / (2.0 * h);
        return (3.0 * f(s) - 4.0 * f(s - h) + f(s - 2.0 * h)) / (2.0 * h);
    }

    double checked(double s) const {
        const double tol = 1e-9 * (1.0 + domain.length());
        if (s < domain.lo - tol || s > domain.hi + tol)
            throw InvalidParameter("arc length outside spine domain");
        return domain.clamp(s);
    }
};

namespace {

// ------------------------------ circle ------------------------------------

struct CircleBackend final : SpineCurve::Backend {
    double R;

    CircleBackend(double radius, Interval dom)
        : Backend(SpineKind::circle, dom), R(radius) {}

    Jet3 jet(double s) const override {
        s = checked(s);
        const double u = s / R;
        const double c = std::cos(u), sn = std::sin(u);
        Jet3 j;
        j.p = Vec3(R * c, R * sn, 0.0);
        j.d1 = Vec3(-sn, c, 0.0);
        j.d2 = Vec3(-c / R, -sn / R, 0.0);
        j.d3 = Vec3(sn / (R * R), -c / (R * R), 0.0);
        return j;
    }

    double curvature(double) const override { return 1.0 / R; }
    double torsion(double) const override { return 0.0; }
    double curvature_derivative(double) const override { return 0.0; }
    double torsion_derivative(double) const override { return 0.0; }

    FrenetFrame frenet(double s) const override {
        s = checked(s);
        const double u = s / R;
        const double c = std::cos(u), sn = std::sin(u);
        FrenetFrame f;
        f.T = Vec3(-sn, c, 0.0);
        f.N = Vec3(-c, -sn, 0.0);
        f.B = f.T.cross(f.N);
        f.kappa = 1.0 / R;
        f.tau = 0.0;
        return f;
    }
};

// ------------------------------- line -------------------------------------

struct LineBackend final : SpineCurve::Backend {
    Vec3 p0;
    Vec3 dir;  // unit
    Vec3 n_fixed, b_fixed;

    LineBackend(const Vec3& origin, const Vec3& direction, Interval dom)
        : Backend(SpineKind::line, dom), p0(origin), dir(direction.normalized()) {
        // pick the coordinate axis least aligned with dir
        int least = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(dir[i]) < std::abs(dir[least])) least = i;
        Vec3 e = Vec3::Zero();
        e[least] = 1.0;
        n_fixed = (e - e.dot(dir) * dir).normalized();
        b_fixed = dir.cross(n_fixed);
    }

    Jet3 jet(double s) const override {
        s = checked(s);
        Jet3 j;
        j.p = p0 + s * dir;
        j.d1 = dir;
        j.d2 = Vec3::Zero();
        j.d3 = Vec3::Zero();
        return j;
    }

    double curvature(double) const override { return 0.0; }
    double torsion(double) const override { return 0.0; }
    double curvature_derivative(double) const override { return 0.0; }
    double torsion_derivative(double) const override { return 0.0; }

    FrenetFrame frenet(double) const override {
        throw RegularityError("Frenet frame undefined: curvature below 1e-9");
    }

    FrenetFrame frame(double s) const override {
        checked(s);
        FrenetFrame f;
        f.T = dir;
        f.N = n_fixed;
        f.B = b_fixed;
        f.kappa = 0.0;
        f.tau = 0.0;
        return f;
    }
};

// --------------------------- circular helix --------------------------------

struct HelixBackend final : SpineCurve::Backend {
    double a, b, d;

    HelixBackend(double a_, double b_, Interval dom)
        : Backend(SpineKind::circular_helix, dom),
          a(a_),
          b(b_),
          d(std::sqrt(a_ * a_ + b_ * b_)) {}

    Jet3 jet(double s) const override {
        s = checked(s);
        const double u = s / d;
        const double c = std::cos(u), sn = std::sin(u);
        Jet3 j;
        j.p = Vec3(a * c, a * sn, b * u);
        j.d1 = Vec3(-a * sn / d, a * c / d, b / d);
        j.d2 = Vec3(-a * c / (d * d), -a * sn / (d * d), 0.0);
        j.d3 = Vec3(a * sn / (d * d * d), -a * c / (d * d * d), 0.0);
        return j;
    }

    double curvature(double) const override { return a / (d * d); }
    double torsion(double) const override { return b / (d * d); }
    double curvature_derivative(double) const override { return 0.0; }
    double torsion_derivative(double) const override { return 0.0; }

    FrenetFrame frenet(double s) const override {
        s = checked(s);
        const double u = s / d;
        const double c = std::cos(u), sn = std::sin(u);
        FrenetFrame f;
        f.T = Vec3(-a * sn / d, a * c / d, b / d);
        f.N = Vec3(-c, -sn, 0.0);
        f.B = f.T.cross(f.N);
        f.kappa = a / (d * d);
        f.tau = b / (d * d);
        return f;
    }
};

// ----------------------- intrinsic (kappa, tau given) ----------------------

// Curve recovered from its curvature and torsion by integrating the
// Frenet-Serret system on a fixed fine grid; evaluation between nodes by
// quintic Hermite with the exact node derivatives the system provides.
struct IntrinsicBackend final : SpineCurve::Backend {
    std::function<double(double)> kap, kap_d, tau_f, tau_d;
    int cells;
    double h;                      // cell width
    std::vector<Vec3> Cn, Tn, Nn, Bn;  // node values

    IntrinsicBackend(SpineKind k, Interval dom,
                     std::function<double(double)> kappa,
                     std::function<double(double)> kappa_deriv,
                     std::function<double(double)> tau,
                     std::function<double(double)> tau_deriv, int n_cells = 4096)
        : Backend(k, dom),
          kap(std::move(kappa)),
          kap_d(std::move(kappa_deriv)),
          tau_f(std::move(tau)),
          tau_d(std::move(tau_deriv)),
          cells(n_cells),
          h(dom.length() / n_cells) {
        integrate();
    }

    struct State {
        Vec3 C, T, N, B;
    };

    State rhs(double s, const State& y) const {
        const double k = kap(s), t = tau_f(s);
        return {y.T, k * y.N, -k * y.T + t * y.B, -t * y.N};
    }

    static State axpy(const State& y, double a, const State& d) {
        return {y.C + a * d.C, y.T + a * d.T, y.N + a * d.N, y.B + a * d.B};
    }

    void integrate() {
        Cn.resize(cells + 1);
        Tn.resize(cells + 1);
        Nn.resize(cells + 1);
        Bn.resize(cells + 1);
        State y{Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        store(0, y);
        const int sub = 4;
        const double hs = h / sub;
        for (int i = 0; i < cells; ++i) {
            double s = domain.lo + i * h;
            for (int q = 0; q < sub; ++q) {
                const State k1 = rhs(s, y);
                const State k2 = rhs(s + 0.5 * hs, axpy(y, 0.5 * hs, k1));
                const State k3 = rhs(s + 0.5 * hs, axpy(y, 0.5 * hs, k2));
                const State k4 = rhs(s + hs, axpy(y, hs, k3));
                y.C += (hs / 6.0) * (k1.C + 2.0 * k2.C + 2.0 * k3.C + k4.C);
                y.T += (hs / 6.0) * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
                y.N += (hs / 6.0) * (k1.N + 2.0 * k2.N + 2.0 * k3.N + k4.N);
                y.B += (hs / 6.0) * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
                s += hs;
            }
            // re-orthonormalize the frame at each node
            y.T.normalize();
            y.N = (y.N - y.N.dot(y.T) * y.T).normalized();
            y.B = y.T.cross(y.N);
            store(i + 1, y);
        }
    }

    void store(int i, const State& y) {
        Cn[static_cast<std::size_t>(i)] = y.C;
        Tn[static_cast<std::size_t>(i)] = y.T;
        Nn[static_cast<std::size_t>(i)] = y.N;
        Bn[static_cast<std::size_t>(i)] = y.B;
    }

    struct NodeJet {
        Vec3 v, d1, d2;
    };

    // first and second s-derivatives of each frame field at node i
    void node_jets(int i, NodeJet& c, NodeJet& t, NodeJet& n, NodeJet& b) const {
        const double s = domain.lo + i * h;
        const double k = kap(s), kd = kap_d(s), ta = tau_f(s), td = tau_d(s);
        const std::size_t u = static_cast<std::size_t>(i);
        const Vec3 &T = Tn[u], &N = Nn[u], &B = Bn[u];
        c = {Cn[u], T, k * N};
        t = {T, k * N, kd * N + k * (-k * T + ta * B)};
        n = {N, -k * T + ta * B,
             -kd * T - (k * k + ta * ta) * N + td * B};
        b = {B, -ta * N, k * ta * T - td * N - ta * ta * B};
    }

    State eval(double s) const {
        int i = static_cast<int>(std::floor((s - domain.lo) / h));
        i = std::max(0, std::min(cells - 1, i));
        const double x = s - (domain.lo + i * h);
        NodeJet c0, t0, n0, b0, c1, t1, n1, b1;
        node_jets(i, c0, t0, n0, b0);
        node_jets(i + 1, c1, t1, n1, b1);
        State out;
        for (int d = 0; d < 3; ++d) {
            out.C[d] = quintic_hermite(c0.v[d], c0.d1[d], c0.d2[d], c1.v[d],
                                       c1.d1[d], c1.d2[d], h, x);
            out.T[d] = quintic_hermite(t0.v[d], t0.d1[d], t0.d2[d], t1.v[d],
                                       t1.d1[d], t1.d2[d], h, x);
            out.N[d] = quintic_hermite(n0.v[d], n0.d1[d], n0.d2[d], n1.v[d],
                                       n1.d1[d], n1.d2[d], h, x);
            out.B[d] = quintic_hermite(b0.v[d], b0.d1[d], b0.d2[d], b1.v[d],
                                       b1.d1[d], b1.d2[d], h, x);
        }
        return out;
    }

    Jet3 jet(double s) const override {
        s = checked(s);
        const State y = eval(s);
        const double k = kap(s), kd = kap_d(s), ta = tau_f(s);
        Jet3 j;
        j.p = y.C;
        j.d1 = y.T;
        j.d2 = k * y.N;
        j.d3 = -k * k * y.T + kd * y.N + k * ta * y.B;
        return j;
    }

    double curvature(double s) const override { return kap(checked(s)); }
    double torsion(double s) const override { return tau_f(checked(s)); }
    double curvature_derivative(double s) const override {
        return kap_d(checked(s));
    }
    double torsion_derivative(double s) const override {
        return tau_d(checked(s));
    }

    FrenetFrame frenet(double s) const override {
        s = checked(s);
        const double k = kap(s);
        if (k < kKappaTol)
            throw RegularityError(
                "Frenet frame undefined: curvature below 1e-9");
        State y = eval(s);
        FrenetFrame f;
        f.T = y.T.normalized();
        f.N = (y.N - y.N.dot(f.T) * f.T).normalized();
        f.B = f.T.cross(f.N);
        f.kappa = k;
        f.tau = tau_f(s);
        return f;
    }
};

// -------------------- arc-length reparametrized curve ----------------------

struct ReparamBackend final : SpineCurve::Backend {
    RawCurve raw;
    std::unique_ptr<CumulativeIntegral> arclen;
    std::vector<double> knot_s;

    ReparamBackend(SpineKind k, RawCurve rc, std::vector<double> knots_t = {})
        : Backend(k, {0.0, 0.0}), raw(std::move(rc)) {
        const Interval td = raw.t_domain;
        // reject singular parametrizations before building the table
        const int probes = 2048;
        for (int i = 0; i <= probes; ++i) {
            const double t = td.lerp(static_cast<double>(i) / probes);
            if (raw.c1(t).norm() < 1e-8)
                throw RegularityError(
                    "singular parametrization: |C'(t)| ~ 0 near t = " +
                    std::to_string(t));
        }
        arclen = std::make_unique<CumulativeIntegral>(
            [this](double t) { return raw.c1(t).norm(); }, td, td.lo);
        domain = {0.0, arclen->total()};
        knot_s.reserve(knots_t.size());
        for (double t : knots_t) knot_s.push_back(arclen->value(t));
    }

    Jet3 jet(double s) const override {
        s = checked(s);
        const double t = arclen->inverse(s);
        const Vec3 c1 = raw.c1(t), c2 = raw.c2(t), c3 = raw.c3(t);
        const double v = c1.norm();
        const double vp = c1.dot(c2) / v;
        const double vpp = (c2.dot(c2) + c1.dot(c3)) / v -
                           (c1.dot(c2) * c1.dot(c2)) / (v * v * v);
        const double v2 = v * v, v3 = v2 * v, v4 = v3 * v, v5 = v4 * v;
        Jet3 j;
        j.p = raw.c(t);
        j.d1 = c1 / v;
        j.d2 = c2 / v2 - c1 * (vp / v3);
        j.d3 = c3 / v3 - 3.0 * c2 * (vp / v4) - c1 * (vpp / v4) +
               3.0 * c1 * (vp * vp / v5);
        return j;
    }

    std::vector<double> knot_arclengths() const override { return knot_s; }
};

}  // namespace

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

SpineCurve::SpineCurve(std::shared_ptr<const Backend> impl)
    : impl_(std::move(impl)) {}

static void require_domain(const Interval& d) {
    if (!(d.hi > d.lo)) throw InvalidParameter("spine domain must have hi > lo");
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi))
        throw InvalidParameter("spine domain must be finite");
}

SpineCurve SpineCurve::circle(double radius) {
    if (!(radius > 0.0)) throw InvalidParameter("circle radius must be > 0");
    return circle(radius, {0.0, kTwoPi * radius});
}

SpineCurve SpineCurve::circle(double radius, Interval domain) {
    if (!(radius > 0.0)) throw InvalidParameter("circle radius must be > 0");
    require_domain(domain);
    return SpineCurve(std::make_shared<CircleBackend>(radius, domain));
}

SpineCurve SpineCurve::line(const Vec3& origin, const Vec3& direction) {
    return line(origin, direction, {0.0, 10.0});
}

SpineCurve SpineCurve::line(const Vec3& origin, const Vec3& direction,
                            Interval domain) {
    if (direction.norm() < 1e-12)
        throw InvalidParameter("line direction must be nonzero");
    require_domain(domain);
    return SpineCurve(std::make_shared<LineBackend>(origin, direction, domain));
}

SpineCurve SpineCurve::circular_helix(double a, double b) {
    if (!(a > 0.0)) throw InvalidParameter("helix parameter a must be > 0");
    const double d = std::sqrt(a * a + b * b);
    return circular_helix(a, b, {0.0, kTwoPi * d});
}

SpineCurve SpineCurve::circular_helix(double a, double b, Interval domain) {
    if (!(a > 0.0)) throw InvalidParameter("helix parameter a must be > 0");
    require_domain(domain);
    return SpineCurve(std::make_shared<HelixBackend>(a, b, domain));
}

SpineCurve SpineCurve::general_helix_like(double phi, double kappa0,
                                          double kappa1, double omega) {
    return general_helix_like(phi, kappa0, kappa1, omega, {0.0, kTwoPi});
}

SpineCurve SpineCurve::general_helix_like(double phi, double kappa0,
                                          double kappa1, double omega,
                                          Interval domain) {
    if (!(std::abs(phi) < kPi / 2.0 - 1e-9))
        throw InvalidParameter("helix angle phi must satisfy |phi| < pi/2");
    if (!(kappa0 - std::abs(kappa1) > 0.0))
        throw InvalidParameter(
            "general_helix_like needs kappa0 - |kappa1| > 0 so curvature stays "
            "positive");
    require_domain(domain);
    const double tphi = std::tan(phi);
    auto kap = [kappa0, kappa1, omega](double s) {
        return kappa0 + kappa1 * std::sin(omega * s);
    };
    auto kap_d = [kappa1, omega](double s) {
        return kappa1 * omega * std::cos(omega * s);
    };
    auto tau = [kap, tphi](double s) { return tphi * kap(s); };
    auto tau_d = [kap_d, tphi](double s) { return tphi * kap_d(s); };
    return SpineCurve(std::make_shared<IntrinsicBackend>(
        SpineKind::general_helix_like, domain, kap, kap_d, tau, tau_d));
}

SpineCurve SpineCurve::salkowski(double m) {
    if (m == 0.0) throw InvalidParameter("salkowski parameter m must be nonzero");
    const double lim = 0.9 / std::abs(m);
    return salkowski(m, {-lim, lim});
}

SpineCurve SpineCurve::salkowski(double m, Interval domain) {
    if (m == 0.0) throw InvalidParameter("salkowski parameter m must be nonzero");
    require_domain(domain);
    const double worst =
        std::max(std::abs(m * domain.lo), std::abs(m * domain.hi));
    if (!(worst < 1.0))
        throw InvalidParameter(
            "salkowski domain must satisfy |m s| < 1 (arcsin argument)");
    auto kap = [](double) { return 1.0; };
    auto kap_d = [](double) { return 0.0; };
    auto tau = [m](double s) {
        return m * s / std::sqrt(1.0 - m * m * s * s);
    };
    auto tau_d = [m](double s) {
        const double w = 1.0 - m * m * s * s;
        return m / (w * std::sqrt(w));
    };
    return SpineCurve(std::make_shared<IntrinsicBackend>(
        SpineKind::salkowski, domain, kap, kap_d, tau, tau_d));
}

SpineCurve SpineCurve::from_samples(const std::vector<double>& t,
                                    const std::vector<Vec3>& points) {
    if (t.size() != points.size())
        throw InvalidParameter("from_samples: t and point counts differ");
    if (t.size() < 4)
        throw InvalidParameter("from_samples: need at least 4 samples");
    std::vector<double> xs(t.size()), ys(t.size()), zs(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        xs[i] = points[i].x();
        ys[i] = points[i].y();
        zs[i] = points[i].z();
    }
    struct Splines {
        CubicSpline x, y, z;
    };
    auto sp = std::make_shared<Splines>(
        Splines{CubicSpline(t, xs), CubicSpline(t, ys), CubicSpline(t, zs)});
    RawCurve raw;
    raw.t_domain = {t.front(), t.back()};
    raw.c = [sp](double u) {
        return Vec3(sp->x.value(u), sp->y.value(u), sp->z.value(u));
    };
    raw.c1 = [sp](double u) {
        return Vec3(sp->x.deriv(u), sp->y.deriv(u), sp->z.deriv(u));
    };
    raw.c2 = [sp](double u) {
        return Vec3(sp->x.deriv2(u), sp->y.deriv2(u), sp->z.deriv2(u));
    };
    raw.c3 = [sp](double u) {
        return Vec3(sp->x.deriv3(u), sp->y.deriv3(u), sp->z.deriv3(u));
    };
    return SpineCurve(std::make_shared<ReparamBackend>(SpineKind::sampled,
                                                       std::move(raw), t));
}

SpineCurve SpineCurve::from_raw(RawCurve raw) {
    if (!raw.c || !raw.c1 || !raw.c2 || !raw.c3)
        throw InvalidParameter("from_raw: all derivative callbacks required");
    require_domain(raw.t_domain);
    return SpineCurve(
        std::make_shared<ReparamBackend>(SpineKind::sampled, std::move(raw)));
}

// ---------------------------------------------------------------------------
// Forwarding API
// ---------------------------------------------------------------------------

SpineKind SpineCurve::kind() const { return impl_->kind; }
Interval SpineCurve::domain() const { return impl_->domain; }
Vec3 SpineCurve::point(double s) const { return impl_->jet(s).p; }
Jet3 SpineCurve::jet(double s) const { return impl_->jet(s); }
double SpineCurve::curvature(double s) const { return impl_->curvature(s); }
double SpineCurve::torsion(double s) const { return impl_->torsion(s); }
double SpineCurve::curvature_derivative(double s) const {
    return impl_->curvature_derivative(s);
}
double SpineCurve::torsion_derivative(double s) const {
    return impl_->torsion_derivative(s);
}
FrenetFrame SpineCurve::frenet(double s) const { return impl_->frenet(s); }
FrenetFrame SpineCurve::frame(double s) const { return impl_->frame(s); }

bool SpineCurve::has_frenet(double s) const {
    return impl_->curvature(s) >= kKappaTol;
}

std::vector<double> SpineCurve::knot_arclengths() const {
    return impl_->knot_arclengths();
}

SpineClassification SpineCurve::classify(int grid, double tol) const {
    if (grid < 8) grid = 8;
    SpineClassification out;
    std::vector<double> ks, ts;
    ks.reserve(static_cast<std::size_t>(grid));
    ts.reserve(static_cast<std::size_t>(grid));
    const Interval dom = impl_->domain;
    for (int i = 0; i < grid; ++i) {
        const double s = dom.lerp((i + 0.5) / static_cast<double>(grid));
        ks.push_back(impl_->curvature(s));
        ts.push_back(impl_->torsion(s));
    }
    const auto [kmin_it, kmax_it] = std::minmax_element(ks.begin(), ks.end());
    const auto [tmin_it, tmax_it] = std::minmax_element(ts.begin(), ts.end());
    const double kmin = *kmin_it, kmax = *kmax_it;
    const double tmin = *tmin_it, tmax = *tmax_it;
    double tabs = 0.0;
    for (double t : ts) tabs = std::max(tabs, std::abs(t));
    out.max_abs_tau = tabs;
    out.kappa_variation = kmax - kmin;
    out.tau_variation = tmax - tmin;

    const double kscale = std::max(std::abs(kmax), 1.0);
    if (tabs <= tol * kscale) {
        out.kind = SpineClass::planar;
        out.phi = 0.0;
        return out;
    }
    if (kmin < kKappaTol) {
        out.kind = SpineClass::generic;  // ratio undefined somewhere
        return out;
    }
    std::vector<double> ratio(ks.size());
    double rsum = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        ratio[i] = ts[i] / ks[i];
        rsum += ratio[i];
    }
    const auto [rmin_it, rmax_it] =
        std::minmax_element(ratio.begin(), ratio.end());
    out.ratio_variation = *rmax_it - *rmin_it;
    const double rmean = rsum / static_cast<double>(ratio.size());

    const bool kappa_const = (kmax - kmin) <= tol * std::abs(kmax);
    const bool tau_const = (tmax - tmin) <= tol * std::max(tabs, std::abs(kmax));
    const bool ratio_const =
        out.ratio_variation <= tol * std::max(std::abs(rmean), 1.0);
    if (kappa_const && tau_const) {
        out.kind = SpineClass::circular_helix;
        out.phi = std::atan(rmean);
    } else if (ratio_const) {
        out.kind = SpineClass::general_helix;
        out.phi = std::atan(rmean);
    } else {
        out.kind = SpineClass::generic;
    }
    return out;
}

}  // namespace canalkit
