#include "canalkit/forms.hpp"

#include "canalkit/errors.hpp"

#include <cmath>

namespace canalkit {

namespace {

// The three frame-coefficient scalars every canal closed form is built from:
//   A = kappa ghat cos(theta) + h' - 1   (s-tangent T coefficient is -A)
//   P = ghat tau + h kappa sin(theta)    (F = ghat P; vanishing marks LOC)
//   Q = ghat' - h kappa cos(theta)       (normal's T component, x ghat)
struct Apq {
    double A, P, Q;
    double ct, st;
    CanalScalars v;
};

Apq apq(const CanalSurface& canal, double s, double theta) {
    Apq out;
    out.v = canal.scalars(s);
    out.ct = std::cos(theta);
    out.st = std::sin(theta);
    out.A = out.v.kappa * out.v.ghat * out.ct + out.v.hp - 1.0;
    out.P = out.v.ghat * out.v.tau + out.v.h * out.v.kappa * out.st;
    out.Q = out.v.ghatp - out.v.h * out.v.kappa * out.ct;
    return out;
}

}  // namespace

FirstForm first_form_closed(const CanalSurface& canal, double s,
                            double theta) {
    const Apq x = apq(canal, s, theta);
    FirstForm I;
    I.E = x.A * x.A + x.P * x.P + x.Q * x.Q;
    I.F = x.v.ghat * x.P;
    I.G = x.v.ghat * x.v.ghat;
    return I;
}

double cross_norm2_closed(const CanalSurface& canal, double s, double theta) {
    const Apq x = apq(canal, s, theta);
    return x.v.g * x.v.g * (x.A * x.A + x.Q * x.Q);
}

Vec3 unit_normal_closed(const CanalSurface& canal, double s, double theta) {
    const Apq x = apq(canal, s, theta);
    const double mag = std::sqrt(x.A * x.A + x.Q * x.Q);
    if (!(mag > 1e-10))
        throw RegularityError("degenerate normal: singular canal point");
    const FrenetFrame fr = canal.spine().frame(s);
    const Vec3 raw =
        x.Q * fr.T + x.A * x.ct * fr.N + x.A * x.st * fr.B;
    return canal.sigma() * raw / mag;
}

double second_form_f_closed(const CanalSurface& canal, double s,
                            double theta) {
    const Apq x = apq(canal, s, theta);
    const double mag = std::sqrt(x.A * x.A + x.Q * x.Q);
    if (!(mag > 1e-10))
        throw RegularityError("singular canal point: f undefined");
    return canal.sigma() *
           (x.Q * x.v.kappa * x.v.ghat * x.st - x.v.tau * x.v.ghat * x.A) /
           mag;
}

// ---------------------------------------------------------------------------
// Generalized tube closed forms
// ---------------------------------------------------------------------------

namespace {

struct GtTangents {
    Vec3 Xs, Xt;
    double u, up, alpha;  // alpha = 1 - kappa u cos(theta)
    FrenetFrame fr;
    double ct, st;
};

GtTangents gt_tangents(const GeneralizedTube& gt, double s, double theta) {
    GtTangents t;
    t.fr = gt.spine().frenet(s);
    t.u = gt.profile().value(theta);
    t.up = gt.profile().deriv(theta);
    t.ct = std::cos(theta);
    t.st = std::sin(theta);
    t.alpha = 1.0 - t.fr.kappa * t.u * t.ct;
    t.Xs = t.alpha * t.fr.T - t.u * t.fr.tau * t.st * t.fr.N +
           t.u * t.fr.tau * t.ct * t.fr.B;
    t.Xt = (t.up * t.ct - t.u * t.st) * t.fr.N +
           (t.up * t.st + t.u * t.ct) * t.fr.B;
    return t;
}

}  // namespace

GtClosedFF gt_F_f_closed(const GeneralizedTube& gt, double s, double theta) {
    const GtTangents t = gt_tangents(gt, s, theta);
    const double tau = t.fr.tau, kappa = t.fr.kappa;
    const double u = t.u, up = t.up;
    const double norm2 = u * u * up * up * tau * tau +
                         t.alpha * t.alpha * (u * u + up * up);
    if (!(norm2 > 1e-20))
        throw RegularityError("singular generalized-tube point");
    GtClosedFF out;
    out.F = u * u * tau;
    out.f = tau *
            (kappa * u * up * (u * t.st - up * t.ct) -
             t.alpha * (u * u + up * up)) /
            std::sqrt(norm2);
    return out;
}

Vec3 gt_unit_normal_closed(const GeneralizedTube& gt, double s, double theta) {
    const GtTangents t = gt_tangents(gt, s, theta);
    const Vec3 cross = t.Xt.cross(t.Xs);
    const double mag = cross.norm();
    if (!(mag > 1e-10))
        throw RegularityError("singular generalized-tube point");
    return cross / mag;
}

// ---------------------------------------------------------------------------
// Numeric oracle
// ---------------------------------------------------------------------------

namespace {

inline Vec3 rich_d1(const Vec3& ph, const Vec3& mh, const Vec3& ph2,
                    const Vec3& mh2, double h) {
    const Vec3 d_h = (ph - mh) / (2.0 * h);
    const Vec3 d_h2 = (ph2 - mh2) / h;  // step h/2
    return (4.0 * d_h2 - d_h) / 3.0;
}

inline Vec3 rich_d2(const Vec3& c, const Vec3& ph, const Vec3& mh,
                    const Vec3& ph2, const Vec3& mh2, double h) {
    const Vec3 s_h = (ph - 2.0 * c + mh) / (h * h);
    const Vec3 s_h2 = (ph2 - 2.0 * c + mh2) / (0.25 * h * h);
    return (4.0 * s_h2 - s_h) / 3.0;
}

}  // namespace

SurfaceJets numeric_jets(const ParametricSurface& surf, double s, double theta,
                         double step) {
    const double h = step;
    auto K = [&](double a, double b) { return surf.point(a, b); };
    SurfaceJets j;
    j.p = K(s, theta);

    const Vec3 sp = K(s + h, theta), sm = K(s - h, theta);
    const Vec3 sp2 = K(s + 0.5 * h, theta), sm2 = K(s - 0.5 * h, theta);
    const Vec3 tp = K(s, theta + h), tm = K(s, theta - h);
    const Vec3 tp2 = K(s, theta + 0.5 * h), tm2 = K(s, theta - 0.5 * h);

    j.Ks = rich_d1(sp, sm, sp2, sm2, h);
    j.Kt = rich_d1(tp, tm, tp2, tm2, h);
    j.Kss = rich_d2(j.p, sp, sm, sp2, sm2, h);
    j.Ktt = rich_d2(j.p, tp, tm, tp2, tm2, h);

    auto mixed = [&](double hh) {
        return (K(s + hh, theta + hh) - K(s + hh, theta - hh) -
                K(s - hh, theta + hh) + K(s - hh, theta - hh)) /
               (4.0 * hh * hh);
    };
    const Vec3 m_h = mixed(h);
    const Vec3 m_h2 = mixed(0.5 * h);
    j.Kst = (4.0 * m_h2 - m_h) / 3.0;
    return j;
}

std::pair<FirstForm, SecondForm> forms_from_jets(const SurfaceJets& j,
                                                 const Vec3* align_normal) {
    FirstForm I;
    I.E = j.Ks.dot(j.Ks);
    I.F = j.Ks.dot(j.Kt);
    I.G = j.Kt.dot(j.Kt);

    Vec3 n = j.Ks.cross(j.Kt);
    const double mag = n.norm();
    if (!(mag > 1e-12))
        throw RegularityError(
            "numeric normal degenerate: singular surface point");
    n /= mag;
    if (align_normal != nullptr && n.dot(*align_normal) < 0.0) n = -n;

    SecondForm II;
    II.e = n.dot(j.Kss);
    II.f = n.dot(j.Kst);
    II.g_II = n.dot(j.Ktt);
    return {I, II};
}

std::pair<FirstForm, SecondForm> fundamental_forms_numeric(
    const ParametricSurface& surf, double s, double theta, double step,
    const Vec3* align_normal) {
    return forms_from_jets(numeric_jets(surf, s, theta, step), align_normal);
}

// ---------------------------------------------------------------------------
// Shape operator
// ---------------------------------------------------------------------------

ShapeOperatorAt shape_operator(const FirstForm& I, const SecondForm& II,
                               double tol) {
    const double det_I = I.E * I.G - I.F * I.F;
    if (!(det_I > tol))
        throw RegularityError("metric degenerate: E G - F^2 below tolerance");

    ShapeOperatorAt out;
    // S = I^{-1} II; columns are the images of d/ds and d/dtheta
    out.S(0, 0) = (II.e * I.G - II.f * I.F) / det_I;
    out.S(0, 1) = (II.f * I.G - II.g_II * I.F) / det_I;
    out.S(1, 0) = (II.f * I.E - II.e * I.F) / det_I;
    out.S(1, 1) = (II.g_II * I.E - II.f * I.F) / det_I;

    const double tr = out.S(0, 0) + out.S(1, 1);
    const double det = out.S(0, 0) * out.S(1, 1) - out.S(0, 1) * out.S(1, 0);
    const double disc = std::max(tr * tr - 4.0 * det, 0.0);
    const double root = std::sqrt(disc);
    out.k1 = 0.5 * (tr + root);
    out.k2 = 0.5 * (tr - root);
    out.gaussian = det;
    out.mean = 0.5 * tr;
    out.umbilic =
        std::abs(out.k1 - out.k2) <= 1e-8 * std::max(std::abs(out.k1), 1.0);

    auto metric_normalize = [&](Vec2 v) {
        const double n2 =
            I.E * v.x() * v.x() + 2.0 * I.F * v.x() * v.y() + I.G * v.y() * v.y();
        return n2 > 0.0 ? Vec2(v / std::sqrt(n2)) : v;
    };

    if (out.umbilic) {
        out.dir1 = metric_normalize(Vec2(1.0, 0.0));
        out.dir2 = metric_normalize(Vec2(0.0, 1.0));
        return out;
    }
    auto eigenvector = [&](double k) {
        const Vec2 c1(out.S(0, 1), k - out.S(0, 0));
        const Vec2 c2(k - out.S(1, 1), out.S(1, 0));
        return c1.norm() >= c2.norm() ? c1 : c2;
    };
    out.dir1 = metric_normalize(eigenvector(out.k1));
    out.dir2 = metric_normalize(eigenvector(out.k2));
    return out;
}

Vec3 embed_direction(const Vec2& dir, const SurfaceJets& jets) {
    const Vec3 v = dir.x() * jets.Ks + dir.y() * jets.Kt;
    const double n = v.norm();
    if (!(n > 1e-14))
        throw RegularityError("direction embeds to a null tangent vector");
    return v / n;
}

}  // namespace canalkit
