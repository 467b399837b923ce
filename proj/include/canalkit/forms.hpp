#pragma once

#include "canalkit/geom.hpp"
#include "canalkit/surface.hpp"

#include <utility>

namespace canalkit {

struct FirstForm {
    double E = 0.0;
    double F = 0.0;
    double G = 0.0;
};

struct SecondForm {
    double e = 0.0;
    double f = 0.0;
    double g_II = 0.0;  // named to avoid clashing with the canal scalar g
};

/// Shape operator in the (d/ds, d/dtheta) coordinate basis.
/// k1 >= k2; principal directions are coordinate pairs normalized to unit
/// length in the first fundamental form. At umbilics the directions
/// degenerate to the parameter directions and `umbilic` is set.
struct ShapeOperatorAt {
    Mat2 S = Mat2::Zero();
    double k1 = 0.0;
    double k2 = 0.0;
    Vec2 dir1 = Vec2(1.0, 0.0);
    Vec2 dir2 = Vec2(0.0, 1.0);
    bool umbilic = false;
    double gaussian = 0.0;  // k1 * k2
    double mean = 0.0;      // (k1 + k2) / 2
};

/// Surface partials at a point, by Richardson-extrapolated central
/// differences of the point map only (independent of any closed form).
struct SurfaceJets {
    Vec3 p, Ks, Kt, Kss, Kst, Ktt;
};

// --- canal closed forms (branch-signed ghat throughout) --------------------

FirstForm first_form_closed(const CanalSurface& canal, double s, double theta);

/// Unit normal oriented along K_s x K_theta. Throws RegularityError at
/// singular points.
Vec3 unit_normal_closed(const CanalSurface& canal, double s, double theta);

/// Mixed second-form coefficient f = N . K_{s theta} in the K_s x K_theta
/// orientation. Throws RegularityError at singular points.
double second_form_f_closed(const CanalSurface& canal, double s, double theta);

/// ||K_s x K_theta||^2 = g^2 ((kappa ghat cos + h' - 1)^2 + (ghat' - h kappa cos)^2);
/// equals E G - F^2.
double cross_norm2_closed(const CanalSurface& canal, double s, double theta);

// --- generalized tube closed forms ------------------------------------------

struct GtClosedFF {
    double F = 0.0;
    double f = 0.0;
};

/// F = u^2 tau and the mixed coefficient f for a generalized tube. f is in
/// the X_theta x X_s orientation; with constant u it reduces to -u tau (the
/// sign covaries with the normal, so co-vanishing statements are unaffected).
GtClosedFF gt_F_f_closed(const GeneralizedTube& gt, double s, double theta);

/// Unit normal matching the orientation of gt_F_f_closed.
Vec3 gt_unit_normal_closed(const GeneralizedTube& gt, double s, double theta);

// --- numeric oracle ----------------------------------------------------------

/// Richardson-extrapolated central differences. The default step keeps the
/// mixed-derivative roundoff near 1e-7, well under the truncation crossover
/// for the smooth surfaces handled here.
SurfaceJets numeric_jets(const ParametricSurface& surf, double s, double theta,
                         double step = 1e-3);

/// Fundamental forms from finite-difference jets alone. When align_normal is
/// given, the numeric normal (and so e, f, g_II) is sign-flipped to have a
/// positive dot product with it.
std::pair<FirstForm, SecondForm> fundamental_forms_numeric(
    const ParametricSurface& surf, double s, double theta, double step = 1e-3,
    const Vec3* align_normal = nullptr);

/// Same reduction applied to jets the caller already has.
std::pair<FirstForm, SecondForm> forms_from_jets(
    const SurfaceJets& jets, const Vec3* align_normal = nullptr);

// --- shape operator -----------------------------------------------------------

ShapeOperatorAt shape_operator(const FirstForm& I, const SecondForm& II,
                               double tol = 1e-12);

/// Pushes a coordinate direction into R^3 using the surface jets.
Vec3 embed_direction(const Vec2& dir, const SurfaceJets& jets);

}  // namespace canalkit
