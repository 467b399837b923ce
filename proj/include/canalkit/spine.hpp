#pragma once

#include "canalkit/geom.hpp"
#include "canalkit/numerics.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace canalkit {

enum class SpineKind {
    circle,
    line,
    circular_helix,
    general_helix_like,
    salkowski,
    sampled,
};

std::string to_string(SpineKind kind);

/// Position and arc-length derivatives of a spine curve at one parameter.
struct Jet3 {
    Vec3 p;   // C(s)
    Vec3 d1;  // dC/ds (unit tangent for unit-speed curves)
    Vec3 d2;  // d2C/ds2 = kappa * N
    Vec3 d3;
};

struct FrenetFrame {
    Vec3 T;
    Vec3 N;
    Vec3 B;  // always T x N
    double kappa = 0.0;
    double tau = 0.0;
};

enum class SpineClass { planar, circular_helix, general_helix, generic };

std::string to_string(SpineClass c);

struct SpineClassification {
    SpineClass kind = SpineClass::generic;
    double phi = 0.0;  // arctan(tau/kappa) when the ratio is constant
    double max_abs_tau = 0.0;
    double kappa_variation = 0.0;  // max - min over the grid
    double tau_variation = 0.0;
    double ratio_variation = 0.0;
};

/// A raw (not necessarily unit-speed) curve with derivatives up to order 3.
struct RawCurve {
    std::function<Vec3(double)> c;
    std::function<Vec3(double)> c1;
    std::function<Vec3(double)> c2;
    std::function<Vec3(double)> c3;
    Interval t_domain;
};

/// Immutable spine curve, unit-speed over its arc-length domain.
///
/// Built-in kinds carry closed-form or intrinsically integrated geometry;
/// sampled and raw curves are reparametrized by arc length on construction.
/// All evaluation is const and safe to call from multiple threads.
class SpineCurve {
  public:
    static SpineCurve circle(double radius);
    static SpineCurve circle(double radius, Interval domain);
    static SpineCurve line(const Vec3& origin, const Vec3& direction);
    static SpineCurve line(const Vec3& origin, const Vec3& direction,
                           Interval domain);
    static SpineCurve circular_helix(double a, double b);
    static SpineCurve circular_helix(double a, double b, Interval domain);
    /// Non-constant curvature kappa(s) = kappa0 + kappa1 sin(omega s) with
    /// tau(s) = tan(phi) kappa(s), so tau/kappa stays constant.
    static SpineCurve general_helix_like(double phi, double kappa0,
                                         double kappa1, double omega);
    static SpineCurve general_helix_like(double phi, double kappa0,
                                         double kappa1, double omega,
                                         Interval domain);
    /// Unit curvature, tau(s) = tan(arcsin(m s)); needs |m s| < 1 on domain.
    static SpineCurve salkowski(double m);
    static SpineCurve salkowski(double m, Interval domain);
    /// Natural cubic spline through the samples, then arc-length
    /// reparametrized. t must strictly increase.
    static SpineCurve from_samples(const std::vector<double>& t,
                                   const std::vector<Vec3>& points);
    /// Arc-length reparametrization of an arbitrary regular curve.
    static SpineCurve from_raw(RawCurve raw);

    SpineKind kind() const;
    Interval domain() const;

    Vec3 point(double s) const;
    Jet3 jet(double s) const;

    double curvature(double s) const;
    double torsion(double s) const;
    /// d(kappa)/ds and d(tau)/ds; analytic for built-in kinds, Richardson
    /// differences otherwise.
    double curvature_derivative(double s) const;
    double torsion_derivative(double s) const;
    bool has_frenet(double s) const;

    /// Frenet frame; throws RegularityError when kappa(s) < 1e-9.
    FrenetFrame frenet(double s) const;
    /// Adapted frame: Frenet where defined, a fixed orthonormal frame along
    /// straight lines. Same return type, kappa/tau filled in either way.
    FrenetFrame frame(double s) const;

    SpineClassification classify(int grid = 256, double tol = 1e-6) const;

    /// Arc-length positions of construction knots (sampled kind only;
    /// empty otherwise). Lets callers keep probes away from spline joints.
    std::vector<double> knot_arclengths() const;

    struct Backend;

  private:
    explicit SpineCurve(std::shared_ptr<const Backend> impl);
    std::shared_ptr<const Backend> impl_;
};

}  // namespace canalkit
