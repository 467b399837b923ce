#pragma once

#include "canalkit/forms.hpp"
#include "canalkit/numerics.hpp"
#include "canalkit/surface.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace canalkit {

/// Line-of-curvature residual ghat*tau + h*kappa*sin(theta). The surface's
/// own sign branch enters through ghat, which keeps the factorization
/// F = ghat * residual exact on both branches; on the plus branch this is
/// literally g*tau + h*kappa*sin(theta).
double loc_residual(const CanalSurface& canal, double s, double theta);

/// Grid verdicts for the co-vanishing of F and f and for the obstruction to
/// theta-parameter lines of curvature.
struct LocReport {
    std::vector<double> s_nodes;
    std::vector<double> theta_nodes;

    // row-major over (s, theta), closed-form values
    std::vector<double> F;
    std::vector<double> f;
    std::vector<double> residual;
    std::vector<unsigned char> regular;

    double max_abs_F = 0.0;
    double max_abs_f = 0.0;
    double max_abs_residual = 0.0;
    double median_abs_F = 0.0;
    double median_abs_f = 0.0;
    double median_abs_residual = 0.0;

    int singular_count = 0;
    double tol = 0.0;

    /// no regular node carries exactly one of |F|, |f| below the scaled
    /// threshold
    bool theorem3_ok = false;
    /// every s-row either has frozen residual identically zero (tube over a
    /// planar spine) or attains a residual above threshold somewhere in theta
    bool corollary2_ok = false;

    std::vector<std::pair<int, int>> violations;  // (i_s, i_theta)

    int index(int i_s, int i_theta) const {
        return i_s * static_cast<int>(theta_nodes.size()) + i_theta;
    }
};

/// Sweeps an n_s x n_theta grid. Thresholds are tol times the grid median of
/// the respective |quantity| over regular nodes, so they track the surface's
/// scale. Throws RegularityError if every node is singular.
LocReport verify_theorem3(const CanalSurface& canal, int n_s, int n_theta,
                          double tol = 1e-6);

struct ThetaObstruction {
    double max_residual = 0.0;
    double theta_at_max = 0.0;
    /// tau and h*kappa both vanish at s0 (tube over a planar spine): the
    /// residual is identically zero and the obstruction says nothing
    bool vacuous = false;
};

/// Max |residual| over a dense theta sweep at frozen s0. Positive whenever
/// tau(s0) != 0 or h(s0)*kappa(s0) != 0, which rules out theta-parameter
/// curves as lines of curvature there.
ThetaObstruction theta_curve_obstruction(const CanalSurface& canal, double s0,
                                         int n_theta = 512);

/// Right side of d(theta)/ds = -tau - sigma * r'/sqrt(1-r'^2) * kappa *
/// sin(theta). Equal to -residual/ghat; zeros are exactly the
/// line-of-curvature angles of the surface's branch. Throws RegularityError
/// as |r'| -> 1.
double vessiot_rhs(const CanalSurface& canal, double s, double theta);

/// Integrates the angle ODE from (s0, theta0) to s_end (either direction)
/// with the adaptive integrator; state component 0 is theta.
OdePath vessiot_integrate(const CanalSurface& canal, double s0, double theta0,
                          double s_end, const OdeOptions& opts = {});

enum class TraceTermination { domain_exit, singular_point, umbilic, step_limit };
const char* to_string(TraceTermination t);

struct CurvatureLineTrace {
    std::vector<double> s;
    std::vector<double> theta;  // unwrapped, so the polyline stays smooth
    std::vector<Vec3> points;
    std::vector<double> k_n;  // principal curvature of the followed family
    int family = 1;
    TraceTermination termination = TraceTermination::step_limit;
};

/// Integrates the unit principal-direction field of the chosen family
/// (1 = larger curvature) through (s, theta) parameter space with fixed-step
/// RK4. Orientation memory keeps the eigenvector sign consistent between
/// steps; dir_hint, when given, orients the first step. Throws
/// InvalidParameter when the start point is singular or umbilic.
CurvatureLineTrace trace_curvature_line(const ParametricSurface& surf,
                                        double s0, double theta0, int family,
                                        int max_steps = 2000,
                                        double step = 0.01,
                                        const Vec2* dir_hint = nullptr);

struct LocCurveCheck {
    bool is_loc = false;
    /// max over samples of |S(T-hat) x T-hat| / max(|k1|, |k2|): the
    /// off-eigenvector part of S(T) measured against the operator's scale,
    /// which stays meaningful when the followed family has k_n = 0
    double max_residual = 0.0;
    int flagged = 0;  // singular/umbilic/boundary samples excluded
    int samples = 0;
};

/// Samples the parameter polyline, embeds tangents, and checks that S(T)
/// stays collinear with T at every usable sample.
LocCurveCheck is_line_of_curvature(const ParametricSurface& surf,
                                   const std::vector<double>& s_nodes,
                                   const std::vector<double>& theta_nodes,
                                   double tol = 1e-4);

LocCurveCheck is_line_of_curvature(const ParametricSurface& surf,
                                   const std::function<Vec2(double)>& curve,
                                   int n_samples, double tol = 1e-4);

}  // namespace canalkit
