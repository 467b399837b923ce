#pragma once

#include "canalkit/spine.hpp"
#include "canalkit/surface.hpp"

#include <optional>
#include <vector>

namespace canalkit {

/// Radius synthesis output. valid_thetas carries the plus-branch angle
/// labels at which the s-parameter curves are lines of curvature; the minus
/// branch sees the same curves at theta + pi.
struct SynthesisResult {
    RadiusFunction radius;
    double theta_star = 0.0;
    /// slope of linear radii, 0 for constants, NaN for table forms
    double slope = 0.0;
    std::vector<double> valid_thetas;
    /// planar tube: the residual vanishes for every theta
    bool all_thetas = false;
    /// where r > 0 and |r'| < 1 both hold (node resolution 512)
    Interval domain{0.0, 0.0};
    double c = 0.0;
    /// max |g tau + h kappa sin theta| over domain x valid_thetas; the
    /// spine-free corollary forms evaluate it with unit curvature
    double residual_max = 0.0;
    /// false when sin theta* = 0 drives |r'| to the regularity boundary 1
    bool regular = true;
};

/// Builds r by adaptive quadrature of r'(s) = tau / sqrt(tau^2 +
/// kappa^2 sin^2 theta*). Signed tau keeps the unsquared condition
/// tau sqrt(1-r'^2) = -kappa r' sin theta satisfiable on one theta set even
/// across torsion sign changes, which forces sin(theta_valid) =
/// -|sin theta*|. When c is omitted it is chosen so min r = 0.05.
SynthesisResult synth_radius_quadrature(const SpineCurve& spine,
                                        double theta_star,
                                        std::optional<double> c = std::nullopt);

/// Linear radius for a general helix with slope angle phi: slope
/// a = 1 / sqrt(1 + cot^2 phi sin^2 theta*). Reported over the default
/// general-helix domain [0, 2 pi].
SynthesisResult synth_radius_general_helix(double phi, double theta_star,
                                           std::optional<double> c =
                                               std::nullopt);

/// Linear radius for the circular helix (a, b): slope b / sqrt(b^2 +
/// a^2 sin^2 theta*). Reported over the helix default domain [0, 2 pi d].
SynthesisResult synth_radius_circular_helix(double a, double b,
                                            double theta_star,
                                            std::optional<double> c =
                                                std::nullopt);

/// Closed radius for a Salkowski spine (m = cot phi): r = sqrt(cos^2 theta*
/// s^2 + sin^2 theta* tan^2 phi) / cos^2 theta* + c. theta* = +-pi/2 is
/// rejected with a pointer at the quadrature path.
SynthesisResult synth_radius_salkowski(double phi, double theta_star,
                                       std::optional<double> c = std::nullopt);

/// Grid report on the torsion bound -kappa < tau < kappa and its relation
/// to synthesized lines of curvature. Pure report: implication_holds states
/// whether (loc && increasing) => bound held on THIS instance; the helix
/// a=3, b=4 case falsifies it while the auxiliary |r'| < 1/sqrt(2)
/// hypothesis (under which the underlying inequality step is valid) fails.
struct TorsionBoundReport {
    bool loc_holds = false;
    bool r_increasing = false;
    bool torsion_bound_holds = false;
    bool slope_below_inv_sqrt2 = false;
    bool implication_holds = false;
    double loc_residual = 0.0;        // best common-theta residual achieved
    double max_abs_slope = 0.0;       // max |r'|
    double max_tau_minus_kappa = 0.0; // max (|tau| - kappa)
};

TorsionBoundReport check_torsion_bound(const SpineCurve& spine,
                                       const RadiusFunction& radius,
                                       int n_grid = 256, double tol = 1e-8);

}  // namespace canalkit
