#pragma once

#include "canalkit/geom.hpp"
#include "canalkit/spine.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace canalkit {

// ---------------------------------------------------------------------------
// Radius functions
// ---------------------------------------------------------------------------

enum class RadiusForm {
    constant,
    linear,
    salkowski_closed,
    quadrature_table,
    user_sampled,
    custom,
};

std::string to_string(RadiusForm form);

/// Scalar radius r(s) with first and second derivatives. Immutable;
/// bounded-domain forms (tables, samples) report their domain, closed forms
/// evaluate anywhere.
class RadiusFunction {
  public:
    static RadiusFunction constant(double r);
    /// r(s) = slope * s + offset
    static RadiusFunction linear(double slope, double offset);
    /// r(s) = sqrt(cos^2(theta) s^2 + sin^2(theta) tan^2(phi)) / cos^2(theta) + c
    /// with phi in (0, pi/2) and cos(theta) != 0.
    static RadiusFunction salkowski_closed(double phi, double theta, double c);
    /// r(s) = r_anchor + integral of r' from anchor_s; r'' analytic when
    /// given, Richardson differences of r' otherwise.
    static RadiusFunction from_derivative(std::function<double(double)> rp,
                                          std::function<double(double)> rpp,
                                          Interval domain, double anchor_s,
                                          double r_anchor);
    /// Natural cubic spline through (s_i, r_i).
    static RadiusFunction from_samples(const std::vector<double>& s,
                                       const std::vector<double>& r);
    static RadiusFunction from_functions(std::function<double(double)> r,
                                         std::function<double(double)> rp,
                                         std::function<double(double)> rpp);

    RadiusForm form() const;
    double value(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;
    /// Set for quadrature_table and user_sampled forms, empty otherwise.
    std::optional<Interval> domain() const;

    struct Backend;

  private:
    explicit RadiusFunction(std::shared_ptr<const Backend> impl);
    std::shared_ptr<const Backend> impl_;
};

// ---------------------------------------------------------------------------
// Profiles for generalized tubes
// ---------------------------------------------------------------------------

/// Periodic profile u(theta) > 0 with derivative, validated at construction:
/// |u(0) - u(2 pi)| <= 1e-12 and u > 0 on a 512-sample sweep.
class Profile {
  public:
    static Profile constant(double u);
    /// u(theta) = base + amp * cos(theta)
    static Profile cosine(double base, double amp);
    static Profile from_functions(std::function<double(double)> u,
                                  std::function<double(double)> up);

    double value(double theta) const;
    double deriv(double theta) const;

  private:
    Profile(std::function<double(double)> u, std::function<double(double)> up);
    std::shared_ptr<const std::pair<std::function<double(double)>,
                                    std::function<double(double)>>>
        fns_;
};

// ---------------------------------------------------------------------------
// Surfaces
// ---------------------------------------------------------------------------

/// Minimal surface-evaluation interface shared by canal surfaces and
/// generalized tubes; the numeric differential-geometry oracles and the
/// mesher see surfaces only through this.
class ParametricSurface {
  public:
    virtual ~ParametricSurface() = default;
    virtual Vec3 point(double s, double theta) const = 0;
    virtual Interval s_domain() const = 0;
};

/// Which sign the offset term carries in the canal parametrization
/// K = C - h T -/+ g (cos(theta) N + sin(theta) B).
enum class SignBranch { minus, plus };

std::string to_string(SignBranch b);

/// Per-s scalar bundle of a canal surface. ghat is the signed offset
/// coefficient (sigma * g with sigma = -1 on the minus branch, +1 on plus),
/// so every downstream formula is branch-uniform.
struct CanalScalars {
    double r, rp, rpp;
    double h, hp;       // h = r r',  h' = r'^2 + r r''
    double g, gp;       // g = r sqrt(1 - r'^2) > 0
    double ghat, ghatp; // sigma * g, sigma * g'
    double kappa, tau;
};

/// Pointwise regularity probe. The surface is singular where the residual
/// kappa * ghat * cos(theta) + h' - 1 vanishes; at such points the
/// covanishing quantity ghat' - h kappa cos(theta) must vanish too.
struct RegularityProbe {
    bool regular = true;
    double residual = 0.0;
    double covanishing = 0.0;
};

class CanalSurface final : public ParametricSurface {
  public:
    CanalSurface(SpineCurve spine, RadiusFunction radius,
                 SignBranch branch = SignBranch::minus);

    const SpineCurve& spine() const { return spine_; }
    const RadiusFunction& radius() const { return radius_; }
    SignBranch branch() const { return branch_; }
    double sigma() const { return branch_ == SignBranch::plus ? 1.0 : -1.0; }
    bool is_tube() const { return tube_; }

    Interval s_domain() const override { return spine_.domain(); }
    Vec3 point(double s, double theta) const override;

    CanalScalars scalars(double s) const;
    RegularityProbe is_regular_at(double s, double theta,
                                  double tol = 1e-9) const;

  private:
    SpineCurve spine_;
    RadiusFunction radius_;
    SignBranch branch_;
    bool tube_ = false;
};

class GeneralizedTube final : public ParametricSurface {
  public:
    GeneralizedTube(SpineCurve spine, Profile profile);

    const SpineCurve& spine() const { return spine_; }
    const Profile& profile() const { return profile_; }

    Interval s_domain() const override { return spine_.domain(); }
    Vec3 point(double s, double theta) const override;

  private:
    SpineCurve spine_;
    Profile profile_;
};

}  // namespace canalkit
