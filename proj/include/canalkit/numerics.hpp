#pragma once

#include "canalkit/errors.hpp"
#include "canalkit/geom.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace canalkit {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussRule& order15();
    static GaussRule compute(int n);
};

/// One-panel 15-point Gauss-Legendre integral of f over [a, b].
/// The result is an analytic function of both endpoints.
double gl15(const std::function<double(double)>& f, double a, double b);

/// Adaptive panel quadrature of f over [a, b] to absolute tolerance abs_tol.
/// Panels are bisected until the whole-panel vs. two-half-panel GL15 values
/// agree within the panel's share of the tolerance.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12);

/// Smooth cumulative integral F(x) = integral of f from `origin` to x.
///
/// An adaptive panel table stores prefix sums; evaluation adds a fresh
/// within-panel GL15 integral, so F is smooth in x (panel-boundary jumps are
/// at the panel-refinement tolerance, well below second-difference noise).
/// For strictly positive f the inverse is available via Newton.
class CumulativeIntegral {
  public:
    CumulativeIntegral(std::function<double(double)> f, Interval domain,
                       double origin, double panel_tol = 1e-14,
                       double max_panel_length = 0.25);

    Interval domain() const { return domain_; }
    double origin() const { return origin_; }
    double value(double x) const;
    /// Total integral over the construction domain.
    double total() const;

    /// Solves value(x) = target for x, assuming f > 0 (strictly increasing F).
    /// Newton with analytic derivative f, bracketed by the panel table.
    double inverse(double target) const;

  private:
    std::function<double(double)> f_;
    Interval domain_;
    double origin_ = 0.0;
    std::vector<double> nodes_;     // panel boundaries, ascending
    std::vector<double> prefix_;    // F(nodes_[i]) relative to domain_.lo
    double origin_offset_ = 0.0;    // F(origin) relative to domain_.lo

    std::size_t panel_of(double x) const;
    double value_from_lo(double x) const;
};

// ---------------------------------------------------------------------------
// Natural cubic spline
// ---------------------------------------------------------------------------

/// Natural cubic spline through (x_i, y_i) with strictly increasing knots.
/// Evaluation outside the knot range extends the boundary segment, so
/// derivatives stay defined for probes straddling the ends.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;
    /// Third derivative; piecewise constant, discontinuous at knots.
    double deriv3(double x) const;

    Interval domain() const { return {x_.front(), x_.back()}; }
    const std::vector<double>& knots() const { return x_; }

  private:
    std::vector<double> x_, y_, m_;  // m: second derivatives at knots
    std::size_t segment(double x) const;
};

// ---------------------------------------------------------------------------
// Hermite interpolation
// ---------------------------------------------------------------------------

/// Cubic Hermite on [0, dx] from endpoint values and first derivatives.
double cubic_hermite(double f0, double d0, double f1, double d1, double dx,
                     double x);

/// Quintic Hermite on [0, dx] from endpoint values, first and second
/// derivatives. Matches all six conditions; error O(dx^6).
double quintic_hermite(double f0, double d0, double dd0, double f1, double d1,
                       double dd1, double dx, double x);

// ---------------------------------------------------------------------------
// ODE integration: Dormand-Prince 5(4), adaptive, dense output
// ---------------------------------------------------------------------------

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dydt)>;

/// Dense ODE solution: accepted steps plus cubic-Hermite interpolation
/// between them (value and RHS stored at every accepted node).
class OdePath {
  public:
    const std::vector<double>& times() const { return t_; }
    const std::vector<OdeState>& states() const { return y_; }
    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }

    OdeState eval(double t) const;
    double eval_component(double t, std::size_t i) const;

  private:
    friend class OdeIntegrator;
    std::vector<double> t_;
    std::vector<OdeState> y_;
    std::vector<OdeState> f_;
};

struct OdeOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 -> heuristic
    double max_step = 0.0;      // 0 -> |t1 - t0|
    int max_steps = 200000;
};

class OdeIntegrator {
  public:
    explicit OdeIntegrator(OdeOptions opts = {}) : opts_(opts) {}

    /// Integrates y' = f(t, y) from t0 to t1 (either direction).
    /// Throws RegularityError when the step size underflows or the step
    /// budget is exhausted.
    OdePath integrate(const OdeRhs& f, double t0, const OdeState& y0,
                      double t1) const;

  private:
    OdeOptions opts_;
};

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Central first derivative with one Richardson level (steps h and h/2).
double fd_derivative(const std::function<double(double)>& f, double x,
                     double h = 1e-5);

// ---------------------------------------------------------------------------
// Deterministic RNG (engine-backed, distribution-free draws)
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);  // inclusive bounds

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Parallel grid evaluation
// ---------------------------------------------------------------------------

/// Runs fn(begin, end) over [0, n) split into contiguous chunks on up to
/// `threads` workers (0 -> hardware concurrency). Results must be written to
/// disjoint, index-owned slots so the merge is deterministic by construction.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

/// Resolves a requested thread count: explicit > 0 wins, then the
/// CANALKIT_THREADS environment variable, then hardware concurrency.
int resolve_threads(int requested);

}  // namespace canalkit
