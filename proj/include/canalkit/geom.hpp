#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace canalkit {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Closed interval [lo, hi] on the real line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }

    /// Interior test with a symmetric margin on both ends.
    bool contains_inner(double x, double margin) const {
        return x >= lo + margin && x <= hi - margin;
    }

    double lerp(double u) const { return lo + u * (hi - lo); }
};

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

inline double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace canalkit
