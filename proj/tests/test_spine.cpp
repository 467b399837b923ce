#include "canalkit/spine.hpp"

#include <doctest.h>

#include <cmath>

using namespace canalkit;

TEST_SUITE_BEGIN("spine");

namespace {

// max Frenet-Serret residual over an interior grid, frame derivatives by
// central differences
double frenet_serret_residual(const SpineCurve& c, int grid = 60,
                              double h = 1e-5) {
    const Interval dom = c.domain();
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double s = dom.lo + (i + 0.5) / grid * dom.length();
        if (s - h < dom.lo || s + h > dom.hi) continue;
        const FrenetFrame f = c.frenet(s);
        const FrenetFrame fp = c.frenet(s + h);
        const FrenetFrame fm = c.frenet(s - h);
        const Vec3 dT = (fp.T - fm.T) / (2.0 * h);
        const Vec3 dN = (fp.N - fm.N) / (2.0 * h);
        const Vec3 dB = (fp.B - fm.B) / (2.0 * h);
        worst = std::max(worst, (dT - f.kappa * f.N).norm());
        worst = std::max(worst,
                         (dN + f.kappa * f.T - f.tau * f.B).norm());
        worst = std::max(worst, (dB + f.tau * f.N).norm());
    }
    return worst;
}

double max_speed_error(const SpineCurve& c, int grid = 60) {
    const Interval dom = c.domain();
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double s = dom.lo + (i + 0.5) / grid * dom.length();
        worst = std::max(worst, std::abs(c.jet(s).d1.norm() - 1.0));
    }
    return worst;
}

}  // namespace

TEST_CASE("circular helix matches closed-form curvature and torsion") {
    SpineCurve h = SpineCurve::circular_helix(3.0, 4.0);
    for (double s : {0.0, 1.3, 7.7, 20.0}) {
        CHECK(h.jet(s).d1.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(h.curvature(s) == doctest::Approx(0.12).epsilon(1e-14));
        CHECK(h.torsion(s) == doctest::Approx(0.16).epsilon(1e-14));
    }
    // d = 5, one full turn
    CHECK(h.domain().hi == doctest::Approx(10.0 * kPi));
    const FrenetFrame f = h.frenet(2.0);
    CHECK(f.T.dot(f.N) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((f.B - f.T.cross(f.N)).norm() == doctest::Approx(0.0));
    CHECK(frenet_serret_residual(h) < 1e-6);
}

TEST_CASE("circle is planar with curvature 1/R") {
    SpineCurve c = SpineCurve::circle(2.0);
    CHECK(c.domain().hi == doctest::Approx(4.0 * kPi));
    for (double s : {0.0, 2.0, 11.0}) {
        CHECK(c.curvature(s) == doctest::Approx(0.5));
        CHECK(c.torsion(s) == doctest::Approx(0.0));
    }
    CHECK(frenet_serret_residual(c) < 1e-6);
    CHECK(c.classify().kind == SpineClass::planar);
}

TEST_CASE("line has no Frenet frame but a stable adapted frame") {
    SpineCurve l = SpineCurve::line(Vec3(1.0, 2.0, 3.0), Vec3(0.0, 0.0, 2.0));
    CHECK(l.curvature(5.0) == 0.0);
    CHECK_FALSE(l.has_frenet(5.0));
    CHECK_THROWS_AS((void)l.frenet(5.0), RegularityError);
    const FrenetFrame f = l.frame(5.0);
    CHECK(f.T.dot(f.N) == doctest::Approx(0.0));
    CHECK((f.B - f.T.cross(f.N)).norm() == doctest::Approx(0.0));
    CHECK((l.point(2.0) - Vec3(1.0, 2.0, 5.0)).norm() ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("salkowski curve has unit curvature and arcsin torsion") {
    SpineCurve sk = SpineCurve::salkowski(1.0);
    CHECK(sk.domain().lo == doctest::Approx(-0.9));
    CHECK(sk.domain().hi == doctest::Approx(0.9));
    CHECK(sk.curvature(0.5) == doctest::Approx(1.0));
    CHECK(sk.torsion(0.5) ==
          doctest::Approx(std::tan(std::asin(0.5))).epsilon(1e-14));
    CHECK(sk.torsion(0.5) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(max_speed_error(sk) < 1e-10);
    CHECK(frenet_serret_residual(sk) < 1e-6);

    CHECK_NOTHROW(SpineCurve::salkowski(1.0, {-0.9, 0.9}));
    CHECK_THROWS_AS(SpineCurve::salkowski(1.0, {-1.1, 1.1}), InvalidParameter);
    CHECK_THROWS_AS(SpineCurve::salkowski(0.0), InvalidParameter);
}

TEST_CASE("general helix-like curve keeps tau/kappa constant") {
    SpineCurve g = SpineCurve::general_helix_like(kPi / 4.0, 1.0, 0.3, 2.0);
    for (double s : {0.3, 1.9, 5.0}) {
        const double k = g.curvature(s);
        const double t = g.torsion(s);
        CHECK(k == doctest::Approx(1.0 + 0.3 * std::sin(2.0 * s)).epsilon(1e-14));
        CHECK(t / k == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(max_speed_error(g) < 1e-10);
    CHECK(frenet_serret_residual(g) < 1e-6);
    CHECK_THROWS_AS(SpineCurve::general_helix_like(kPi / 4.0, 0.2, 0.3, 1.0),
                    InvalidParameter);
}

TEST_CASE("parameter validation rejects degenerate inputs") {
    CHECK_THROWS_AS(SpineCurve::circle(-1.0), InvalidParameter);
    CHECK_THROWS_AS(SpineCurve::circle(0.0), InvalidParameter);
    CHECK_THROWS_AS(SpineCurve::circular_helix(0.0, 4.0), InvalidParameter);
    CHECK_THROWS_AS(SpineCurve::line(Vec3::Zero(), Vec3::Zero()),
                    InvalidParameter);
    CHECK_THROWS_AS((void)SpineCurve::circle(1.0).point(100.0),
                    InvalidParameter);
}

TEST_CASE("arc-length reparametrization of a raw helix") {
    // (3 cos t, 3 sin t, 4 t): speed 5, so s = 5 t
    RawCurve raw;
    raw.t_domain = {0.0, kTwoPi};
    raw.c = [](double t) {
        return Vec3(3.0 * std::cos(t), 3.0 * std::sin(t), 4.0 * t);
    };
    raw.c1 = [](double t) {
        return Vec3(-3.0 * std::sin(t), 3.0 * std::cos(t), 4.0);
    };
    raw.c2 = [](double t) {
        return Vec3(-3.0 * std::cos(t), -3.0 * std::sin(t), 0.0);
    };
    raw.c3 = [](double t) {
        return Vec3(3.0 * std::sin(t), -3.0 * std::cos(t), 0.0);
    };
    SpineCurve c = SpineCurve::from_raw(raw);
    CHECK(c.domain().hi == doctest::Approx(10.0 * kPi).epsilon(1e-12));
    CHECK(max_speed_error(c) < 1e-8);
    for (double s : {1.0, 8.0, 25.0}) {
        CHECK((c.point(s) - Vec3(3.0 * std::cos(s / 5.0),
                                 3.0 * std::sin(s / 5.0), 4.0 * s / 5.0))
                  .norm() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(c.curvature(s) == doctest::Approx(0.12).epsilon(1e-10));
        CHECK(c.torsion(s) == doctest::Approx(0.16).epsilon(1e-10));
    }
}

TEST_CASE("reparametrizing a unit-speed curve is the identity") {
    RawCurve raw;
    raw.t_domain = {0.0, 4.0};
    raw.c = [](double t) { return Vec3(std::cos(t), std::sin(t), 0.0); };
    raw.c1 = [](double t) { return Vec3(-std::sin(t), std::cos(t), 0.0); };
    raw.c2 = [](double t) { return Vec3(-std::cos(t), -std::sin(t), 0.0); };
    raw.c3 = [](double t) { return Vec3(std::sin(t), -std::cos(t), 0.0); };
    SpineCurve c = SpineCurve::from_raw(raw);
    for (double s : {0.5, 1.5, 3.5})
        CHECK((c.point(s) - raw.c(s)).norm() ==
              doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("raw curve with a cusp is rejected") {
    RawCurve raw;
    raw.t_domain = {-1.0, 1.0};
    raw.c = [](double t) { return Vec3(t * t, t * t * t, 0.0); };
    raw.c1 = [](double t) { return Vec3(2.0 * t, 3.0 * t * t, 0.0); };
    raw.c2 = [](double t) { return Vec3(2.0, 6.0 * t, 0.0); };
    raw.c3 = [](double) { return Vec3(0.0, 6.0, 0.0); };
    CHECK_THROWS_AS(SpineCurve::from_raw(raw), RegularityError);
}

TEST_CASE("sampled curve recovers helix invariants") {
    std::vector<double> ts;
    std::vector<Vec3> ps;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double t = kTwoPi * i / n;
        ts.push_back(t);
        ps.push_back(Vec3(3.0 * std::cos(t), 3.0 * std::sin(t), 4.0 * t));
    }
    SpineCurve c = SpineCurve::from_samples(ts, ps);
    CHECK(c.kind() == SpineKind::sampled);
    CHECK(c.domain().hi == doctest::Approx(10.0 * kPi).epsilon(1e-6));
    CHECK(max_speed_error(c) < 1e-8);
    for (double s : {2.0, 14.0, 29.0}) {
        CHECK(c.curvature(s) == doctest::Approx(0.12).epsilon(1e-5));
        CHECK(c.torsion(s) == doctest::Approx(0.16).epsilon(1e-4));
    }
    CHECK_FALSE(c.knot_arclengths().empty());
    // truncation of the sample spline dominates here, not the frame math
    CHECK(frenet_serret_residual(c, 40) < 5e-3);
}

TEST_CASE("classification distinguishes the four regimes") {
    CHECK(SpineCurve::circle(2.0).classify().kind == SpineClass::planar);

    const SpineClassification helix =
        SpineCurve::circular_helix(3.0, 4.0).classify();
    CHECK(helix.kind == SpineClass::circular_helix);
    CHECK(helix.phi == doctest::Approx(std::atan(4.0 / 3.0)).epsilon(1e-12));

    const SpineClassification gen =
        SpineCurve::general_helix_like(0.6, 1.0, 0.3, 2.0).classify();
    CHECK(gen.kind == SpineClass::general_helix);
    CHECK(gen.phi == doctest::Approx(0.6).epsilon(1e-9));

    CHECK(SpineCurve::salkowski(1.0).classify().kind == SpineClass::generic);

    CHECK(SpineCurve::line(Vec3::Zero(), Vec3::UnitZ()).classify().kind ==
          SpineClass::planar);
}

TEST_CASE("frenet frames are orthonormal and right-handed everywhere") {
    for (const SpineCurve& c :
         {SpineCurve::circular_helix(3.0, 4.0), SpineCurve::salkowski(0.5),
          SpineCurve::general_helix_like(0.4, 1.0, 0.2, 3.0)}) {
        const Interval dom = c.domain();
        for (int i = 0; i < 25; ++i) {
            const double s = dom.lo + (i + 0.5) / 25.0 * dom.length();
            const FrenetFrame f = c.frenet(s);
            CHECK(std::abs(f.T.norm() - 1.0) < 1e-10);
            CHECK(std::abs(f.N.norm() - 1.0) < 1e-10);
            CHECK(std::abs(f.B.norm() - 1.0) < 1e-10);
            CHECK(std::abs(f.T.dot(f.N)) < 1e-10);
            CHECK(std::abs(f.T.dot(f.B)) < 1e-10);
            CHECK(std::abs(f.N.dot(f.B)) < 1e-10);
            CHECK((f.B - f.T.cross(f.N)).norm() == doctest::Approx(0.0));
        }
    }
}

TEST_SUITE_END();
