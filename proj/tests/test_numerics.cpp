#include "canalkit/numerics.hpp"

#include <doctest.h>

#include <cmath>

using namespace canalkit;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("gauss rule integrates high-degree polynomials exactly") {
    // 15-point rule is exact through degree 29
    auto poly = [](double x) { return std::pow(x, 28.0); };
    const double got = gl15(poly, -1.0, 1.0);
    CHECK(got == doctest::Approx(2.0 / 29.0).epsilon(1e-13));

    auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    CHECK(gl15(cubic, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature handles oscillatory integrands") {
    auto f = [](double x) { return std::sin(20.0 * x); };
    const double exact = (1.0 - std::cos(20.0 * kPi)) / 20.0;
    CHECK(adaptive_quadrature(f, 0.0, kPi) == doctest::Approx(exact).epsilon(1e-11));

    auto g = [](double x) { return std::exp(-x * x); };
    // erf(2) * sqrt(pi) / 2
    CHECK(adaptive_quadrature(g, 0.0, 2.0) ==
          doctest::Approx(0.8820813907624215).epsilon(1e-12));
}

TEST_CASE("cumulative integral matches antiderivative and is smooth") {
    CumulativeIntegral F([](double x) { return std::cos(x); }, {0.0, 10.0},
                         0.0);
    for (double x : {0.1, 1.7, 3.3, 6.66, 9.99})
        CHECK(F.value(x) == doctest::Approx(std::sin(x)).epsilon(1e-12));
    CHECK(F.total() == doctest::Approx(std::sin(10.0)).epsilon(1e-12));

    // second differences stay small across panel joins (smoothness probe)
    const double h = 1e-4;
    for (double x = 0.11; x < 9.9; x += 0.37) {
        const double dd =
            (F.value(x + h) - 2.0 * F.value(x) + F.value(x - h)) / (h * h);
        CHECK(dd == doctest::Approx(-std::sin(x)).epsilon(1e-4));
    }
}

TEST_CASE("cumulative integral inverse solves F(x) = target") {
    CumulativeIntegral F([](double x) { return 1.0 + 0.5 * std::sin(x); },
                         {0.0, 20.0}, 0.0);
    for (double target : {0.3, 4.2, 11.0, F.total() - 1e-6}) {
        const double x = F.inverse(target);
        CHECK(F.value(x) == doctest::Approx(target).epsilon(1e-11));
    }
    CHECK_THROWS_AS((void)F.inverse(F.total() + 1.0), RegularityError);
}

TEST_CASE("cumulative integral origin offsets the antiderivative") {
    CumulativeIntegral F([](double x) { return 2.0 * x; }, {-3.0, 3.0}, 1.0);
    // F(x) = x^2 - 1 with origin at x = 1
    CHECK(F.value(1.0) == doctest::Approx(0.0));
    CHECK(F.value(2.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(F.value(-2.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cubic spline reproduces smooth functions and derivatives") {
    std::vector<double> xs, ys;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double x = 4.0 * i / n;
        xs.push_back(x);
        ys.push_back(std::sin(x));
    }
    CubicSpline sp(xs, ys);
    for (double x : {0.3, 1.1, 2.7, 3.9}) {
        CHECK(sp.value(x) == doctest::Approx(std::sin(x)).epsilon(1e-7));
        CHECK(sp.deriv(x) == doctest::Approx(std::cos(x)).epsilon(1e-5));
        CHECK(sp.deriv2(x) == doctest::Approx(-std::sin(x)).epsilon(1e-3));
    }
}

TEST_CASE("cubic spline rejects bad input") {
    CHECK_THROWS_AS(CubicSpline({0.0, 1.0}, {0.0, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(CubicSpline({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}),
                    InvalidParameter);
}

TEST_CASE("hermite interpolants match their endpoint data") {
    auto f = [](double x) { return std::sin(x); };
    auto d = [](double x) { return std::cos(x); };
    auto dd = [](double x) { return -std::sin(x); };
    const double a = 0.4, dx = 0.05;
    for (double x = 0.0; x <= dx; x += dx / 8.0) {
        const double q = quintic_hermite(f(a), d(a), dd(a), f(a + dx),
                                         d(a + dx), dd(a + dx), dx, x);
        CHECK(q == doctest::Approx(f(a + x)).epsilon(1e-10));
        const double c =
            cubic_hermite(f(a), d(a), f(a + dx), d(a + dx), dx, x);
        CHECK(c == doctest::Approx(f(a + x)).epsilon(1e-8));
    }
}

TEST_CASE("ode integrator solves known systems to tight tolerance") {
    OdeIntegrator integ;

    SUBCASE("exponential decay") {
        auto rhs = [](double, const OdeState& y, OdeState& dy) {
            dy[0] = -y[0];
        };
        OdePath path = integ.integrate(rhs, 0.0, {1.0}, 5.0);
        CHECK(path.states().back()[0] ==
              doctest::Approx(std::exp(-5.0)).epsilon(1e-8));
        CHECK(path.eval_component(2.5, 0) ==
              doctest::Approx(std::exp(-2.5)).epsilon(1e-7));
    }

    SUBCASE("harmonic oscillator, forward and backward") {
        auto rhs = [](double, const OdeState& y, OdeState& dy) {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        OdePath fwd = integ.integrate(rhs, 0.0, {1.0, 0.0}, 10.0);
        CHECK(fwd.states().back()[0] ==
              doctest::Approx(std::cos(10.0)).epsilon(1e-7));
        OdePath bwd = integ.integrate(rhs, 0.0, {1.0, 0.0}, -10.0);
        CHECK(bwd.states().back()[0] ==
              doctest::Approx(std::cos(10.0)).epsilon(1e-7));
        CHECK(bwd.eval_component(-3.0, 1) ==
              doctest::Approx(std::sin(3.0)).epsilon(1e-7));
    }

    SUBCASE("dense output outside range throws") {
        auto rhs = [](double, const OdeState&, OdeState& dy) { dy[0] = 1.0; };
        OdePath path = integ.integrate(rhs, 0.0, {0.0}, 1.0);
        CHECK_THROWS_AS((void)path.eval(2.0), RegularityError);
    }
}

TEST_CASE("fd derivative has Richardson-level accuracy") {
    auto f = [](double x) { return std::exp(x) * std::sin(3.0 * x); };
    auto fp = [](double x) {
        return std::exp(x) * (std::sin(3.0 * x) + 3.0 * std::cos(3.0 * x));
    };
    for (double x : {0.0, 0.7, 1.9})
        CHECK(fd_derivative(f, x) == doctest::Approx(fp(x)).epsilon(1e-9));
}

TEST_CASE("rng is deterministic and uniform-ish") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 16; ++i) {
        const double x = a.uniform01();
        CHECK(x == b.uniform01());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(a.uniform01() != c.uniform01());
    double sum = 0.0;
    Rng d(7);
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += d.uniform01();
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
    Rng e(9);
    for (int i = 0; i < 100; ++i) {
        const int v = e.uniform_int(-2, 5);
        CHECK(v >= -2);
        CHECK(v <= 5);
    }
}

TEST_CASE("parallel_for covers every index exactly once") {
    const std::size_t n = 1001;
    std::vector<int> hits(n, 0);
    parallel_for(n, 4, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) hits[i] += 1;
    });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
}

TEST_SUITE_END();
