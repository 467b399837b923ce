#include "canalkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace canalkit {

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

GaussRule GaussRule::compute(int n) {
    if (n < 2) throw InvalidParameter("GaussRule: order must be >= 2");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // one polishing pass after convergence
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

const GaussRule& GaussRule::order15() {
    static const GaussRule rule = GaussRule::compute(15);
    return rule;
}

double gl15(const std::function<double(double)>& f, double a, double b) {
    const GaussRule& rule = GaussRule::order15();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    return h * sum;
}

namespace {

double adaptive_panel(const std::function<double(double)>& f, double a,
                      double b, double whole, double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double left = gl15(f, a, c);
    const double right = gl15(f, c, b);
    const double err = std::abs(left + right - whole);
    if (err < tol || depth > 40) return left + right;
    return adaptive_panel(f, a, c, left, 0.5 * tol, depth + 1) +
           adaptive_panel(f, c, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double abs_tol) {
    if (a == b) return 0.0;
    return adaptive_panel(f, a, b, gl15(f, a, b), abs_tol, 0);
}

// ---------------------------------------------------------------------------
// CumulativeIntegral
// ---------------------------------------------------------------------------

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       Interval domain, double origin,
                                       double panel_tol,
                                       double max_panel_length)
    : f_(std::move(f)), domain_(domain), origin_(origin) {
    if (!(domain_.hi > domain_.lo))
        throw InvalidParameter("CumulativeIntegral: empty domain");
    if (!domain_.contains(origin_))
        throw InvalidParameter("CumulativeIntegral: origin outside domain");

    // Build the panel table by splitting until each panel's GL15 value agrees
    // with its bisection and the panel is short enough for fast lookup.
    struct Pending {
        double a, b, whole;
    };
    std::vector<Pending> stack;
    std::vector<std::pair<double, double>> accepted;  // (a, integral over [a,b])
    stack.push_back({domain_.lo, domain_.hi, gl15(f_, domain_.lo, domain_.hi)});
    const double per_len_tol = panel_tol / domain_.length();
    while (!stack.empty()) {
        Pending p = stack.back();
        stack.pop_back();
        const double c = 0.5 * (p.a + p.b);
        const double left = gl15(f_, p.a, c);
        const double right = gl15(f_, c, p.b);
        const double err = std::abs(left + right - p.whole);
        const double len = p.b - p.a;
        if ((err <= per_len_tol * len && len <= max_panel_length) ||
            len < 1e-12 * domain_.length()) {
            accepted.push_back({p.a, left + right});
        } else {
            stack.push_back({c, p.b, right});
            stack.push_back({p.a, c, left});
        }
    }
    std::sort(accepted.begin(), accepted.end());
    // accepted[i] covers [a_i, a_{i+1}), the last panel ending at domain_.hi
    nodes_.reserve(accepted.size() + 1);
    prefix_.reserve(accepted.size() + 1);
    nodes_.push_back(domain_.lo);
    prefix_.push_back(0.0);
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        const double right_edge =
            (i + 1 < accepted.size()) ? accepted[i + 1].first : domain_.hi;
        nodes_.push_back(right_edge);
        prefix_.push_back(prefix_.back() + accepted[i].second);
    }
    origin_offset_ = value_from_lo(origin_);
}

std::size_t CumulativeIntegral::panel_of(double x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - nodes_.begin());
    if (idx == 0) return 0;
    if (idx >= nodes_.size()) return nodes_.size() - 2;
    return idx - 1;
}

double CumulativeIntegral::value_from_lo(double x) const {
    const std::size_t i = panel_of(x);
    return prefix_[i] + gl15(f_, nodes_[i], x);
}

double CumulativeIntegral::value(double x) const {
    return value_from_lo(x) - origin_offset_;
}

double CumulativeIntegral::total() const {
    return prefix_.back() - prefix_.front();
}

double CumulativeIntegral::inverse(double target) const {
    const double t_abs = target + origin_offset_;
    if (t_abs < prefix_.front() - 1e-9 || t_abs > prefix_.back() + 1e-9)
        throw RegularityError("CumulativeIntegral: inverse target out of range");
    // bracket by panel prefix sums
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), t_abs);
    std::size_t idx = static_cast<std::size_t>(it - prefix_.begin());
    if (idx == 0) idx = 1;
    if (idx >= prefix_.size()) idx = prefix_.size() - 1;
    double lo = nodes_[idx - 1], hi = nodes_[idx];
    // linear initial guess within the panel
    double span = prefix_[idx] - prefix_[idx - 1];
    double x = span > 0.0 ? lo + (hi - lo) * ((t_abs - prefix_[idx - 1]) / span)
                          : 0.5 * (lo + hi);
    for (int it2 = 0; it2 < 60; ++it2) {
        const double g = value_from_lo(x) - t_abs;
        if (g > 0.0)
            hi = x;
        else
            lo = x;
        const double d = f_(x);
        double step = (d > 1e-300) ? g / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) < 1e-15 * (1.0 + std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

// ---------------------------------------------------------------------------
// CubicSpline
// ---------------------------------------------------------------------------

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw InvalidParameter("CubicSpline: need >= 3 matched samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw InvalidParameter("CubicSpline: knots must strictly increase");

    // Tridiagonal solve for interior second derivatives, natural ends.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        sub[i] = hl;
        diag[i] = 2.0 * (hl + hr);
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    // forward sweep over i = 1..n-2 with m_0 = m_{n-1} = 0
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double hr_prev = x_[i] - x_[i - 1];
        const double w = hr_prev / diag[i - 1];
        diag[i] -= w * sub[i];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        const double hr = x_[i + 1] - x_[i];
        const double upper = (i + 2 < n) ? hr * m_[i + 1] : 0.0;
        m_[i] = (rhs[i] - upper) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicSpline::value(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h /
               6.0;
}

double CubicSpline::deriv(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h -
           (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
           (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
}

double CubicSpline::deriv2(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

double CubicSpline::deriv3(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    return (m_[i + 1] - m_[i]) / h;
}

// ---------------------------------------------------------------------------
// Hermite interpolation
// ---------------------------------------------------------------------------

double cubic_hermite(double f0, double d0, double f1, double d1, double dx,
                     double x) {
    const double t = x / dx;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * f0 + h10 * dx * d0 + h01 * f1 + h11 * dx * d1;
}

double quintic_hermite(double f0, double d0, double dd0, double f1, double d1,
                       double dd1, double dx, double x) {
    const double t = x / dx;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 0.5 * t3 - t4 + 0.5 * t5;
    return h0 * f0 + h1 * dx * d0 + h2 * dx * dx * dd0 + h3 * f1 +
           h4 * dx * d1 + h5 * dx * dx * dd1;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

OdeState OdePath::eval(double t) const {
    const bool forward = t_.back() >= t_.front();
    double lo = forward ? t_.front() : t_.back();
    double hi = forward ? t_.back() : t_.front();
    if (t < lo - 1e-9 * (1.0 + std::abs(lo)) ||
        t > hi + 1e-9 * (1.0 + std::abs(hi)))
        throw RegularityError("OdePath: evaluation outside integration range");
    t = std::min(std::max(t, lo), hi);

    std::size_t i = 0;
    if (forward) {
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        i = static_cast<std::size_t>(it - t_.begin());
        if (i == 0) i = 1;
        if (i >= t_.size()) i = t_.size() - 1;
        --i;
    } else {
        auto it = std::upper_bound(t_.begin(), t_.end(), t,
                                   [](double a, double b) { return a > b; });
        i = static_cast<std::size_t>(it - t_.begin());
        if (i == 0) i = 1;
        if (i >= t_.size()) i = t_.size() - 1;
        --i;
    }
    const double dt = t_[i + 1] - t_[i];
    const double x = t - t_[i];
    const std::size_t dim = y_[i].size();
    OdeState out(dim);
    if (std::abs(dt) < 1e-300) {
        out = y_[i];
        return out;
    }
    for (std::size_t k = 0; k < dim; ++k)
        out[k] = cubic_hermite(y_[i][k], f_[i][k], y_[i + 1][k], f_[i + 1][k],
                               dt, x);
    return out;
}

double OdePath::eval_component(double t, std::size_t comp) const {
    return eval(t)[comp];
}

OdePath OdeIntegrator::integrate(const OdeRhs& rhs, double t0,
                                 const OdeState& y0, double t1) const {
    // Butcher tableau
    static const double a21 = 1.0 / 5.0;
    static const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                        a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
    static const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                        b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                        b6 = 11.0 / 84.0;
    static const double e1 = 35.0 / 384.0 - 5179.0 / 57600.0,
                        e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                        e4 = 125.0 / 192.0 - 393.0 / 640.0,
                        e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                        e6 = 11.0 / 84.0 - 187.0 / 2100.0,
                        e7 = -1.0 / 40.0;
    static const double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                        c5 = 8.0 / 9.0;

    const std::size_t n = y0.size();
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) {
        OdePath path;
        OdeState f0(n);
        rhs(t0, y0, f0);
        path.t_ = {t0, t0};
        path.y_ = {y0, y0};
        path.f_ = {f0, f0};
        return path;
    }
    const double max_step = opts_.max_step > 0.0 ? opts_.max_step : span;

    OdeState y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n),
             ynew(n);
    double t = t0;
    rhs(t, y, k1);

    double h = opts_.initial_step;
    if (h <= 0.0) {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        h = (fnorm > 1e-12) ? 0.01 * (1.0 + ynorm) / fnorm : 0.01 * span;
        h = std::min(h, max_step);
    }
    h = std::min(h, span);

    OdePath path;
    path.t_.push_back(t);
    path.y_.push_back(y);
    path.f_.push_back(k1);

    int steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opts_.max_steps)
            throw RegularityError("OdeIntegrator: step budget exhausted");
        h = std::min(h, std::abs(t1 - t));
        if (h < 1e-14 * (1.0 + std::abs(t)))
            throw RegularityError("OdeIntegrator: step size underflow");
        const double hs = dir * h;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                   a54 * k4[i]);
        rhs(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                   a64 * k4[i] + a65 * k5[i]);
        rhs(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                   b5 * k5[i] + b6 * k6[i]);
        rhs(t + hs, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                    e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts_.abs_tol +
                              opts_.rel_tol *
                                  std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = ei / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            t += hs;
            y = ynew;
            k1 = k7;  // FSAL
            path.t_.push_back(t);
            path.y_.push_back(y);
            path.f_.push_back(k1);
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::min(5.0, std::max(0.2, fac));
        h = std::min(h * fac, max_step);
    }
    return path;
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

double fd_derivative(const std::function<double(double)>& f, double x,
                     double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// ---------------------------------------------------------------------------
// Rng: splitmix64-seeded xorshift-style generator; stable across platforms
// ---------------------------------------------------------------------------

std::uint64_t Rng::next() {
    // splitmix64 step: deterministic, well-distributed, trivially portable
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

int Rng::uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
}

// ---------------------------------------------------------------------------
// Threads
// ---------------------------------------------------------------------------

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CANALKIT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const int nt = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(1, resolve_threads(threads))), n);
    if (nt <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    const std::size_t chunk = (n + static_cast<std::size_t>(nt) - 1) /
                              static_cast<std::size_t>(nt);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
    for (int w = 0; w < nt; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi, w, &errors] {
            try {
                fn(lo, hi);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace canalkit
