#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qkd {

struct OptResult {
    double x = 0.0;
    double fx = -std::numeric_limits<double>::infinity();
};

/// Golden-section maximization on [lo, hi] to an absolute x tolerance.
/// f may return -inf for excluded points.
template <class F>
OptResult golden_max(F&& f, double lo, double hi, double xtol) {
    constexpr double kInvPhi = 0.61803398874989485;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    OptResult r;
    r.x = fc > fd ? c : d;
    r.fx = std::max(fc, fd);
    return r;
}

/// Uniform scan with n points (endpoints included), then golden-section
/// refinement inside the bracketing interval around the best sample.
template <class F>
OptResult scan_golden_max(F&& f, double lo, double hi, int n, double xtol) {
    if (n < 2 || hi < lo) throw std::invalid_argument("scan_golden_max: bad range");
    OptResult best;
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double fx = f(x);
        if (fx > best.fx) {
            best = {x, fx};
            best_i = i;
        }
    }
    if (!std::isfinite(best.fx)) return best;  // nothing evaluable in range
    const double step = (hi - lo) / (n - 1);
    const double a = std::max(lo, best.x - step);
    const double b = std::min(hi, best.x + step);
    (void)best_i;
    OptResult refined = golden_max(f, a, b, xtol);
    return refined.fx > best.fx ? refined : best;
}

template <class F>
OptResult scan_golden_min(F&& f, double lo, double hi, int n, double xtol) {
    auto neg = [&](double x) { return -f(x); };
    OptResult r = scan_golden_max(neg, lo, hi, n, xtol);
    r.fx = -r.fx;
    return r;
}

/// Bisection for the zero of a decreasing function with f(lo) > 0 > f(hi).
template <class F>
double bisect_zero(F&& f, double lo, double hi, double xtol) {
    double flo = f(lo), fhi = f(hi);
    if (flo < 0.0 || fhi > 0.0)
        throw std::domain_error("bisect_zero: root not bracketed");
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct NmResult {
    double x0 = 0.0, x1 = 0.0;
    double f = std::numeric_limits<double>::infinity();
};

/// Nelder-Mead minimization in two dimensions. Constraints are handled by
/// the objective returning +inf outside the feasible region.
template <class F>
NmResult nelder_mead_2d(F&& f, double x0, double x1, double step0, double step1,
                        double ftol, int max_iter) {
    struct Vertex {
        std::array<double, 2> x;
        double f;
    };
    std::array<Vertex, 3> s = {
        Vertex{{x0, x1}, f(x0, x1)},
        Vertex{{x0 + step0, x1}, f(x0 + step0, x1)},
        Vertex{{x0, x1 + step1}, f(x0, x1 + step1)},
    };
    auto order = [&] {
        std::sort(s.begin(), s.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        if (std::isfinite(s[2].f) && std::isfinite(s[0].f) &&
            s[2].f - s[0].f < ftol)
            break;
        const double cx = 0.5 * (s[0].x[0] + s[1].x[0]);
        const double cy = 0.5 * (s[0].x[1] + s[1].x[1]);
        auto eval = [&](double a) {
            const double px = cx + a * (cx - s[2].x[0]);
            const double py = cy + a * (cy - s[2].x[1]);
            return Vertex{{px, py}, f(px, py)};
        };
        Vertex refl = eval(1.0);
        if (refl.f < s[0].f) {
            Vertex exp = eval(2.0);
            s[2] = exp.f < refl.f ? exp : refl;
        } else if (refl.f < s[1].f) {
            s[2] = refl;
        } else {
            Vertex con = eval(refl.f < s[2].f ? 0.5 : -0.5);
            if (con.f < std::min(refl.f, s[2].f)) {
                s[2] = con;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x[0] = 0.5 * (s[i].x[0] + s[0].x[0]);
                    s[i].x[1] = 0.5 * (s[i].x[1] + s[0].x[1]);
                    s[i].f = f(s[i].x[0], s[i].x[1]);
                }
            }
        }
        order();
    }
    return {s[0].x[0], s[0].x[1], s[0].f};
}

}  // namespace qkd
