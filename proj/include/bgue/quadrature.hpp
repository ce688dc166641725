#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "bgue/errors.hpp"

namespace bgue {

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
/// the Legendre recurrence.  Accurate to machine precision for m <= 128.
struct GaussLegendre {
    std::vector<double> x, w;

    explicit GaussLegendre(int m) : x(m), w(m) {
        const double pi = 3.14159265358979323846264338327950288;
        for (int i = 0; i < (m + 1) / 2; ++i) {
            double t = std::cos(pi * (i + 0.75) / (m + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= m; ++j) {
                    double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                pp = m * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / pp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            x[i] = -t;
            x[m - 1 - i] = t;
            w[i] = w[m - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
        }
    }
};

inline const GaussLegendre& gl16() {
    static const GaussLegendre g(16);
    return g;
}
inline const GaussLegendre& gl24() {
    static const GaussLegendre g(24);
    return g;
}

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
double integrate_panels(F&& f, double a, double b, int panels, const GaussLegendre& g = gl16()) {
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        double half = 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(mid + half * g.x[i]);
        total += half * acc;
    }
    return total;
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

/// Panel-doubling refinement until the relative change drops below rel_tol.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                                  int start_panels = 4, int max_doublings = 12,
                                  const GaussLegendre& g = gl16()) {
    AdaptiveResult r;
    int panels = start_panels;
    double prev = integrate_panels(f, a, b, panels, g);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        double cur = integrate_panels(f, a, b, panels, g);
        r.error = std::abs(cur - prev);
        r.value = cur;
        if (r.error <= rel_tol * (std::abs(cur) + 1e-300)) {
            r.converged = true;
            return r;
        }
        prev = cur;
    }
    return r;
}

template <class F>
double integrate_adaptive_checked(F&& f, double a, double b, double rel_tol = 1e-12,
                                  const char* what = "quadrature did not converge") {
    auto r = integrate_adaptive(f, a, b, rel_tol);
    if (!r.converged) throw numerical_failure(what);
    return r.value;
}

}  // namespace bgue
