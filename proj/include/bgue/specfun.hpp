#pragma once

#include <cmath>
#include <vector>

#include "bgue/errors.hpp"
#include "bgue/quadrature.hpp"

namespace bgue {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline const double kSqrtPi = std::sqrt(kPi);

/// log of the Hermite norm 2^n n! sqrt(pi).
inline double log_hermite_norm(int n) {
    return n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(kPi);
}

/// Physicists' Hermite polynomial by upward recurrence.  Overflows for large
/// n.|x|; kernel-facing code goes through hermite_weighted instead.
inline double hermite(int n, double x) {
    require(n >= 0, "hermite: n must be >= 0");
    if (n == 0) return 1.0;
    double hm = 1.0, h = 2.0 * x;
    for (int p = 1; p < n; ++p) {
        double hn = 2.0 * x * h - 2.0 * p * hm;
        hm = h;
        h = hn;
    }
    return h;
}

/// psi_n(x) = e^{-x^2/2} H_n(x) / sqrt(2^n n! sqrt(pi)); orthonormal on the
/// real line.  The normalized recurrence keeps every intermediate bounded.
inline double hermite_weighted(int n, double x) {
    require(n >= 0, "hermite_weighted: n must be >= 0");
    double p0 = std::exp(-0.5 * x * x) / std::pow(kPi, 0.25);
    if (n == 0) return p0;
    double p1 = x * std::sqrt(2.0) * p0;
    for (int k = 1; k < n; ++k) {
        double p2 = x * std::sqrt(2.0 / (k + 1)) * p1 - std::sqrt(k / (k + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// psi_0..psi_n at a single point.
inline std::vector<double> hermite_weighted_upto(int n, double x) {
    std::vector<double> out(n + 1);
    out[0] = std::exp(-0.5 * x * x) / std::pow(kPi, 0.25);
    if (n >= 1) out[1] = x * std::sqrt(2.0) * out[0];
    for (int k = 1; k < n; ++k)
        out[k + 1] = x * std::sqrt(2.0 / (k + 1)) * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
    return out;
}

/// Dawson integral D(x) = e^{-x^2} int_0^x e^{t^2} dt.
/// Series has strictly positive terms in this arrangement, so no cancellation.
inline double dawson(double x) {
    double ax = std::abs(x);
    if (ax <= 6.0) {
        // e^{-x^2} * sum x^{2k+1}/(k! (2k+1))
        double term = ax, sum = ax;
        for (int k = 1; k < 400; ++k) {
            term *= ax * ax / k;
            double add = term / (2 * k + 1);
            sum += add;
            if (add < 1e-18 * sum) break;
        }
        double v = std::exp(-ax * ax) * sum;
        return x < 0 ? -v : v;
    }
    // asymptotic: 1/(2x) sum (2k-1)!!/(2x^2)^k
    double inv2x2 = 1.0 / (2.0 * ax * ax);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= (2 * k - 1) * inv2x2;
        if (term > 1.0) break;
        sum += term;
        if (term < 1e-17) break;
    }
    double v = sum / (2.0 * ax);
    return x < 0 ? -v : v;
}

/// erfi(x) = 2 D(x) e^{x^2} / sqrt(pi); exposed for cross-checks only.
inline double erfi(double x) { return 2.0 * dawson(x) * std::exp(x * x) / kSqrtPi; }

namespace detail {

/// Principal-value seed h_p(x) = PV int e^{-u^2} H_p(u) / (x - u) du for
/// p = 0, 1 by symmetric-interval subtraction of the singularity:
/// h_p(x) = int_0^inf [f(x-t) - f(x+t)] / t dt with f = e^{-u^2} H_p.
inline double hilbert_seed(int p, double x) {
    auto f = [&](double u) { return std::exp(-u * u) * hermite(p, u); };
    auto integrand = [&](double t) {
        if (t < 1e-12) {
            // limit -2 f'(x)
            double hp = (p == 0) ? 0.0 : 2.0 * p * hermite(p - 1, x);
            return -2.0 * std::exp(-x * x) * (hp - 2.0 * x * hermite(p, x));
        }
        return (f(x - t) - f(x + t)) / t;
    };
    double T = std::abs(x) + 9.0;
    return integrate_adaptive_checked(integrand, 0.0, T, 1e-13, "hilbert seed quadrature");
}

}  // namespace detail

/// Hilbert-transformed Hermite h_p(x) = PV int e^{-u^2} H_p(u)/(x-u) du.
/// Seeds h_0, h_1 come from principal-value quadrature; higher p follow the
/// Hermite three-term recurrence, which h_p satisfies for p >= 1.
inline double hilbert_hermite(int p, double x) {
    require(p >= 0, "hilbert_hermite: p must be >= 0");
    double h0 = detail::hilbert_seed(0, x);
    if (p == 0) return h0;
    double h1 = 2.0 * x * h0 - 2.0 * kSqrtPi;
    if (p == 1) return h1;
    double hm = h0, h = h1;
    for (int k = 1; k < p; ++k) {
        double hn = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hn;
    }
    return h;
}

struct AiryValue {
    double x = 0.0;
    double ai = 0.0;
    double ai_prime = 0.0;
};

struct AiryBoth {
    double ai, ai_prime, bi, bi_prime;
};

namespace detail {

// Maclaurin solution pair of w'' = x w:
//   f = 1 + x^3/(2*3) + ..., g = x + x^4/(3*4) + ...
inline void airy_series_fg(double x, double& f, double& fp, double& g, double& gp) {
    double x3 = x * x * x;
    f = 1.0;
    fp = 0.0;  // f' accumulates x^2-led terms
    double tf = 1.0;
    for (int k = 1; k < 80; ++k) {
        tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        f += tf;
        if (std::abs(tf) < 1e-18 * std::abs(f) && k > 3) break;
    }
    double tfp = 1.0;
    if (x != 0.0) {
        // f' = sum_{k>=1} x^{3k-1} * [prod] * 3k/(...) ; build directly
        tfp = x * x / 2.0;
        fp = tfp;
        for (int k = 2; k < 80; ++k) {
            tfp *= x3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0));
            fp += tfp;
            if (std::abs(tfp) < 1e-18 * std::abs(fp) && k > 3) break;
        }
    }
    g = x;
    double tg = x;
    for (int k = 1; k < 80; ++k) {
        tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        g += tg;
        if (std::abs(tg) < 1e-18 * std::abs(g) && k > 3) break;
    }
    gp = 1.0;
    double tgp = 1.0;
    for (int k = 1; k < 80; ++k) {
        tgp *= x3 / ((3.0 * k - 2.0) * (3.0 * k));
        gp += tgp;
        if (std::abs(tgp) < 1e-18 * std::abs(gp) && k > 3) break;
    }
}

inline AiryBoth airy_series(double x) {
    static const double c1 = 0.35502805388781723926006318600418;   // Ai(0)
    static const double c2 = 0.25881940379280679840518356018920;   // -Ai'(0)
    double f, fp, g, gp;
    airy_series_fg(x, f, fp, g, gp);
    AiryBoth r;
    r.ai = c1 * f - c2 * g;
    r.ai_prime = c1 * fp - c2 * gp;
    const double s3 = 1.7320508075688772935274463415058724;
    r.bi = s3 * (c1 * f + c2 * g);
    r.bi_prime = s3 * (c1 * fp + c2 * gp);
    return r;
}

// u_k / v_k coefficients of the large-|x| expansions.
inline const std::vector<double>& airy_u_coeffs() {
    static const std::vector<double> u = [] {
        std::vector<double> v{1.0};
        for (int k = 0; k < 40; ++k)
            v.push_back(v.back() * (6.0 * k + 5.0) * (6.0 * k + 1.0) / (72.0 * (k + 1.0)));
        return v;
    }();
    return u;
}

inline AiryBoth airy_asym_pos(double x) {
    const auto& u = airy_u_coeffs();
    double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
    double sa = 0.0, sap = 0.0, sb = 0.0, sbp = 0.0;
    double last = 1e308;
    for (std::size_t k = 0; k < u.size(); ++k) {
        double t = u[k] / std::pow(zeta, static_cast<double>(k));
        if (std::abs(t) > last) break;  // asymptotic series: stop at smallest term
        last = std::abs(t);
        double vk = (k == 0) ? 1.0 : -u[k] * (6.0 * k + 1.0) / (6.0 * k - 1.0);
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        sa += sgn * t;
        sap += sgn * vk / std::pow(zeta, static_cast<double>(k));
        sb += t;
        sbp += vk / std::pow(zeta, static_cast<double>(k));
        if (std::abs(t) < 1e-18) break;
    }
    AiryBoth r;
    double x14 = std::pow(x, 0.25);
    double em = std::exp(-zeta), ep = std::exp(zeta);
    r.ai = em / (2.0 * kSqrtPi * x14) * sa;
    r.ai_prime = -x14 * em / (2.0 * kSqrtPi) * sap;
    r.bi = ep / (kSqrtPi * x14) * sb;
    r.bi_prime = x14 * ep / kSqrtPi * sbp;
    return r;
}

inline AiryBoth airy_asym_neg(double xneg) {
    const auto& u = airy_u_coeffs();
    double z = -xneg;
    double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
    double ce = 0.0, co = 0.0, de = 0.0, dn = 0.0;
    double last = 1e308;
    for (std::size_t k = 0; 2 * k + 1 < u.size(); ++k) {
        double t0 = u[2 * k] / std::pow(zeta, 2.0 * k);
        if (t0 > last) break;
        last = t0;
        double t1 = u[2 * k + 1] / std::pow(zeta, 2.0 * k + 1.0);
        double v0 = (k == 0) ? 1.0 : -u[2 * k] * (12.0 * k + 1.0) / (12.0 * k - 1.0);
        double v1 = -u[2 * k + 1] * (6.0 * (2 * k + 1) + 1.0) / (6.0 * (2 * k + 1) - 1.0);
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        ce += sgn * t0;
        co += sgn * t1;
        de += sgn * v0 / std::pow(zeta, 2.0 * k);
        dn += sgn * v1 / std::pow(zeta, 2.0 * k + 1.0);
        if (t0 < 1e-18) break;
    }
    double ang = zeta - kPi / 4.0;
    double cz = std::cos(ang), sz = std::sin(ang);
    double z14 = std::pow(z, 0.25);
    AiryBoth r;
    r.ai = (cz * ce + sz * co) / (kSqrtPi * z14);
    r.ai_prime = z14 / kSqrtPi * (sz * de - cz * dn);
    r.bi = (-sz * ce + cz * co) / (kSqrtPi * z14);
    r.bi_prime = z14 / kSqrtPi * (cz * de + sz * dn);
    return r;
}

/// Taylor-series march of w'' = t w from (x0, w, wp) to x1.  Used downhill
/// for Ai (decaying direction is stable) and uphill for Bi.
inline void airy_ode_march(double x0, double x1, double& w, double& wp) {
    const int terms = 26;
    double step = (x1 > x0) ? 0.4 : -0.4;
    double x = x0;
    double c[terms + 2];
    while (std::abs(x1 - x) > 1e-14) {
        double h = (std::abs(x1 - x) < std::abs(step)) ? (x1 - x) : step;
        c[0] = w;
        c[1] = wp;
        c[2] = 0.5 * x * c[0];
        for (int m = 1; m <= terms - 2; ++m)
            c[m + 2] = (x * c[m] + c[m - 1]) / ((m + 1.0) * (m + 2.0));
        double s = 0.0, sp = 0.0;
        for (int m = terms; m >= 1; --m) {
            s = s * h + c[m];
            sp = sp * h + m * c[m];
        }
        s = s * h + c[0];
        w = s;
        wp = sp;
        x += h;
    }
}

}  // namespace detail

/// Ai and Ai' to ~1e-10 absolute on [-20, 20] and ~1e-8 relative beyond.
/// Series on [-7, 4.5]; stable ODE march bridging to the asymptotic zones.
inline AiryValue airy(double x) {
    require(std::abs(x) <= 200.0, "airy: |x| <= 200 supported");
    AiryValue out;
    out.x = x;
    if (x >= -7.0 && x <= 4.5) {
        auto r = detail::airy_series(x);
        out.ai = r.ai;
        out.ai_prime = r.ai_prime;
    } else if (x > 4.5) {
        if (x >= 9.5) {
            auto r = detail::airy_asym_pos(x);
            out.ai = r.ai;
            out.ai_prime = r.ai_prime;
        } else {
            auto r = detail::airy_asym_pos(9.5);
            double w = r.ai, wp = r.ai_prime;
            detail::airy_ode_march(9.5, x, w, wp);
            out.ai = w;
            out.ai_prime = wp;
        }
    } else {  // x < -7
        auto r = detail::airy_asym_neg(x);
        out.ai = r.ai;
        out.ai_prime = r.ai_prime;
    }
    return out;
}

/// Bi and Bi'; used internally for the Wronskian validation.
inline AiryBoth airy_both(double x) {
    require(std::abs(x) <= 200.0, "airy: |x| <= 200 supported");
    if (x >= -7.0 && x <= 4.5) return detail::airy_series(x);
    if (x >= 9.5) return detail::airy_asym_pos(x);
    if (x > 4.5) {
        auto a = airy(x);
        auto seed = detail::airy_series(4.5);
        double w = seed.bi, wp = seed.bi_prime;
        detail::airy_ode_march(4.5, x, w, wp);  // Bi grows: uphill march is stable
        return AiryBoth{a.ai, a.ai_prime, w, wp};
    }
    return detail::airy_asym_neg(x);
}

/// Edge-scaled weighted Hermite psi_n evaluated at
/// x = sqrt(2n) - u / (sqrt(2) n^{1/6}); compares against
/// 2^{1/4} n^{-1/12} Ai(-u) in the uniform edge asymptotic.
inline double plancherel_rotach(int n, double u) {
    require(n >= 1, "plancherel_rotach: n must be >= 1");
    double x = std::sqrt(2.0 * n) - u / (std::sqrt(2.0) * std::pow(n, 1.0 / 6.0));
    return hermite_weighted(n, x);
}

}  // namespace bgue
