#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bgue/errors.hpp"
#include "bgue/quadrature.hpp"
#include "bgue/specfun.hpp"

namespace bgue {

/// Signed magnitude in log space; sign 0 encodes an exact zero.
struct LogSigned {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogSigned from(double v) {
        if (v == 0.0) return {};
        return {std::log(std::abs(v)), v > 0 ? 1 : -1};
    }
    static LogSigned zero() { return {}; }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    bool is_zero() const { return sign == 0; }

    friend LogSigned operator*(LogSigned a, LogSigned b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.log_abs + b.log_abs, a.sign * b.sign};
    }
    friend LogSigned operator/(LogSigned a, LogSigned b) {
        if (a.sign == 0) return {};
        return {a.log_abs - b.log_abs, a.sign * b.sign};
    }
    friend LogSigned operator+(LogSigned a, LogSigned b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        double m = std::max(a.log_abs, b.log_abs);
        double s = a.sign * std::exp(a.log_abs - m) + b.sign * std::exp(b.log_abs - m);
        if (s == 0.0) return {};
        return {m + std::log(std::abs(s)), s > 0 ? 1 : -1};
    }
    friend LogSigned operator-(LogSigned a, LogSigned b) {
        b.sign = -b.sign;
        return a + b;
    }
    LogSigned scaled(double f) const {
        if (sign == 0 || f == 0.0) return {};
        return {log_abs + std::log(std::abs(f)), f > 0 ? sign : -sign};
    }
};

/// Scaled expansion coefficients of the border weight in the Hermite basis:
/// tilde_beta[p] = N_p beta_p and tilde_alpha[p] = N_p alpha_p, where
///   N_p beta_p  = int e^{-x^2/s2 + 2 mu x/s2} H_p(x) dx
///   N_p alpha_p = int e^{-x^2/s2 + 2 mu x/s2} H_p(x) (int_0^x z) dx,
/// z(u) = e^{(-1 + 1/s2) u^2 - 2 mu u / s2}.  Values are held in log space;
/// at mu = 0 the parity zeros are exact by construction.
class CoeffTable {
public:
    CoeffTable(double mu, double sigma, int p_max, std::vector<LogSigned> ta,
               std::vector<LogSigned> tb)
        : mu_(mu), sigma_(sigma), p_max_(p_max), ta_(std::move(ta)), tb_(std::move(tb)) {}

    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double sigma2() const { return sigma_ * sigma_; }
    int p_max() const { return p_max_; }

    LogSigned alpha_tilde_ls(int p) const { return ta_.at(p); }
    LogSigned beta_tilde_ls(int p) const { return tb_.at(p); }
    double alpha_tilde(int p) const { return ta_.at(p).value(); }
    double beta_tilde(int p) const { return tb_.at(p).value(); }
    double norm(int p) const { return std::exp(log_hermite_norm(p)); }

    /// Largest relative residual of the three-term recurrence over stored p.
    double max_recurrence_residual() const {
        double worst = 0.0;
        double s2 = sigma_ * sigma_;
        for (int p = 2; p <= p_max_; ++p) {
            for (const auto* t : {&tb_, &ta_}) {
                LogSigned lhs = (*t)[p];
                LogSigned rhs = (*t)[p - 1].scaled(2.0 * mu_) +
                                (*t)[p - 2].scaled(2.0 * (p - 1) * (s2 - 1.0));
                double scale = std::max({std::exp(lhs.log_abs), std::exp(rhs.log_abs), 1e-300});
                worst = std::max(worst, std::abs((lhs - rhs).value() / scale));
            }
        }
        return worst;
    }

private:
    double mu_, sigma_;
    int p_max_;
    std::vector<LogSigned> ta_, tb_;
};

namespace detail {

inline double coeff_seed_beta(int p, double mu, double s2) {
    double sig = std::sqrt(s2);
    auto f = [&](double x) {
        return std::exp(-x * x / s2 + 2.0 * mu * x / s2) * hermite(p, x);
    };
    double lo = mu - 12.0 * sig, hi = mu + 12.0 * sig;
    auto r = integrate_adaptive(f, lo, hi, 1e-12, 8, 12);
    if (!r.converged) throw numerical_failure("coefficient seed quadrature (beta)");
    return r.value;
}

inline double coeff_seed_alpha(int p, double mu, double s2) {
    double sig = std::sqrt(s2);
    auto inner = [&](double x) {
        if (x == 0.0) return 0.0;
        auto z = [&](double u) {
            return std::exp((-1.0 + 1.0 / s2) * u * u - 2.0 * mu * u / s2);
        };
        auto r = integrate_adaptive(z, 0.0, x, 1e-12, 4, 12);
        if (!r.converged) throw numerical_failure("coefficient seed quadrature (alpha inner)");
        return r.value;
    };
    auto f = [&](double x) {
        return std::exp(-x * x / s2 + 2.0 * mu * x / s2) * hermite(p, x) * inner(x);
    };
    double lo = mu - 12.0 * sig, hi = mu + 12.0 * sig;
    auto r = integrate_adaptive(f, lo, hi, 1e-11, 8, 12);
    if (!r.converged) throw numerical_failure("coefficient seed quadrature (alpha)");
    return r.value;
}

}  // namespace detail

/// Builds the coefficient table: p = 0, 1 seeded by quadrature, higher p by
/// the recurrences
///   tilde[p] = 2 mu tilde[p-1] + 2 (p-1)(s2 - 1) tilde[p-2]
/// (the alpha source term s2 sqrt(pi) enters at p = 1 through the seed).
inline CoeffTable build_coeffs(double mu, double sigma, int p_max) {
    require(sigma > 0.0, "build_coeffs: sigma > 0 required");
    require(p_max >= 2, "build_coeffs: p_max >= 2 required");
    if (sigma == 1.0)
        throw unsupported_parameter(
            "build_coeffs: sigma = 1 exactly is handled by the sigma1 kernel path");
    const double s2 = sigma * sigma;
    const bool centered = (mu == 0.0);

    std::vector<LogSigned> ta(p_max + 1), tb(p_max + 1);
    tb[0] = LogSigned::from(detail::coeff_seed_beta(0, mu, s2));
    tb[1] = centered ? LogSigned::zero() : LogSigned::from(detail::coeff_seed_beta(1, mu, s2));
    ta[0] = centered ? LogSigned::zero() : LogSigned::from(detail::coeff_seed_alpha(0, mu, s2));
    ta[1] = LogSigned::from(detail::coeff_seed_alpha(1, mu, s2));
    for (int p = 2; p <= p_max; ++p) {
        double carry = 2.0 * (p - 1) * (s2 - 1.0);
        if (centered) {
            // parity: alpha even / beta odd vanish identically
            tb[p] = (p % 2 == 0) ? tb[p - 2].scaled(carry) : LogSigned::zero();
            ta[p] = (p % 2 == 1) ? ta[p - 2].scaled(carry) : LogSigned::zero();
        } else {
            tb[p] = tb[p - 1].scaled(2.0 * mu) + tb[p - 2].scaled(carry);
            ta[p] = ta[p - 1].scaled(2.0 * mu) + ta[p - 2].scaled(carry);
        }
    }
    return CoeffTable(mu, sigma, p_max, std::move(ta), std::move(tb));
}

/// Printed closed form of N_p beta_p (real-argument regime s2 < 1 only).
/// Known to differ from the table by a p-independent global factor; callers
/// cross-check ratios, never absolute values.
inline double closed_form_beta(double mu, double sigma, int p) {
    const double s2 = sigma * sigma;
    if (s2 >= 1.0) throw unsupported_parameter("closed_form_beta: requires sigma^2 < 1");
    double w = mu / std::sqrt(1.0 - s2);
    return std::exp(mu * mu / s2) * std::pow(1.0 - s2, 0.5 * p) * hermite(p, w);
}

/// Printed closed form of N_p alpha_p with the printed c1, c2 (s2 < 1 only);
/// n0a0 is the directly integrated N_0 alpha_0 the printed c1 references.
inline double closed_form_alpha(double mu, double sigma, int p) {
    const double s2 = sigma * sigma;
    if (s2 >= 1.0) throw unsupported_parameter("closed_form_alpha: requires sigma^2 < 1");
    double w = mu / std::sqrt(1.0 - s2);
    double h0 = hilbert_hermite(0, w), h1 = hilbert_hermite(1, w);
    double denom = std::sqrt(1.0 - s2) * h1 - 2.0 * mu * h0;
    double n0a0 = detail::coeff_seed_alpha(0, mu, s2);
    double c2 = s2 / denom;
    double c1 = n0a0 - h0 * s2 / denom;
    double fac = std::pow(1.0 - s2, 0.5 * p);
    return c1 * fac * hermite(p, w) + c2 * fac * hilbert_hermite(p, w);
}

/// Limit data for the scaled coefficient ratios: roots of
/// x^2 - c x - (s2 - 1) = 0.
struct GammaLimits {
    double c = 0.0;
    double sigma2 = 1.0;
    double x_plus = 0.0;
    double x_minus = 0.0;
};

inline GammaLimits make_gamma_limits(double c, double sigma2) {
    double disc = c * c - 4.0 * (1.0 - sigma2);
    if (disc <= 0.0)
        throw unsupported_parameter("gamma limits: degenerate or complex roots (c^2 <= 4(1-sigma^2))");
    double s = std::sqrt(disc);
    return {c, sigma2, 0.5 * (c + s), 0.5 * (c - s)};
}

/// Limiting gamma_p^{(1)} / gamma_p^{(2)}.
inline double gamma_p(const GammaLimits& g, int p, int which) {
    require(p >= 0 && (which == 1 || which == 2), "gamma_p: p >= 0, which in {1,2}");
    double xp = 1.0, xm = 1.0;
    for (int i = 0; i < p; ++i) {
        xp *= g.x_plus;
        xm *= g.x_minus;
    }
    if (which == 1) return (xp * g.x_minus - g.x_plus * xm) / (g.x_minus - g.x_plus);
    return (xp - xm) / (g.x_plus - g.x_minus);
}

/// Exact finite-N scaled ratios read from a coefficient table:
///   which 1: sqrt(N_{N-1}/N_{N-1+p}) (ta_N tb_{N-1+p} - tb_N ta_{N-1+p}) / Delta
///   which 2: sqrt(N_N  /N_{N-1+p}) (tb_{N-1} ta_{N-1+p} - ta_{N-1} tb_{N-1+p}) / Delta
/// with Delta = ta_N tb_{N-1} - ta_{N-1} tb_N.
inline double gamma_finite(const CoeffTable& t, int n, int p, int which) {
    require(n >= 1 && p >= 0 && (which == 1 || which == 2), "gamma_finite: bad arguments");
    require(t.p_max() >= n - 1 + p + 1, "gamma_finite: table too short");
    LogSigned taN = t.alpha_tilde_ls(n), tbN = t.beta_tilde_ls(n);
    LogSigned taNm = t.alpha_tilde_ls(n - 1), tbNm = t.beta_tilde_ls(n - 1);
    LogSigned tap = t.alpha_tilde_ls(n - 1 + p), tbp = t.beta_tilde_ls(n - 1 + p);
    LogSigned delta = taN * tbNm - taNm * tbN;
    LogSigned num = (which == 1) ? taN * tbp - tbN * tap : tbNm * tap - taNm * tbp;
    double base = (which == 1) ? log_hermite_norm(n - 1) : log_hermite_norm(n);
    double lg = 0.5 * (base - log_hermite_norm(n - 1 + p));
    LogSigned ratio = num / delta;
    if (ratio.is_zero()) return 0.0;
    return ratio.sign * std::exp(ratio.log_abs + lg);
}

/// Same finite-N ratios through the normalized forward recurrence
///   g_{k+1} = 2 mu / sqrt(2(N+k)) g_k + (s2-1) sqrt((N+k-1)/(N+k)) g_{k-1}
/// with initial data (1, 0) / (0, 1).  Algebraically identical to the table
/// ratios but free of large-magnitude cancellation; this is the kernel path.
inline double gamma_finite_recurrence(double mu, double sigma2, int n, int p, int which) {
    require(n >= 1 && p >= 0 && (which == 1 || which == 2), "gamma_finite_recurrence: bad arguments");
    double gm = (which == 1) ? 1.0 : 0.0;
    double g = (which == 1) ? 0.0 : 1.0;
    if (p == 0) return gm;
    for (int k = 1; k < p; ++k) {
        double idx = static_cast<double>(n) + k;
        double gn = 2.0 * mu / std::sqrt(2.0 * idx) * g +
                    (sigma2 - 1.0) * std::sqrt((idx - 1.0) / idx) * gm;
        gm = g;
        g = gn;
    }
    return g;
}

}  // namespace bgue
