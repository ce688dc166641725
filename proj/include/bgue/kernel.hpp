#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bgue/coefficients.hpp"
#include "bgue/errors.hpp"
#include "bgue/linalg.hpp"
#include "bgue/quadrature.hpp"
#include "bgue/specfun.hpp"

namespace bgue {

enum class KernelPath { general, sigma1, mu0, gue };

struct KernelTruncation {
    double eps_tail = 1e-12;  // stop once tail terms fall below this, relatively
    int p_cap_extra = 2000;   // hard cap = 20 n + p_cap_extra
};

/// Finite-N kernel configuration.  `n` is the core size: every path
/// describes the same (n+1)-eigenvalue ensemble and its kernel has trace n+1.
struct KernelSpec {
    int n = 1;
    double mu = 0.0;
    double sigma2 = 1.0;
    KernelPath path = KernelPath::general;
    KernelTruncation trunc{};

    void validate() const {
        require(n >= 1, "kernel: n >= 1 required");
        switch (path) {
            case KernelPath::general:
                if (sigma2 <= 0.0) throw invalid_parameter("kernel: sigma^2 > 0 required");
                if (sigma2 == 1.0 && mu != 0.0)
                    throw unsupported_parameter("kernel: sigma^2 = 1 uses the sigma1 path");
                if (sigma2 >= 2.0)
                    throw divergence_detected(
                        "kernel: correction series requires sigma^2 < 2 (general path)");
                break;
            case KernelPath::sigma1:
                if (sigma2 != 1.0) throw invalid_parameter("kernel: sigma1 path requires sigma = 1");
                break;
            case KernelPath::mu0:
                if (mu != 0.0) throw invalid_parameter("kernel: mu0 path requires mu = 0");
                if (sigma2 <= 0.0) throw invalid_parameter("kernel: sigma^2 > 0 required");
                if (sigma2 == 1.0)
                    throw unsupported_parameter("kernel: sigma^2 = 1 is the plain GUE case");
                if (sigma2 >= 2.0)
                    throw divergence_detected(
                        "kernel: correction series requires sigma^2 < 2 (mu0 path)");
                break;
            case KernelPath::gue:
                break;
        }
    }
};

/// K_n^GUE(x, y) = sum_{j<n} psi_j(x) psi_j(y).
inline double kernel_gue(int n, double x, double y) {
    require(n >= 1, "kernel_gue: n >= 1 required");
    double p0x = std::exp(-0.5 * x * x) / std::pow(kPi, 0.25);
    double p0y = std::exp(-0.5 * y * y) / std::pow(kPi, 0.25);
    double acc = p0x * p0y;
    if (n == 1) return acc;
    double p1x = x * std::sqrt(2.0) * p0x, p1y = y * std::sqrt(2.0) * p0y;
    acc += p1x * p1y;
    for (int k = 1; k + 1 < n; ++k) {
        double cx = std::sqrt(2.0 / (k + 1)), cm = std::sqrt(k / (k + 1.0));
        double p2x = x * cx * p1x - cm * p0x;
        double p2y = y * cx * p1y - cm * p0y;
        acc += p2x * p2y;
        p0x = p1x;
        p1x = p2x;
        p0y = p1y;
        p1y = p2y;
    }
    return acc;
}

namespace detail {

struct TailState {
    double sum1 = 0.0, sum2 = 0.0;
    int terms = 0;
};

/// Correction sums of the general-path kernel:
///   K = K_{n-1}^GUE + psi_{n-1}(x) sum_k G1_k psi_{n-1+k}(y)
///                   + psi_n(x)     sum_k G2_k psi_{n-1+k}(y),
/// where G1/G2 follow the normalized coefficient recurrence with initial
/// data (1,0) and (0,1).  Converges for 0 < sigma^2 < 2.
inline TailState bordered_tails(int n, double mu, double sigma2, double y, double eps_tail,
                                int p_cap) {
    TailState st;
    auto py = hermite_weighted_upto(n + 1, y);
    double g1m = 1.0, g1 = 0.0;  // G1_{k-1}, G1_k at k = 1
    double g2m = 0.0, g2 = 1.0;
    double pm = py[n], pc = py[n + 1];  // psi_{n-1+k}(y) at k = 1, 2
    st.sum1 = 1.0 * py[n - 1] + g1 * py[n];
    st.sum2 = g2 * py[n];
    int quiet = 0;
    int k = 1, idx = n;  // idx = n - 1 + k
    while (k < p_cap) {
        ++k;
        ++idx;
        double ck = 2.0 * mu / std::sqrt(2.0 * idx);
        double dk = (sigma2 - 1.0) * std::sqrt((idx - 1.0) / idx);
        double g1n = ck * g1 + dk * g1m;
        double g2n = ck * g2 + dk * g2m;
        g1m = g1;
        g1 = g1n;
        g2m = g2;
        g2 = g2n;
        double t1 = g1 * pm, t2 = g2 * pm;  // pm currently holds psi_{n-1+k}(y)
        st.sum1 += t1;
        st.sum2 += t2;
        double pn = y * std::sqrt(2.0 / (idx + 1)) * pc - std::sqrt(idx / (idx + 1.0)) * pm;
        // advance psi window: (pm, pc) -> (psi_{idx+1}, psi_{idx+2})
        pm = pc;
        pc = pn;
        if (std::abs(t1) + std::abs(t2) <
            eps_tail * (std::abs(st.sum1) + std::abs(st.sum2) + 1.0)) {
            if (++quiet >= 3 && k > 8) break;
        } else {
            quiet = 0;
        }
    }
    st.terms = k;
    if (k >= p_cap)
        throw divergence_detected(
            "kernel: correction series tail failed to decay before the term cap (sigma^2 too "
            "close to or beyond 2?)");
    return st;
}

}  // namespace detail

/// General-path bordered kernel.  The coefficient table fixes (mu, sigma);
/// the correction coefficients themselves are regenerated by the normalized
/// recurrence, which is algebraically identical to the table ratios.
inline double kernel_bordered(const KernelSpec& spec, const CoeffTable& coeffs, double x,
                              double y) {
    require(spec.path == KernelPath::general, "kernel_bordered: general-path spec expected");
    if (spec.sigma2 == 1.0 && spec.mu == 0.0) return kernel_gue(spec.n + 1, x, y);
    spec.validate();
    require(coeffs.mu() == spec.mu && coeffs.sigma2() == spec.sigma2,
            "kernel_bordered: coefficient table does not match the kernel parameters");
    const int n = spec.n;
    double base = (n >= 2) ? kernel_gue(n - 1, x, y) : 0.0;
    auto px = hermite_weighted_upto(n, x);
    auto tails = detail::bordered_tails(n, spec.mu, spec.sigma2, y, spec.trunc.eps_tail,
                                        20 * n + spec.trunc.p_cap_extra);
    return base + px[n - 1] * tails.sum1 + px[n] * tails.sum2;
}

/// Test oracle: the same kernel assembled directly from stored table values,
///   G1_k = sqrt(N_{n-1}/N_p) (ta_n tb_p - tb_n ta_p) / Delta, etc.
/// Usable at small n where the products stay within range of the log-space
/// subtractions.
inline double kernel_bordered_direct(const CoeffTable& t, int n, double x, double y,
                                     int tail_terms = 400) {
    require(n >= 1, "kernel_bordered_direct: n >= 1");
    require(t.p_max() >= n - 1 + tail_terms, "kernel_bordered_direct: table too short");
    double base = (n >= 2) ? kernel_gue(n - 1, x, y) : 0.0;
    auto px = hermite_weighted_upto(n, x);
    auto py = hermite_weighted_upto(n - 1 + tail_terms, y);
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < tail_terms; ++k) {
        s1 += gamma_finite(t, n, k, 1) * py[n - 1 + k];
        s2 += gamma_finite(t, n, k, 2) * py[n - 1 + k];
    }
    return base + px[n - 1] * s1 + px[n] * s2;
}

/// sigma = 1 kernel (additive rank-one mean shift), production form:
///   K_n^GUE + psi_n(x) sum_{k>=0} [prod_{j<=k} 2 mu/sqrt(2(n+j))] psi_{n+k}(y).
inline double kernel_sigma1(int n, double mu, double x, double y, double eps_tail = 1e-14,
                            int p_cap_extra = 4000) {
    require(n >= 1, "kernel_sigma1: n >= 1 required");
    if (mu == 0.0) return kernel_gue(n + 1, x, y);
    double base = kernel_gue(n, x, y);
    auto px = hermite_weighted_upto(n, x);
    auto py = hermite_weighted_upto(n + 1, y);
    double tau = 1.0;
    double sum = py[n];
    double pm = py[n], pc = py[n + 1];
    int cap = 20 * n + p_cap_extra + static_cast<int>(4.0 * mu * mu);
    int quiet = 0;
    for (int k = 1; k < cap; ++k) {
        int idx = n + k;
        tau *= 2.0 * mu / std::sqrt(2.0 * idx);
        double t = tau * pc;
        sum += t;
        double pn = y * std::sqrt(2.0 / (idx + 1)) * pc - std::sqrt(idx / (idx + 1.0)) * pm;
        pm = pc;
        pc = pn;
        if (std::abs(t) < eps_tail * (std::abs(sum) + 1.0)) {
            if (++quiet >= 3 && k > 10) break;
        } else {
            quiet = 0;
        }
    }
    return base + px[n] * sum;
}

/// Complementary-sum representation of the sigma = 1 kernel, evaluated in
/// log-scaled form; agrees with kernel_sigma1 and serves as its dual oracle.
inline double kernel_sigma1_complement(int n, double mu, double x, double y) {
    require(n >= 1 && mu != 0.0, "kernel_sigma1_complement: n >= 1, mu != 0");
    double base = kernel_gue(n, x, y);
    auto py = hermite_weighted_upto(n, y);
    double bracket = std::exp(2.0 * mu * y - mu * mu - 0.5 * y * y) / kSqrtPi;
    for (int p = 0; p < n; ++p)
        bracket -= std::pow(2.0 * mu, p) * std::exp(-0.5 * log_hermite_norm(p)) * py[p];
    double psin = hermite_weighted(n, x);
    double logpref = 0.5 * log_hermite_norm(n) - n * std::log(std::abs(2.0 * mu));
    double sgn = (mu < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
    return base + sgn * psin * std::exp(logpref) * bracket;
}

/// Contour representation of the sigma = 1 kernel: trapezoidal quadrature of
///   K_n^GUE + (-1)^n/sqrt(pi) e^{-(x^2+y^2)/2} H_n(x)
///             . oint e^{-yz - z^2/4} / (z^n (z + 2 mu)) dz/(2 pi i)
/// over a circle enclosing 0 and -2 mu.  Test oracle for small n.
inline double kernel_sigma1_contour(int n, double mu, double x, double y, int points = 4096) {
    require(n >= 1 && mu != 0.0, "kernel_sigma1_contour: n >= 1, mu != 0");
    double base = kernel_gue(n, x, y);
    double radius = 2.0 * std::abs(mu) + 2.0;
    std::complex<double> acc = 0.0;
    for (int j = 0; j < points; ++j) {
        double th = 2.0 * kPi * j / points;
        std::complex<double> z = radius * std::exp(std::complex<double>(0.0, th));
        acc += std::exp(-y * z - 0.25 * z * z) / (std::pow(z, n) * (z + 2.0 * mu)) * z;
    }
    double gamma = (acc / static_cast<double>(points)).real();  // dz/(2 pi i z) -> 1/points
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return base + sgn / kSqrtPi * std::exp(-0.5 * (x * x + y * y)) * hermite(n, x) * gamma;
}

/// mu = 0 kernel via the parity-split sums; term ratios advance two degrees
/// at a time with factor (sigma^2 - 1) sqrt((q+1)/(q+2)), so the evaluation
/// stays in range for any n.  Equals the general path on the overlap.
inline double kernel_mu0(int n, double sigma2, double x, double y, double eps_tail = 1e-14,
                         int p_cap_extra = 4000) {
    require(n >= 1, "kernel_mu0: n >= 1 required");
    if (sigma2 <= 0.0) throw invalid_parameter("kernel_mu0: sigma^2 > 0 required");
    if (sigma2 == 1.0) throw unsupported_parameter("kernel_mu0: sigma^2 = 1 is plain GUE");
    if (sigma2 >= 2.0)
        throw divergence_detected("kernel_mu0: correction series requires sigma^2 < 2");
    double base = (n >= 2) ? kernel_gue(n - 1, x, y) : 0.0;
    auto px = hermite_weighted_upto(n, x);

    auto tail_sum = [&](int start_q) {
        auto py = hermite_weighted_upto(start_q + 1, y);
        double pm = (start_q >= 1) ? py[start_q - 1] : 0.0;
        double pc = py[start_q];
        // psi values one behind / at the running index q
        double pnext = py[start_q + 1];
        double coef = 1.0;
        double sum = pc;
        int q = start_q;
        int cap = 20 * n + p_cap_extra;
        int quiet = 0;
        for (int j = 0; j < cap; ++j) {
            // advance psi by two: q -> q + 2
            double p1 = pnext;
            double p2 = y * std::sqrt(2.0 / (q + 2)) * p1 - std::sqrt((q + 1.0) / (q + 2.0)) * pc;
            double p3 = y * std::sqrt(2.0 / (q + 3)) * p2 - std::sqrt((q + 2.0) / (q + 3.0)) * p1;
            coef *= (sigma2 - 1.0) * std::sqrt((q + 1.0) / (q + 2.0));
            q += 2;
            pm = p1;
            pc = p2;
            pnext = p3;
            double t = coef * pc;
            sum += t;
            if (std::abs(t) < eps_tail * (std::abs(sum) + 1.0)) {
                if (++quiet >= 3 && j > 4) break;
            } else {
                quiet = 0;
            }
        }
        return sum;
    };
    return base + px[n - 1] * tail_sum(n - 1) + px[n] * tail_sum(n);
}

/// Kernel value dispatched over the configured path.
inline double kernel_value(const KernelSpec& spec, const CoeffTable* coeffs, double x, double y) {
    switch (spec.path) {
        case KernelPath::gue:
            return kernel_gue(spec.n + 1, x, y);
        case KernelPath::sigma1:
            return kernel_sigma1(spec.n, spec.mu, x, y, spec.trunc.eps_tail);
        case KernelPath::mu0:
            return kernel_mu0(spec.n, spec.sigma2, x, y, spec.trunc.eps_tail);
        case KernelPath::general:
            require(coeffs != nullptr, "kernel_value: general path needs a coefficient table");
            return kernel_bordered(spec, *coeffs, x, y);
    }
    throw invalid_parameter("kernel_value: unknown path");
}

/// Density rho(x) = K(x, x).
inline double density(const KernelSpec& spec, const CoeffTable* coeffs, double x) {
    return kernel_value(spec, coeffs, x, x);
}

/// k-point correlation det[K(x_j, x_l)].
inline double correlations(const KernelSpec& spec, const CoeffTable* coeffs,
                           const std::vector<double>& points) {
    const int k = static_cast<int>(points.size());
    require(k >= 1, "correlations: need at least one point");
    std::vector<double> m(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m[static_cast<std::size_t>(i) * k + j] = kernel_value(spec, coeffs, points[i], points[j]);
    return lu_det(m, k);
}

struct GramReport {
    int n = 0;
    double max_offblock = 0.0;       // |g_jk| over the off-block entries
    double max_diag_rel = 0.0;       // relative error of the leading diagonal
    double block[2][2] = {{0, 0}, {0, 0}};
    double block_expected[2][2] = {{0, 0}, {0, 0}};
    double max_block_rel = 0.0;
};

/// Quadrature check of the biorthogonal inner-product matrix: diagonal
/// N_{j-1} for the first n-1 rows, trailing 2x2 block of table values, zero
/// elsewhere.  Small n only.
inline GramReport gram_check(int n, const CoeffTable& coeffs, double tol = 1e-10) {
    require(n >= 2 && n <= 12, "gram_check: 2 <= n <= 12");
    const double mu = coeffs.mu(), s2 = coeffs.sigma2();
    const double sig = std::sqrt(s2);

    auto fgen = [&](double lam) {
        return std::exp((1.0 - 1.0 / s2) * lam * lam + 2.0 * mu * lam / s2);
    };
    auto Fint = [&](double lam) {
        if (lam == 0.0) return 0.0;
        auto z = [&](double u) {
            return std::exp((-1.0 + 1.0 / s2) * u * u - 2.0 * mu * u / s2);
        };
        return integrate_adaptive_checked(z, 0.0, lam, 1e-11, "gram: inner integral");
    };
    auto eta = [&](int k, double lam) {  // 1-based row/column index
        if (k <= n - 1) return hermite(k - 1, lam);
        double head;
        if (k == n) {
            head = fgen(lam);
            for (int p = 0; p <= n - 2; ++p)
                head -= coeffs.beta_tilde(p) / coeffs.norm(p) * hermite(p, lam);
        } else {
            head = fgen(lam) * Fint(lam);
            for (int p = 0; p <= n - 2; ++p)
                head -= coeffs.alpha_tilde(p) / coeffs.norm(p) * hermite(p, lam);
        }
        return head;
    };

    double w = 12.0 * std::max(1.0, sig) + 3.0 * std::abs(mu) * std::max(1.0, s2);
    GramReport rep;
    rep.n = n;
    for (int j = 1; j <= n + 1; ++j) {
        for (int k = 1; k <= n + 1; ++k) {
            auto integrand = [&](double lam) {
                return std::exp(-lam * lam) * hermite(j - 1, lam) * eta(k, lam);
            };
            auto res = integrate_adaptive(integrand, -w, w, tol, 16, 10);
            if (!res.converged) throw numerical_failure("gram: entry quadrature");
            double g = res.value;
            bool lead_diag = (j == k && j <= n - 1);
            bool in_block = (j >= n && k >= n);
            if (lead_diag) {
                rep.max_diag_rel =
                    std::max(rep.max_diag_rel, std::abs(g / coeffs.norm(j - 1) - 1.0));
            } else if (in_block) {
                rep.block[j - n][k - n] = g;
            } else {
                rep.max_offblock = std::max(rep.max_offblock, std::abs(g));
            }
        }
    }
    rep.block_expected[0][0] = coeffs.beta_tilde(n - 1);
    rep.block_expected[0][1] = coeffs.alpha_tilde(n - 1);
    rep.block_expected[1][0] = coeffs.beta_tilde(n);
    rep.block_expected[1][1] = coeffs.alpha_tilde(n);
    double scale = 0.0;
    for (auto& row : rep.block_expected)
        for (double v : row) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            rep.max_block_rel = std::max(
                rep.max_block_rel, std::abs(rep.block[i][j] - rep.block_expected[i][j]) / scale);
    return rep;
}

}  // namespace bgue
