#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bgue/errors.hpp"
#include "bgue/linalg.hpp"
#include "bgue/quadrature.hpp"
#include "bgue/rng.hpp"
#include "bgue/specfun.hpp"

namespace bgue {

/// Full specification of a bordered-GUE draw.
///
/// Gaussian convention: N[m, s] means mean m, standard deviation s.  The
/// plain-GUE weight exp(-Tr X^2) corresponds to diagonal entries N[0, 1/sqrt2]
/// and off-diagonal real/imaginary parts N[0, 1/2]; each bordering adds a
/// corner entry N[mu, sigma/sqrt2] and a column of N[0, sigma/2] + i N[0, sigma/2],
/// so sigma = 1 reduces the border statistics to plain GUE.
struct EnsembleParams {
    int n = 1;          // core size
    int r = 0;          // number of borderings
    double mu = 0.0;    // border diagonal mean
    double sigma = 1.0; // border scale, > 0
    std::uint64_t seed = 0;

    void validate() const {
        require(n >= 1, "ensemble: n >= 1 required");
        require(r >= 0, "ensemble: r >= 0 required");
        require(sigma > 0.0, "ensemble: sigma > 0 required");
    }
};

inline HermitianMatrix sample_gue(int n, RandomStream& rng) {
    require(n >= 1, "sample_gue: n >= 1 required");
    HermitianMatrix m(n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        m.set_diag(i, rng.gaussian(0.0, inv_sqrt2));
        for (int j = i + 1; j < n; ++j)
            m.set(i, j, cplx(rng.gaussian(0.0, 0.5), rng.gaussian(0.0, 0.5)));
    }
    return m;
}

/// Appends one bordering row/column around `core`.
inline HermitianMatrix border_once(const HermitianMatrix& core, double mu, double sigma,
                                   RandomStream& rng) {
    if (sigma <= 0.0) throw invalid_parameter("border_once: sigma > 0 required");
    const int n = core.dim();
    HermitianMatrix out(n + 1);
    out.set_diag(0, rng.gaussian(mu, sigma / std::sqrt(2.0)));
    for (int j = 0; j < n; ++j)
        out.set(0, j + 1, cplx(rng.gaussian(0.0, 0.5 * sigma), rng.gaussian(0.0, 0.5 * sigma)));
    for (int i = 0; i < n; ++i) {
        out.set_diag(i + 1, core(i, i).real());
        for (int j = i + 1; j < n; ++j) out.set(i + 1, j + 1, core(i, j));
    }
    return out;
}

inline HermitianMatrix sample_bordered(const EnsembleParams& params, RandomStream& rng) {
    params.validate();
    HermitianMatrix m = sample_gue(params.n, rng);
    for (int s = 0; s < params.r; ++s) m = border_once(m, params.mu, params.sigma, rng);
    return m;
}

/// Diagonal-core variant: the core is replaced by diag(a) before bordering.
/// Its spectrum matches the full-core construction in distribution.
inline HermitianMatrix bordered_with_diag_core(const std::vector<double>& a, double mu,
                                               double sigma, RandomStream& rng) {
    const int n = static_cast<int>(a.size());
    HermitianMatrix core(n);
    for (int i = 0; i < n; ++i) core.set_diag(i, a[i]);
    return border_once(core, mu, sigma, rng);
}

/// Interlacing check lam_1 > a_1 > lam_2 > ... > a_N > lam_{N+1} with slack.
inline bool interlaces(const std::vector<double>& lam_desc, const std::vector<double>& a_desc,
                       double tol = 0.0) {
    if (lam_desc.size() != a_desc.size() + 1) return false;
    for (std::size_t j = 0; j < a_desc.size(); ++j) {
        if (!(lam_desc[j] >= a_desc[j] - tol) || !(a_desc[j] >= lam_desc[j + 1] - tol))
            return false;
    }
    return true;
}

/// Conditional eigenvalue density of a once-bordered matrix given the core
/// spectrum a (both descending).  Exactly normalized: for every (a, mu, sigma)
/// the integral over the interlaced region is 1.
inline double joint_pdf_r1(const std::vector<double>& lam_desc, const std::vector<double>& a_desc,
                           double mu, double sigma) {
    if (sigma <= 0.0) throw invalid_parameter("joint_pdf_r1: sigma > 0 required");
    const int n = static_cast<int>(a_desc.size());
    require(static_cast<int>(lam_desc.size()) == n + 1, "joint_pdf_r1: need |lam| = |a| + 1");
    for (int j = 0; j < n; ++j)
        if (!(lam_desc[j] > a_desc[j] && a_desc[j] > lam_desc[j + 1])) return 0.0;

    const double s2 = sigma * sigma;
    double log_vd = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) log_vd += std::log(lam_desc[i] - lam_desc[j]);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) log_vd -= std::log(a_desc[i] - a_desc[j]);

    double sl = 0.0, sl2 = 0.0, sa = 0.0, sa2 = 0.0;
    for (double v : lam_desc) {
        sl += v;
        sl2 += v * v;
    }
    for (double v : a_desc) {
        sa += v;
        sa2 += v * v;
    }
    double log_pdf = n * std::log(2.0 / s2) - 0.5 * std::log(kPi * s2) + log_vd -
                     (sl2 - sa2) / s2 + 2.0 * mu * (sl - sa) / s2 - mu * mu / s2;
    return std::exp(log_pdf);
}

/// Polynomial family used in the h-columns of the marginal r-border density.
/// The density value is independent of the choice.
enum class PFamily { monomial, weighted_derivative };

namespace detail {

inline double z_weight(double u, double mu, double s2) {
    return std::exp((-1.0 + 1.0 / s2) * u * u - 2.0 * mu / s2 * u);
}

/// Monic p_k(u): either u^k or the derivative-based family that telescopes
/// the first h-column (defined for s2 != 1 and k >= 1).
inline double p_poly(PFamily fam, int k, double u, double mu, double s2) {
    if (fam == PFamily::monomial || k == 0) {
        double v = 1.0;
        for (int i = 0; i < k; ++i) v *= u;
        return v;
    }
    // -2^{-k}/(1 - 1/s2) * [H'_{k-1} + (z'/z) H_{k-1}] with z as above
    double hk1 = hermite(k - 1, u);
    double dh = (k - 1 >= 1) ? 2.0 * (k - 1) * hermite(k - 2, u) : 0.0;
    double zlog_d = 2.0 * (-1.0 + 1.0 / s2) * u - 2.0 * mu / s2;
    return -std::pow(2.0, -k) / (1.0 - 1.0 / s2) * (dh + zlog_d * hk1);
}

/// h_{k,r-1}(x) = (1/(r-1)!) int (x-u)^{r-1} z(u) p_k(u) du.  The lower
/// terminal is -inf for s2 > 1 (z decays there) and 0 otherwise; the two
/// choices differ by a polynomial of degree < r, which the power-block
/// columns cancel inside the determinant.
inline double h_col(PFamily fam, int k, int r, double x, double mu, double s2) {
    const double sig = std::sqrt(s2);
    const int rm1 = r - 1;
    auto f = [&](double u) {
        double pw = 1.0;
        for (int i = 0; i < rm1; ++i) pw *= (x - u);
        return pw * z_weight(u, mu, s2) * p_poly(fam, k, u, mu, s2);
    };
    double lo = (s2 > 1.0) ? x - 40.0 * sig : 0.0;
    if (lo == x) return 0.0;
    auto res = integrate_adaptive(f, lo, x, 1e-10, 8, 14);
    if (!res.converged) throw numerical_failure("h-column quadrature did not converge");
    double lf = 0.0;
    for (int i = 2; i <= rm1; ++i) lf += std::log(static_cast<double>(i));
    return res.value * std::exp(-lf);
}

}  // namespace detail

/// Marginal eigenvalue density of the r-times bordered ensemble at the top
/// level, evaluated through the determinantal reduction of the interlaced
/// chain.  Determinants go through pivoted LU in log space.
inline double joint_pdf_rborder(const std::vector<double>& lam_desc, const EnsembleParams& params,
                                PFamily fam = PFamily::monomial) {
    params.validate();
    require(params.r >= 1, "joint_pdf_rborder: r >= 1 required");
    const int n = params.n, r = params.r, m = n + r;
    require(static_cast<int>(lam_desc.size()) == m, "joint_pdf_rborder: need n + r eigenvalues");
    const double mu = params.mu, s2 = params.sigma * params.sigma;

    // det of monic Hermite q_{j-1}(lam_k)
    std::vector<double> Q(static_cast<std::size_t>(m) * m);
    std::vector<double> hv(m);
    for (int k = 0; k < m; ++k) {
        hv[0] = 1.0;
        if (m > 1) hv[1] = 2.0 * lam_desc[k];
        for (int j = 2; j < m; ++j)
            hv[j] = 2.0 * lam_desc[k] * hv[j - 1] - 2.0 * (j - 1) * hv[j - 2];
        for (int j = 0; j < m; ++j) Q[static_cast<std::size_t>(j) * m + k] = hv[j] * std::pow(2.0, -j);
    }
    auto [qlog, qsign] = lu_logdet(Q, m);

    std::vector<double> H(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < n; ++k)
            H[static_cast<std::size_t>(j) * m + k] = detail::h_col(fam, k, r, lam_desc[j], mu, s2);
        for (int s = 1; s <= r; ++s) {
            double pw = 1.0;
            for (int i = 0; i < r - s; ++i) pw *= lam_desc[j];
            H[static_cast<std::size_t>(j) * m + (n + s - 1)] = pw;
        }
    }
    auto [hlog, hsign] = lu_logdet(H, m);
    if (qsign == 0 || hsign == 0) return 0.0;

    // log Z_n for the core normalization, Z_n = pi^{n/2} 2^{-n(n-1)/2} prod_{j<=n} j!
    double log_zn = 0.5 * n * std::log(kPi) - 0.5 * n * (n - 1) * std::log(2.0);
    for (int j = 2; j <= n; ++j) log_zn += std::lgamma(j + 1.0);
    double log_pref = (r * n + 0.5 * r * (r - 1)) * std::log(2.0 / s2) -
                      0.5 * r * std::log(kPi * s2) - r * mu * mu / s2 +
                      std::lgamma(n + 1.0) - log_zn;
    for (int s = 1; s <= r - 1; ++s) log_pref -= std::lgamma(s + 1.0);

    double sl = 0.0, sl2 = 0.0;
    for (double v : lam_desc) {
        sl += v;
        sl2 += v * v;
    }
    int par = (n * (n - 1) / 2 + m * (m - 1) / 2) % 2;
    double sign = (par == 0 ? 1.0 : -1.0) * qsign * hsign;
    return sign * std::exp(log_pref - sl2 / s2 + 2.0 * mu * sl / s2 + qlog + hlog);
}

}  // namespace bgue
