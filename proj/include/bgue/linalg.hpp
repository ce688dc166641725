#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "bgue/errors.hpp"

namespace bgue {

using cplx = std::complex<double>;

/// Dense Hermitian matrix, row-major.  set() writes both (i,j) and (j,i) so
/// the invariant entries[i][j] == conj(entries[j][i]) holds by construction.
class HermitianMatrix {
public:
    explicit HermitianMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {
        require(dim >= 1, "matrix dimension must be >= 1");
    }

    int dim() const { return dim_; }

    cplx operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    void set(int i, int j, cplx v) {
        a_[static_cast<std::size_t>(i) * dim_ + j] = v;
        a_[static_cast<std::size_t>(j) * dim_ + i] = std::conj(v);
    }

    void set_diag(int i, double v) { a_[static_cast<std::size_t>(i) * dim_ + i] = v; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

private:
    int dim_;
    std::vector<cplx> a_;
};

/// Real eigenvalues sorted in descending order.
struct Spectrum {
    std::vector<double> values;
    int dim() const { return static_cast<int>(values.size()); }
};

namespace detail {

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form (d = diagonal, e = subdiagonal).  Off-diagonal phases are absorbed
/// into the moduli, which leaves the spectrum unchanged.
inline void tridiagonalize(std::vector<cplx> a, int n, std::vector<double>& d,
                           std::vector<double>& e) {
    d.assign(n, 0.0);
    e.assign(n > 0 ? n - 1 : 0, 0.0);
    std::vector<cplx> v(n), p(n), w(n);
    auto at = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * n + j]; };

    for (int k = 0; k + 2 < n; ++k) {
        const int m = n - 1 - k;  // length of the column below the diagonal
        double s2 = 0.0;
        for (int i = 0; i < m; ++i) s2 += std::norm(at(k + 1 + i, k));
        double s = std::sqrt(s2);
        if (s == 0.0) {
            e[k] = 0.0;
            continue;
        }
        cplx alpha = at(k + 1, k);
        double aabs = std::abs(alpha);
        cplx phase = (aabs > 0.0) ? alpha / aabs : cplx(1.0, 0.0);

        for (int i = 0; i < m; ++i) v[i] = at(k + 1 + i, k);
        v[0] += phase * s;
        double vnorm2 = 2.0 * s * (s + aabs);
        if (vnorm2 == 0.0) {
            e[k] = s;
            continue;
        }

        // p = 2 B v / vnorm2 over the trailing block B = a[k+1.., k+1..]
        for (int i = 0; i < m; ++i) {
            cplx acc = 0.0;
            const cplx* row = &a[static_cast<std::size_t>(k + 1 + i) * n + (k + 1)];
            for (int j = 0; j < m; ++j) acc += row[j] * v[j];
            p[i] = 2.0 * acc / vnorm2;
        }
        cplx vp = 0.0;
        for (int i = 0; i < m; ++i) vp += std::conj(v[i]) * p[i];
        cplx kk = vp / vnorm2;
        for (int i = 0; i < m; ++i) w[i] = p[i] - kk * v[i];

        // B := B - v w^* - w v^*
        for (int i = 0; i < m; ++i) {
            cplx vi = v[i], wi = w[i];
            cplx* row = &a[static_cast<std::size_t>(k + 1 + i) * n + (k + 1)];
            for (int j = 0; j < m; ++j) row[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
        }
        e[k] = s;  // reflected column is -phase*s*e1; modulus is what survives
    }
    if (n >= 2) e[n - 2] = std::abs(at(n - 1, n - 2));
    for (int i = 0; i < n; ++i) d[i] = at(i, i).real();
}

/// Implicitly shifted QL with Wilkinson shifts on a symmetric tridiagonal
/// matrix; eigenvalues only.  Sweep cap of 30 per eigenvalue.
inline void tql_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 30) throw numerical_failure("tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pp = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    e.pop_back();
}

}  // namespace detail

/// Full spectrum, descending.  Backward-stable: Householder tridiagonal
/// reduction followed by implicitly shifted QL.
inline Spectrum eigenvalues(const HermitianMatrix& m) {
    std::vector<double> d, e;
    detail::tridiagonalize(m.data(), m.dim(), d, e);
    detail::tql_eigenvalues(d, e);
    std::sort(d.begin(), d.end(), std::greater<double>());
    return Spectrum{std::move(d)};
}

/// log|det| and sign of a dense real matrix via partially pivoted LU.
/// Returns {log_abs, sign}; sign = 0 for a numerically singular matrix.
inline std::pair<double, int> lu_logdet(std::vector<double> a, int n) {
    int sign = 1;
    double logabs = 0.0;
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double big = std::abs(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(at(i, k));
            if (v > big) {
                big = v;
                piv = i;
            }
        }
        if (big == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(k, j));
            sign = -sign;
        }
        double pivval = at(k, k);
        logabs += std::log(std::abs(pivval));
        if (pivval < 0.0) sign = -sign;
        for (int i = k + 1; i < n; ++i) {
            double f = at(i, k) / pivval;
            at(i, k) = f;
            for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
        }
    }
    return {logabs, sign};
}

inline double lu_det(const std::vector<double>& a, int n) {
    auto [logabs, sign] = lu_logdet(a, n);
    if (sign == 0) return 0.0;
    return sign * std::exp(logabs);
}

}  // namespace bgue
