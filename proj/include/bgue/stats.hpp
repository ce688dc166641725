#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bgue/errors.hpp"

namespace bgue {

namespace detail {

/// Regularized lower incomplete gamma P(a, x) by series; x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
/// fraction; x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Upper tail of the chi-squared distribution with k degrees of freedom.
inline double chi_squared_sf(double stat, double dof) {
    require(dof > 0 && stat >= 0, "chi_squared_sf: dof > 0, stat >= 0 required");
    double a = 0.5 * dof, x = 0.5 * stat;
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// Kolmogorov limiting tail Q(t) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 t^2}.
inline double kolmogorov_q(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * t * t);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

/// Two-sample Kolmogorov-Smirnov statistic; inputs need not be sorted.
inline double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double va = a[i], vb = b[j];
        if (va <= vb) ++i;
        if (vb <= va) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// Asymptotic two-sample KS p-value.
inline double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
    double ne = std::sqrt(static_cast<double>(n) * m / (static_cast<double>(n) + m));
    return kolmogorov_q(d * ne);
}

struct Histogram {
    std::vector<double> edges;   // strictly ascending, size = bins + 1
    std::vector<double> counts;  // size = bins
    std::uint64_t total = 0;     // all draws, including out-of-range

    Histogram(double lo, double hi, int bins) : edges(bins + 1), counts(bins, 0.0) {
        require(bins >= 1 && hi > lo, "histogram: need hi > lo and bins >= 1");
        for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
    }

    void add(double x) {
        ++total;
        if (x < edges.front() || x >= edges.back()) return;
        double w = (x - edges.front()) / (edges.back() - edges.front());
        auto i = static_cast<std::size_t>(w * counts.size());
        if (i >= counts.size()) i = counts.size() - 1;
        counts[i] += 1.0;
    }
};

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson chi-squared against expected bin counts.  Bins are merged from
/// the tails inward until every expected count reaches min_expected.
inline ChiSquareResult chi_squared_binned(const std::vector<double>& observed,
                                          const std::vector<double>& expected,
                                          double min_expected = 5.0) {
    require(observed.size() == expected.size() && !observed.empty(),
            "chi_squared_binned: size mismatch");
    std::vector<double> obs, exp;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o_acc += observed[i];
        e_acc += expected[i];
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 && !exp.empty()) {
        obs.back() += o_acc;
        exp.back() += e_acc;
    }
    require(exp.size() >= 2, "chi_squared_binned: too few populated bins");
    ChiSquareResult r;
    for (std::size_t i = 0; i < exp.size(); ++i) {
        double d = obs[i] - exp[i];
        r.statistic += d * d / exp[i];
    }
    r.dof = static_cast<int>(exp.size()) - 1;
    r.p_value = chi_squared_sf(r.statistic, r.dof);
    return r;
}

}  // namespace bgue
