#pragma once

// Reference computations used only by the tests. None of these call into
// the library code paths they are compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

/// erf(x) for x >= 0 by the all-positive series
/// erf(x) = 2/sqrt(pi) e^{-x^2} sum_k 2^k x^{2k+1} / (1*3*...*(2k+1)),
/// evaluated in long double.
inline long double erf_series(long double x) {
    if (x < 0) return -erf_series(-x);
    long double term = x;
    long double sum = x;
    for (int k = 1; k < 2000; ++k) {
        term *= 2.0L * x * x / (2.0L * k + 1.0L);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * std::exp(-x * x) * sum;
}

inline long double normal_cdf(long double z) {
    return 0.5L * (1.0L + erf_series(z / std::sqrt(2.0L)));
}

/// x with 2 Phi(x) - 1 = a0, bisection on the series CDF.
inline long double central_quantile(long double a0) {
    long double lo = 0.0L, hi = 10.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (2.0L * normal_cdf(mid) - 1.0L < a0) lo = mid; else hi = mid;
    }
    return 0.5L * (lo + hi);
}

/// sum_{j=-n..n} a_j p(t + j), written out as a plain loop.
inline double field(const std::vector<std::uint8_t>& p, const std::vector<double>& a, std::size_t t) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size() / 2);
    double s = 0.0;
    for (std::ptrdiff_t j = -n; j <= n; ++j) s += a[static_cast<std::size_t>(j + n)] * p[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(t) + j)];
    return s;
}

/// The branch form: max of the two directed terms when at most one train
/// peaks, their average when both do.
inline std::vector<double> pairwise_max_form(const std::vector<std::uint8_t>& p1, const std::vector<std::uint8_t>& p2,
                                             const std::vector<double>& a) {
    const std::size_t n = a.size() / 2;
    std::vector<double> out(p1.size(), 0.0);
    for (std::size_t t = n; t + n < p1.size(); ++t) {
        const double f1 = field(p1, a, t);
        const double f2 = field(p2, a, t);
        const double x = f1 * p2[t];
        const double y = f2 * p1[t];
        out[t] = (p1[t] * p2[t] == 0) ? std::max(x, y) : (x + y) / 2.0;
    }
    return out;
}

/// Mean over all pairs of the branch-form pairwise series.
inline std::vector<double> pairwise_average(const std::vector<std::vector<std::uint8_t>>& trains,
                                            const std::vector<double>& a) {
    std::vector<double> acc(trains.front().size(), 0.0);
    double pairs = 0.0;
    for (std::size_t i = 0; i < trains.size(); ++i)
        for (std::size_t j = i + 1; j < trains.size(); ++j) {
            const auto s = pairwise_max_form(trains[i], trains[j], a);
            for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += s[t];
            pairs += 1.0;
        }
    for (double& v : acc) v /= pairs;
    return acc;
}

/// Threshold detector by full sort per window: median, then population std
/// via E[x^2] - E[x]^2 in long double.
inline std::vector<std::size_t> threshold_peaks(const std::vector<double>& x, std::size_t window, double mult) {
    const std::size_t n = x.size();
    std::vector<double> thr(n);
    double last = 0.0;
    for (std::size_t s = 0; s < n; s += window) {
        if (s + window <= n) {
            std::vector<double> w(x.begin() + static_cast<std::ptrdiff_t>(s), x.begin() + static_cast<std::ptrdiff_t>(s + window));
            std::sort(w.begin(), w.end());
            const double med = window % 2 ? w[window / 2] : 0.5 * (w[window / 2 - 1] + w[window / 2]);
            long double s1 = 0, s2 = 0;
            for (double v : w) { s1 += v; s2 += static_cast<long double>(v) * v; }
            const long double mean = s1 / window;
            last = med + mult * static_cast<double>(std::sqrt(s2 / window - mean * mean));
        }
        for (std::size_t t = s; t < std::min(n, s + window); ++t) thr[t] = last;
    }
    std::vector<std::size_t> out;
    for (std::size_t t = 1; t + 1 < n; ++t)
        if (x[t] > thr[t] && x[t] > x[t - 1] && x[t] > x[t + 1]) out.push_back(t);
    return out;
}

/// Two-pass Pearson correlation.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// Roots of the characteristic cubic of a symmetric 3x3 matrix, descending
/// (trigonometric form for three real roots).
inline std::array<double, 3> symmetric3_eigenvalues(const std::array<std::array<double, 3>, 3>& m) {
    const long double a = m[0][0], b = m[1][1], c = m[2][2];
    const long double d = m[0][1], e = m[1][2], f = m[0][2];
    const long double q = (a + b + c) / 3.0L;
    const long double p1 = d * d + e * e + f * f;
    const long double p2 = (a - q) * (a - q) + (b - q) * (b - q) + (c - q) * (c - q) + 2.0L * p1;
    const long double p = std::sqrt(p2 / 6.0L);
    if (p == 0.0L) return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
    const long double ba = (a - q) / p, bb = (b - q) / p, bc = (c - q) / p, bd = d / p, be = e / p, bf = f / p;
    const long double det = ba * (bb * bc - be * be) - bd * (bd * bc - be * bf) + bf * (bd * be - bb * bf);
    const long double r = std::clamp(det / 2.0L, -1.0L, 1.0L);
    const long double phi = std::acos(r) / 3.0L;
    const long double l1 = q + 2.0L * p * std::cos(phi);
    const long double l3 = q + 2.0L * p * std::cos(phi + 2.0L * std::numbers::pi_v<long double> / 3.0L);
    const long double l2 = 3.0L * q - l1 - l3;
    std::array<double, 3> out{static_cast<double>(l1), static_cast<double>(l2), static_cast<double>(l3)};
    std::sort(out.begin(), out.end(), [](double x, double y) { return x > y; });
    return out;
}

}  // namespace oracle
