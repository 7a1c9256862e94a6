#pragma once

// Amplitude-correlation baseline: sliding-window zero-lag Pearson
// correlation matrices and their eigenvalues, largest first.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/parallel.hpp"
#include "peaksync/record.hpp"

namespace peaksync {

struct EigenSeries {
    std::vector<std::size_t> window_centers;
    std::vector<std::vector<double>> eigenvalues;  ///< one descending list per window
    std::size_t window_len = 0;
    std::size_t hop = 0;
};

/// r x r Pearson correlation of the rows of `window` (r x m, m >= 2). A
/// constant row correlates 0 with every other row and 1 with itself.
inline Matrix corr_matrix(const Matrix& window) {
    const std::size_t r = window.rows();
    const std::size_t m = window.cols();
    detail::require(m >= 2, "correlation window needs at least 2 samples");

    Matrix centered(r, m);
    std::vector<double> ss(r, 0.0);
    std::vector<bool> constant(r, false);
    for (std::size_t i = 0; i < r; ++i) {
        const auto row = window.row(i);
        const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
        constant[i] = *lo == *hi;
        double mean = 0.0;
        for (double v : row) mean += v;
        mean /= static_cast<double>(m);
        for (std::size_t t = 0; t < m; ++t) {
            centered(i, t) = row[t] - mean;
            ss[i] += centered(i, t) * centered(i, t);
        }
    }

    Matrix c(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        c(i, i) = 1.0;
        for (std::size_t j = i + 1; j < r; ++j) {
            double v = 0.0;
            if (!constant[i] && !constant[j]) {
                double cross = 0.0;
                for (std::size_t t = 0; t < m; ++t) cross += centered(i, t) * centered(j, t);
                v = std::clamp(cross / std::sqrt(ss[i] * ss[j]), -1.0, 1.0);
            }
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return c;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// descending. Sweeps stop once the off-diagonal Frobenius norm is below
/// 1e-12 times max(1, ||A||_F).
inline std::vector<double> symmetric_eigenvalues(Matrix a) {
    const std::size_t n = a.rows();
    detail::require(a.cols() == n, "eigenvalues need a square matrix");
    double total = 0.0;
    for (double v : a.data()) total += v * v;
    const double tol = 1e-12 * std::max(1.0, std::sqrt(total));

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

/// Windows start at 0, hop, 2*hop, ... while they fit; the recorded centre
/// is start + window_len / 2 (0-based).
inline EigenSeries eigen_track(const MultiChannelRecord& record, const std::vector<std::string>& group,
                               std::size_t window_len, std::size_t hop, unsigned threads = 1) {
    detail::require(group.size() >= 2, "eigenvalue track needs at least two channels");
    detail::require(window_len >= 2, "correlation window needs at least 2 samples");
    detail::require(hop >= 1, "hop must be positive");
    detail::require(window_len <= record.sample_count(), "correlation window is longer than the record");
    const auto sub = record.select(group);

    const std::size_t windows = (record.sample_count() - window_len) / hop + 1;
    EigenSeries out;
    out.window_len = window_len;
    out.hop = hop;
    out.window_centers.resize(windows);
    out.eigenvalues.resize(windows);
    parallel_for(windows, threads, [&](std::size_t w) {
        const std::size_t start = w * hop;
        Matrix window(group.size(), window_len);
        for (std::size_t k = 0; k < group.size(); ++k) {
            const auto row = sub.channel(k).subspan(start, window_len);
            std::copy(row.begin(), row.end(), window.row(k).begin());
        }
        out.window_centers[w] = start + window_len / 2;
        out.eigenvalues[w] = symmetric_eigenvalues(corr_matrix(window));
    });
    return out;
}

}  // namespace peaksync
