#pragma once

// Peak synchronization series for pairs and groups of peak trains.
//
// Indexing is 0-based: sample t here is time point t + 1 in 1-based
// notation. With a weight vector of half-width n the series is defined on
// t in [n, N - n) and is 0 outside it, so a train of length N has
// N - 2n evaluated points.
//
// Per train k and time t:
//   field      f_k(t) = sum_{j=-n..n} a_j p_k(t + j)
//   indicator  I_k(t) = 1/2 if p_k(t) = 1, else 1
// Pair:  phi_12(t) = I_1 f_1 p_2 + I_2 f_2 p_1
// Group: phi(t) = [(sum_k f_k I_k)(sum_k p_k) - sum_k f_k I_k p_k] / C(r, 2),
// which equals the mean of phi_ij over all pairs.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/parallel.hpp"
#include "peaksync/peaks.hpp"
#include "peaksync/weights.hpp"

namespace peaksync {

struct SyncSeries {
    std::vector<double> values;
    std::vector<std::string> members;
    WeightVector weights;
    std::size_t valid_begin = 0;  ///< first evaluated index (= n)
    std::size_t valid_end = 0;    ///< one past the last evaluated index (= N - n)

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> valid_values() const {
        return std::span<const double>(values).subspan(valid_begin, valid_end - valid_begin);
    }
};

struct GroupScore {
    std::vector<std::string> members;
    std::size_t t0 = 0;
    std::size_t span = 0;
    double phi_bar = 0.0;
};

namespace detail {

inline double field_at(const std::uint8_t* p, const WeightVector& w, std::size_t t) {
    const std::size_t n = w.n;
    const std::uint8_t* window = p + (t - n);
    double sum = 0.0;
    for (std::size_t i = 0; i < w.coefficients.size(); ++i)
        if (window[i]) sum += w.coefficients[i];
    return sum;
}

inline void check_lengths(std::size_t length, const WeightVector& w) {
    require(!w.coefficients.empty() && w.coefficients.size() == 2 * w.n + 1, "malformed weight vector");
    require(length >= w.coefficients.size(), "weight vector is longer than the trains");
}

inline std::uint64_t pair_count(std::size_t r) { return static_cast<std::uint64_t>(r) * (r - 1) / 2; }

}  // namespace detail

/// f_k(t) for 0-based t in [n, N - n).
inline double local_field(const PeakTrain& train, const WeightVector& w, std::size_t t) {
    detail::check_lengths(train.size(), w);
    detail::require(t >= w.n && t + w.n < train.size(), "local field requested outside [n, N - n)");
    return detail::field_at(train.indicators.data(), w, t);
}

/// Two-train series, evaluated by the sum form I1 f1 p2 + I2 f2 p1.
inline SyncSeries pairwise_sync(const PeakTrain& p1, const PeakTrain& p2, const WeightVector& w) {
    detail::require(p1.size() == p2.size(), "peak trains differ in length");
    detail::check_lengths(p1.size(), w);
    const std::size_t len = p1.size();
    SyncSeries s{std::vector<double>(len, 0.0), {p1.label, p2.label}, w, w.n, len - w.n};
    const auto* x1 = p1.indicators.data();
    const auto* x2 = p2.indicators.data();
    for (std::size_t t = s.valid_begin; t < s.valid_end; ++t) {
        if (!(x1[t] | x2[t])) continue;
        const double q1 = x1[t];
        const double q2 = x2[t];
        const double i1 = x1[t] ? 0.5 : 1.0;
        const double i2 = x2[t] ? 0.5 : 1.0;
        s.values[t] = i1 * detail::field_at(x1, w, t) * q2 + i2 * detail::field_at(x2, w, t) * q1;
    }
    return s;
}

/// Group series in one pass over the trains per time point.
///
/// The bracket is accumulated as sum_k f_k I_k (P - p_k) with P = sum_k p_k,
/// which is the same polynomial with every term non-negative. Terms are
/// added in ascending order, so the result is bit-identical under any
/// reordering of `trains`.
inline SyncSeries multi_sync(std::span<const PeakTrain> trains, const WeightVector& w, unsigned threads = 1) {
    detail::require(trains.size() >= 2, "a group needs at least two trains");
    const std::size_t len = trains.front().size();
    for (const auto& tr : trains) detail::require(tr.size() == len, "peak trains differ in length");
    detail::check_lengths(len, w);

    const std::size_t r = trains.size();
    const double pairs = static_cast<double>(detail::pair_count(r));
    SyncSeries s{std::vector<double>(len, 0.0), {}, w, w.n, len - w.n};
    for (const auto& tr : trains) s.members.push_back(tr.label);

    std::vector<const std::uint8_t*> rows;
    for (const auto& tr : trains) rows.push_back(tr.indicators.data());

    constexpr std::size_t kBlock = 1 << 16;
    const std::size_t span = s.valid_end - s.valid_begin;
    const std::size_t blocks = (span + kBlock - 1) / kBlock;
    parallel_for(blocks, threads, [&](std::size_t b) {
        std::vector<double> terms;
        terms.reserve(r);
        const std::size_t first = s.valid_begin + b * kBlock;
        const std::size_t last = std::min(s.valid_end, first + kBlock);
        for (std::size_t t = first; t < last; ++t) {
            unsigned peaks = 0;
            for (std::size_t k = 0; k < r; ++k) peaks += rows[k][t];
            if (peaks == 0) continue;
            terms.clear();
            for (std::size_t k = 0; k < r; ++k) {
                const unsigned others = peaks - rows[k][t];
                if (others == 0) continue;
                const double indicator = rows[k][t] ? 0.5 : 1.0;
                const double term = detail::field_at(rows[k], w, t) * indicator * static_cast<double>(others);
                if (term != 0.0) terms.push_back(term);
            }
            std::sort(terms.begin(), terms.end());
            double bracket = 0.0;
            for (double v : terms) bracket += v;
            s.values[t] = std::min(1.0, bracket / pairs);
        }
    });
    return s;
}

/// Group series as the mean of every pairwise series, pairs visited in
/// (i, j), i < j order. Reference path: each pair is evaluated at every
/// valid time point without skipping empty samples, so the cost is one full
/// pass per pair.
inline SyncSeries multi_sync_pairwise(std::span<const PeakTrain> trains, const WeightVector& w) {
    detail::require(trains.size() >= 2, "a group needs at least two trains");
    const std::size_t len = trains.front().size();
    for (const auto& tr : trains) detail::require(tr.size() == len, "peak trains differ in length");
    detail::check_lengths(len, w);

    SyncSeries s{std::vector<double>(len, 0.0), {}, w, w.n, len - w.n};
    for (const auto& tr : trains) s.members.push_back(tr.label);
    for (std::size_t i = 0; i + 1 < trains.size(); ++i) {
        for (std::size_t j = i + 1; j < trains.size(); ++j) {
            const auto* x1 = trains[i].indicators.data();
            const auto* x2 = trains[j].indicators.data();
            for (std::size_t t = s.valid_begin; t < s.valid_end; ++t) {
                const double i1 = x1[t] ? 0.5 : 1.0;
                const double i2 = x2[t] ? 0.5 : 1.0;
                s.values[t] += i1 * detail::field_at(x1, w, t) * x2[t] + i2 * detail::field_at(x2, w, t) * x1[t];
            }
        }
    }
    const double pairs = static_cast<double>(detail::pair_count(trains.size()));
    for (double& v : s.values) v /= pairs;
    return s;
}

/// Mean of the series over [t0, t0 + span).
inline double compound(const SyncSeries& series, std::size_t t0, std::size_t span) {
    detail::require(span >= 1, "compound window must be non-empty");
    detail::require(t0 < series.size() && span <= series.size() - t0, "compound window exceeds the series");
    double sum = 0.0;
    for (std::size_t t = t0; t < t0 + span; ++t) sum += series.values[t];
    return sum / static_cast<double>(span);
}

/// Mean over the whole series.
inline double compound(const SyncSeries& series) { return compound(series, 0, series.size()); }

struct Interval {
    std::size_t t0 = 0;
    std::size_t span = 0;
};

/// Scores each group by the compound measure of its group series over
/// `interval` (whole length when omitted) and sorts descending. Equal scores
/// are ordered by their sorted member labels, then by input position.
inline std::vector<GroupScore> rank_groups(std::span<const PeakTrain> trains,
                                           const std::vector<std::vector<std::string>>& groups,
                                           const WeightVector& w, std::optional<Interval> interval = std::nullopt,
                                           unsigned threads = 1) {
    auto find = [&](const std::string& label) -> const PeakTrain& {
        for (const auto& tr : trains)
            if (tr.label == label) return tr;
        throw ValidationError("unknown channel label '" + label + "'");
    };

    std::vector<GroupScore> scores(groups.size());
    for (const auto& group : groups) {
        detail::require(group.size() >= 2, "every group needs at least two members");
        for (const auto& label : group) (void)find(label);
    }
    parallel_for(groups.size(), threads, [&](std::size_t g) {
        std::vector<PeakTrain> members;
        for (const auto& label : groups[g]) members.push_back(find(label));
        const auto series = multi_sync(members, w);
        const Interval iv = interval.value_or(Interval{0, series.size()});
        scores[g] = GroupScore{groups[g], iv.t0, iv.span, compound(series, iv.t0, iv.span)};
    });

    auto sorted_key = [](const GroupScore& s) {
        auto key = s.members;
        std::sort(key.begin(), key.end());
        return key;
    };
    std::stable_sort(scores.begin(), scores.end(), [&](const GroupScore& a, const GroupScore& b) {
        if (a.phi_bar != b.phi_bar) return a.phi_bar > b.phi_bar;
        return sorted_key(a) < sorted_key(b);
    });
    return scores;
}

}  // namespace peaksync
