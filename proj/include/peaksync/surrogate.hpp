#pragma once

// Significance threshold from amplitude-shuffled surrogates.
//
// Surrogate i (1-based) permutes every channel of the group with a
// generator seeded by seed + i and reruns the whole pipeline. Its series is
// cut into consecutive pool windows starting at the first evaluated index;
// the mean over each complete window goes into one pool shared by all
// surrogates. The threshold is the nearest-rank percentile of that pool.
// A pool window of 1 pools the raw per-sample values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/parallel.hpp"
#include "peaksync/pipeline.hpp"
#include "peaksync/random.hpp"
#include "peaksync/record.hpp"
#include "peaksync/sync.hpp"

namespace peaksync {

struct SurrogateConfig {
    std::size_t count = 100;
    double percentile = 95.0;
    std::uint64_t seed = 0;
    /// Samples averaged per pooled value; one second of samples when unset.
    std::optional<std::size_t> pool_window;

    std::size_t resolved_pool_window(double sample_rate_hz) const {
        return pool_window.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(sample_rate_hz))));
    }

    void validate() const {
        detail::require(count >= 2, "surrogate count must be at least 2");
        detail::require(!pool_window || *pool_window >= 1, "pool window must be at least 1 sample");
        detail::require(percentile > 0.0 && percentile < 100.0, "percentile must lie in (0, 100)");
    }
};

struct SurrogateResult {
    double threshold = 0.0;
    std::vector<double> pooled;  ///< surrogate 1's window means, then surrogate 2's, ...
    std::size_t pool_window = 1;
};

/// Every channel independently permuted (Fisher-Yates).
inline MultiChannelRecord shuffle_surrogate(const MultiChannelRecord& record, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out = record.samples();
    for (std::size_t k = 0; k < out.rows(); ++k) {
        auto row = out.row(k);
        for (std::size_t i = row.size(); i > 1; --i) std::swap(row[i - 1], row[rng.index(i)]);
    }
    return record.with_samples(std::move(out));
}

/// Smallest value v in `values` such that at least percentile% of the values are <= v.
inline double nearest_rank_percentile(std::span<const double> values, double percentile) {
    detail::require(!values.empty(), "percentile of an empty set");
    detail::require(percentile > 0.0 && percentile <= 100.0, "percentile must lie in (0, 100]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(percentile * m / 100.0));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

namespace detail {

/// Group labels reordered to follow the record's channel order.
inline std::vector<std::string> canonical_group(const MultiChannelRecord& record, std::vector<std::string> group) {
    require(group.size() >= 2, "a group needs at least two channels");
    std::sort(group.begin(), group.end(), [&](const std::string& a, const std::string& b) {
        return record.index_of(a) < record.index_of(b);
    });
    require(std::adjacent_find(group.begin(), group.end()) == group.end(), "group lists a channel twice");
    return group;
}

}  // namespace detail

/// Means of `values` over consecutive complete windows of `window` samples.
inline std::vector<double> window_means(std::span<const double> values, std::size_t window) {
    detail::require(window >= 1, "pool window must be at least 1 sample");
    std::vector<double> out;
    if (window == 1) return {values.begin(), values.end()};
    for (std::size_t start = 0; start + window <= values.size(); start += window) {
        double sum = 0.0;
        for (std::size_t t = start; t < start + window; ++t) sum += values[t];
        out.push_back(sum / static_cast<double>(window));
    }
    return out;
}

/// Threshold with a caller-supplied evaluation `series_of(surrogate_record) -> SyncSeries`.
template <class Evaluate>
SurrogateResult significance_threshold(const MultiChannelRecord& record, const std::vector<std::string>& group,
                                       const SurrogateConfig& cfg, Evaluate&& series_of, unsigned threads = 1) {
    cfg.validate();
    const auto members = detail::canonical_group(record, group);
    const auto sub = record.select(members);
    const std::size_t window = cfg.resolved_pool_window(record.sample_rate_hz());

    std::vector<std::vector<double>> per_surrogate(cfg.count);
    parallel_for(cfg.count, threads, [&](std::size_t i) {
        const auto surrogate = shuffle_surrogate(sub, cfg.seed + i + 1);
        const SyncSeries series = series_of(surrogate);
        per_surrogate[i] = window_means(series.valid_values(), window);
    });

    SurrogateResult result;
    result.pool_window = window;
    for (auto& values : per_surrogate) result.pooled.insert(result.pooled.end(), values.begin(), values.end());
    result.threshold = nearest_rank_percentile(result.pooled, cfg.percentile);
    return result;
}

inline SurrogateResult significance_threshold(const MultiChannelRecord& record,
                                              const std::vector<std::string>& group,
                                              const PipelineConfig& pipeline, const SurrogateConfig& cfg,
                                              unsigned threads = 1) {
    return significance_threshold(
        record, group, cfg, [&](const MultiChannelRecord& s) { return run_pipeline(s, pipeline); }, threads);
}

}  // namespace peaksync
