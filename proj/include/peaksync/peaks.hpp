#pragma once

// Threshold peak detection.
//
// The channel is split into tumbling windows of window_len samples. Each
// window gets threshold median + multiplier * std (population std); a
// trailing partial window reuses the last full window's threshold. Sample t
// is a peak when it is a strict local maximum and lies above the threshold
// of its window. For a flat-topped maximum only the first sample of the run
// counts. The first and last sample have a single neighbour and are never
// peaks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/record.hpp"

namespace peaksync {

/// Binary event sequence: indicators[t] is 1 when sample t is a peak.
struct PeakTrain {
    std::vector<std::uint8_t> indicators;
    std::string label;

    std::size_t size() const noexcept { return indicators.size(); }
    std::size_t count() const {
        return static_cast<std::size_t>(std::count(indicators.begin(), indicators.end(), std::uint8_t{1}));
    }
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t t = 0; t < indicators.size(); ++t)
            if (indicators[t]) out.push_back(t);
        return out;
    }

    friend bool operator==(const PeakTrain&, const PeakTrain&) = default;
};

enum class Polarity { positive, negative, both };

inline Polarity parse_polarity(std::string_view s) {
    if (s == "positive") return Polarity::positive;
    if (s == "negative") return Polarity::negative;
    if (s == "both") return Polarity::both;
    throw ValidationError("polarity must be positive, negative or both");
}

inline std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::positive: return "positive";
        case Polarity::negative: return "negative";
        case Polarity::both: return "both";
    }
    return "positive";
}

struct DetectorConfig {
    std::size_t window_len = 256;
    double multiplier = 2.0;
    Polarity polarity = Polarity::positive;

    void validate() const {
        detail::require(window_len >= 3, "peak window must be at least 3 samples");
        detail::require(std::isfinite(multiplier) && multiplier > 0.0, "threshold multiplier must be positive");
    }
};

/// Builds a train from externally detected 0/1 values; anything else is rejected.
inline PeakTrain train_from_values(std::span<const double> values, std::string label) {
    PeakTrain train{std::vector<std::uint8_t>(values.size(), 0), std::move(label)};
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (values[t] == 1.0)
            train.indicators[t] = 1;
        else
            detail::require(values[t] == 0.0, "train '" + train.label + "' holds a value other than 0 or 1");
    }
    return train;
}

namespace detail {

struct WindowStats {
    double median;
    double stddev;
};

inline WindowStats window_stats(std::span<const double> w, std::vector<double>& scratch) {
    scratch.assign(w.begin(), w.end());
    const std::size_t mid = scratch.size() / 2;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid), scratch.end());
    double median = scratch[mid];
    if (scratch.size() % 2 == 0) {
        const double lower = *std::max_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid));
        median = lower + 0.5 * (median - lower);
    }
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(w.size());
    double ss = 0.0;
    for (double v : w) ss += (v - mean) * (v - mean);
    return {median, std::sqrt(ss / static_cast<double>(w.size()))};
}

/// Positive-polarity detection on `x` scaled by `sign` (+1 or -1).
inline void mark_peaks(std::span<const double> x, double sign, const DetectorConfig& cfg,
                       std::vector<std::uint8_t>& out) {
    const std::size_t n = x.size();
    const std::size_t full_windows = n / cfg.window_len;
    std::vector<double> scratch;
    std::vector<double> signed_window(cfg.window_len);

    WindowStats stats{0.0, 0.0};
    for (std::size_t start = 0; start < n; start += cfg.window_len) {
        const std::size_t end = std::min(n, start + cfg.window_len);
        if (start / cfg.window_len < full_windows) {
            for (std::size_t i = 0; i < cfg.window_len; ++i) signed_window[i] = sign * x[start + i];
            stats = window_stats(signed_window, scratch);
        }
        const double margin = cfg.multiplier * stats.stddev;
        for (std::size_t t = std::max<std::size_t>(start, 1); t < end && t + 1 < n; ++t) {
            const double v = sign * x[t];
            if (!(v - stats.median > margin)) continue;
            if (!(v > sign * x[t - 1])) continue;
            // walk past a plateau; the run must drop afterwards
            std::size_t after = t + 1;
            while (after < n && sign * x[after] == v) ++after;
            if (after < n && v > sign * x[after]) out[t] = 1;
        }
    }
}

}  // namespace detail

inline PeakTrain detect_peaks(std::span<const double> channel, const DetectorConfig& cfg, std::string label = {}) {
    cfg.validate();
    detail::require(channel.size() >= cfg.window_len, "channel is shorter than the peak window");
    for (double v : channel) detail::require(std::isfinite(v), "channel contains a non-finite sample");

    PeakTrain train{std::vector<std::uint8_t>(channel.size(), 0), std::move(label)};
    if (cfg.polarity != Polarity::negative) detail::mark_peaks(channel, 1.0, cfg, train.indicators);
    if (cfg.polarity != Polarity::positive) detail::mark_peaks(channel, -1.0, cfg, train.indicators);
    return train;
}

/// One train per channel, labelled like the record.
inline std::vector<PeakTrain> detect_peaks(const MultiChannelRecord& record, const DetectorConfig& cfg) {
    std::vector<PeakTrain> trains;
    trains.reserve(record.channel_count());
    for (std::size_t k = 0; k < record.channel_count(); ++k)
        trains.push_back(detect_peaks(record.channel(k), cfg, record.labels()[k]));
    return trains;
}

}  // namespace peaksync
