#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peaksync/peaks.hpp"
#include "peaksync/preprocess.hpp"
#include "peaksync/record.hpp"
#include "peaksync/sync.hpp"
#include "peaksync/weights.hpp"

namespace peaksync {

/// Everything needed to go from raw samples to a synchronization series.
struct PipelineConfig {
    std::optional<FilterSpec> filter = FilterSpec{};  ///< nullopt skips filtering
    DetectorConfig detector{};
    WeightVector weights = build_weights(0.5, 1e-3, Density::gaussian(1.0));
    bool inputs_are_trains = false;  ///< channels already hold 0/1 peak trains
    bool pairwise = false;           ///< evaluate through the pairwise average
};

/// Peak trains for every channel of `record`.
inline std::vector<PeakTrain> trains_for(const MultiChannelRecord& record, const PipelineConfig& cfg,
                                         unsigned threads = 1) {
    if (cfg.inputs_are_trains) {
        std::vector<PeakTrain> trains;
        for (std::size_t k = 0; k < record.channel_count(); ++k)
            trains.push_back(train_from_values(record.channel(k), record.labels()[k]));
        return trains;
    }
    const auto filtered = cfg.filter ? apply_filters(record, *cfg.filter, threads) : record;
    return detect_peaks(filtered, cfg.detector);
}

/// filter -> detect -> group series over all channels of `record`.
inline SyncSeries run_pipeline(const MultiChannelRecord& record, const PipelineConfig& cfg, unsigned threads = 1) {
    const auto trains = trains_for(record, cfg, threads);
    if (cfg.pairwise) return multi_sync_pairwise(trains, cfg.weights);
    return multi_sync(trains, cfg.weights, threads);
}

struct SweepRow {
    double a0;
    std::vector<double> phi_bar;  ///< one compound value per interval
};

/// Compound measure of the group series for every central coefficient in
/// `grid`, over each interval. Peak trains are fixed; only weights change.
inline std::vector<SweepRow> sweep_central_coefficient(std::span<const PeakTrain> trains,
                                                       std::span<const double> grid, double tau,
                                                       const Density& density,
                                                       std::span<const Interval> intervals, unsigned threads = 1) {
    detail::require(!intervals.empty(), "sweep needs at least one interval");
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const auto series = multi_sync(trains, build_weights(grid[i], tau, density));
        rows[i].a0 = grid[i];
        for (const auto& iv : intervals) rows[i].phi_bar.push_back(compound(series, iv.t0, iv.span));
    });
    return rows;
}

/// a0 = first, first + step, ... up to last (inclusive, with 1e-9 slack).
inline std::vector<double> coefficient_grid(double first, double step, double last) {
    detail::require(step > 0.0 && first <= last, "grid needs step > 0 and first <= last");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double v = first + static_cast<double>(i) * step;
        if (v > last + 1e-9) break;
        grid.push_back(v);
    }
    return grid;
}

}  // namespace peaksync
