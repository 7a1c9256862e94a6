#pragma once

// Coupled peak-train fixtures.
//
// Channel 1 is the master: an independent Bernoulli(base_rate) train. Inside
// the coupled region each master peak is copied into every follower with
// probability `coupling`, displaced by round(N(0, jitter_std)) samples and
// clipped to [0, N). Followers also get independent background peaks at
// rate base_rate * (1 - coupling) there, so their expected rate stays at
// base_rate. Outside the region every channel is independent at base_rate.
// Two peaks landing on one sample merge into one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/peaks.hpp"
#include "peaksync/random.hpp"
#include "peaksync/record.hpp"

namespace peaksync {

struct SynthSpec {
    std::size_t channels = 3;
    std::size_t length = 100'000;
    double base_rate = 0.01;
    double coupling = 0.0;
    double jitter_std = 0.0;
    /// Coupled region [first, second) in 0-based samples; whole length when absent.
    std::optional<std::pair<std::size_t, std::size_t>> segment;
    std::uint64_t seed = 0;
    double sample_rate_hz = 256.0;
    double spike_amplitude = 8.0;

    void validate() const {
        detail::require(channels >= 1, "synthetic record needs at least one channel");
        detail::require(length >= 1, "synthetic record needs at least one sample");
        detail::require(base_rate > 0.0 && base_rate < 0.5, "base rate must lie in (0, 0.5)");
        detail::require(coupling >= 0.0 && coupling <= 1.0, "coupling must lie in [0, 1]");
        detail::require(std::isfinite(jitter_std) && jitter_std >= 0.0, "jitter must be non-negative");
        detail::require(sample_rate_hz > 0.0, "sample rate must be positive");
        if (segment)
            detail::require(segment->first < segment->second && segment->second <= length,
                            "coupled segment must satisfy start < end <= length");
    }
};

inline std::string synth_label(std::size_t k) { return "ch" + std::to_string(k + 1); }

/// Labelled trains ch1..chr.
inline std::vector<PeakTrain> generate_trains(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const std::size_t n = spec.length;
    const std::size_t seg_begin = spec.segment ? spec.segment->first : 0;
    const std::size_t seg_end = spec.segment ? spec.segment->second : n;
    auto coupled = [&](std::size_t t) { return t >= seg_begin && t < seg_end; };

    std::vector<PeakTrain> trains;
    for (std::size_t k = 0; k < spec.channels; ++k)
        trains.push_back(PeakTrain{std::vector<std::uint8_t>(n, 0), synth_label(k)});

    auto& master = trains.front().indicators;
    for (std::size_t t = 0; t < n; ++t) master[t] = rng.bernoulli(spec.base_rate) ? 1 : 0;

    const double background_in_segment = spec.base_rate * (1.0 - spec.coupling);
    for (std::size_t k = 1; k < spec.channels; ++k) {
        auto& follower = trains[k].indicators;
        for (std::size_t t = 0; t < n; ++t) {
            const double rate = coupled(t) ? background_in_segment : spec.base_rate;
            if (rng.bernoulli(rate)) follower[t] = 1;
        }
        for (std::size_t t = seg_begin; t < seg_end; ++t) {
            if (!master[t] || !rng.bernoulli(spec.coupling)) continue;
            const double shift = spec.jitter_std > 0.0 ? std::round(spec.jitter_std * rng.normal()) : 0.0;
            const double target = std::clamp(static_cast<double>(t) + shift, 0.0, static_cast<double>(n - 1));
            follower[static_cast<std::size_t>(target)] = 1;
        }
    }
    return trains;
}

/// Unit Gaussian noise with spike_amplitude added at every train peak.
inline MultiChannelRecord generate_record(const SynthSpec& spec) {
    const auto trains = generate_trains(spec);
    Rng noise(spec.seed ^ 0x9E3779B97F4A7C15ULL);
    Matrix samples(spec.channels, spec.length);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < spec.channels; ++k) {
        labels.push_back(trains[k].label);
        for (std::size_t t = 0; t < spec.length; ++t)
            samples(k, t) = noise.normal() + (trains[k].indicators[t] ? spec.spike_amplitude : 0.0);
    }
    return {std::move(labels), std::move(samples), spec.sample_rate_hz};
}

/// Trains as a record of 0/1 values.
inline MultiChannelRecord trains_to_record(const std::vector<PeakTrain>& trains, double sample_rate_hz) {
    detail::require(!trains.empty(), "no trains to convert");
    Matrix samples(trains.size(), trains.front().size());
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < trains.size(); ++k) {
        detail::require(trains[k].size() == samples.cols(), "peak trains differ in length");
        labels.push_back(trains[k].label);
        for (std::size_t t = 0; t < samples.cols(); ++t) samples(k, t) = trains[k].indicators[t];
    }
    return {std::move(labels), std::move(samples), sample_rate_hz};
}

}  // namespace peaksync
