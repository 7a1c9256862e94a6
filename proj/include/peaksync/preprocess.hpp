#pragma once

// Zero-phase Butterworth band-pass and band-stop filtering.
//
// Filters are designed from an analog Butterworth low-pass prototype of the
// requested order, moved to the target band with the standard low-pass to
// band-pass (or band-stop) substitution, and discretised by the bilinear
// transform with pre-warped band edges. Each prototype order contributes one
// second-order section, so `order` is also the section count.
//
// Application is forward-backward through the cascade. Each channel is
// first extended by an odd reflection of 3 * (2 * sections + 1) samples at
// both ends, and every section starts from its steady-state response to the
// first extended sample.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/parallel.hpp"
#include "peaksync/record.hpp"

namespace peaksync {

/// Normalised second-order section: a0 == 1.
struct Biquad {
    double b0, b1, b2, a1, a2;

    std::complex<double> response(double omega) const {
        const std::complex<double> z1 = std::polar(1.0, -omega);
        const std::complex<double> z2 = z1 * z1;
        return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
    }
};

using SectionCascade = std::vector<Biquad>;

/// |H(f)| of a cascade designed for `sample_rate_hz`.
inline double magnitude_response(const SectionCascade& sections, double freq_hz, double sample_rate_hz) {
    const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    std::complex<double> h{1.0, 0.0};
    for (const auto& s : sections) h *= s.response(omega);
    return std::abs(h);
}

/// Band-pass [low_hz, high_hz] with an optional band-stop [notch_low_hz,
/// notch_high_hz]; a notch with both edges 0 is disabled.
struct FilterSpec {
    double low_hz = 25.0;
    double high_hz = 100.0;
    double notch_low_hz = 49.0;
    double notch_high_hz = 51.0;
    int order = 4;
    int notch_order = 2;

    bool notch_enabled() const { return notch_low_hz > 0.0 || notch_high_hz > 0.0; }

    void validate(double sample_rate_hz) const {
        const double nyquist = sample_rate_hz / 2.0;
        detail::require(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist,
                        "band must satisfy 0 < low < high < Nyquist");
        detail::require(order >= 1 && order <= 16, "band-pass order must lie in [1, 16]");
        if (notch_enabled()) {
            detail::require(notch_low_hz < notch_high_hz, "notch band must satisfy low < high");
            detail::require(notch_low_hz >= low_hz && notch_high_hz <= high_hz, "notch band must lie inside the pass band");
            detail::require(notch_order >= 1 && notch_order <= 16, "notch order must lie in [1, 16]");
        }
    }
};

namespace detail {

inline std::vector<std::complex<double>> butterworth_prototype_poles(int order) {
    std::vector<std::complex<double>> poles;
    for (int k = 1; k <= order; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order - 1) / (2.0 * order);
        poles.push_back(std::polar(1.0, theta));
    }
    return poles;
}

inline std::complex<double> bilinear(std::complex<double> s, double fs2) { return (fs2 + s) / (fs2 - s); }

inline double prewarp(double f_hz, double sample_rate_hz) {
    return 2.0 * sample_rate_hz * std::tan(std::numbers::pi * f_hz / sample_rate_hz);
}

/// Pairs digital poles (closed under conjugation) into real second-order
/// denominators 1 + a1 z^-1 + a2 z^-2.
inline std::vector<std::pair<double, double>> pair_poles(const std::vector<std::complex<double>>& poles) {
    constexpr double kRealTol = 1e-12;
    std::vector<std::pair<double, double>> dens;
    std::vector<double> reals;
    for (const auto& p : poles) {
        if (std::abs(p.imag()) <= kRealTol)
            reals.push_back(p.real());
        else if (p.imag() > 0.0)
            dens.emplace_back(-2.0 * p.real(), std::norm(p));
    }
    std::sort(reals.begin(), reals.end());
    require(reals.size() % 2 == 0, "filter design produced an odd number of real poles");
    for (std::size_t i = 0; i < reals.size(); i += 2)
        dens.emplace_back(-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]);
    return dens;
}

inline void scale_to_unity(SectionCascade& sections, double omega) {
    std::complex<double> h{1.0, 0.0};
    for (const auto& s : sections) h *= s.response(omega);
    const double per_section = std::pow(1.0 / std::abs(h), 1.0 / static_cast<double>(sections.size()));
    for (auto& s : sections) {
        s.b0 *= per_section;
        s.b1 *= per_section;
        s.b2 *= per_section;
    }
}

}  // namespace detail

/// Band-pass cascade of `order` sections, unit gain at the geometric centre.
inline SectionCascade design_bandpass(double low_hz, double high_hz, int order, double sample_rate_hz) {
    detail::require(low_hz > 0.0 && low_hz < high_hz && high_hz < sample_rate_hz / 2.0,
                    "band must satisfy 0 < low < high < Nyquist");
    detail::require(order >= 1, "filter order must be at least 1");
    const double w1 = detail::prewarp(low_hz, sample_rate_hz);
    const double w2 = detail::prewarp(high_hz, sample_rate_hz);
    const double w0 = std::sqrt(w1 * w2);
    const double bw = w2 - w1;
    const double fs2 = 2.0 * sample_rate_hz;

    std::vector<std::complex<double>> digital;
    for (const auto& p : detail::butterworth_prototype_poles(order)) {
        // s^2 - p*bw*s + w0^2 = 0
        const std::complex<double> half = p * bw / 2.0;
        const std::complex<double> root = std::sqrt(half * half - w0 * w0);
        digital.push_back(detail::bilinear(half + root, fs2));
        digital.push_back(detail::bilinear(half - root, fs2));
    }
    SectionCascade sections;
    for (const auto& [a1, a2] : detail::pair_poles(digital))
        sections.push_back({1.0, 0.0, -1.0, a1, a2});  // zeros at z = 1 and z = -1
    const double centre = 2.0 * std::atan(w0 / fs2);
    detail::scale_to_unity(sections, centre);
    return sections;
}

/// Band-stop cascade of `order` sections, unit gain at DC.
inline SectionCascade design_bandstop(double low_hz, double high_hz, int order, double sample_rate_hz) {
    detail::require(low_hz > 0.0 && low_hz < high_hz && high_hz < sample_rate_hz / 2.0,
                    "stop band must satisfy 0 < low < high < Nyquist");
    detail::require(order >= 1, "filter order must be at least 1");
    const double w1 = detail::prewarp(low_hz, sample_rate_hz);
    const double w2 = detail::prewarp(high_hz, sample_rate_hz);
    const double w0 = std::sqrt(w1 * w2);
    const double bw = w2 - w1;
    const double fs2 = 2.0 * sample_rate_hz;

    std::vector<std::complex<double>> digital;
    for (const auto& p : detail::butterworth_prototype_poles(order)) {
        // p*s^2 - bw*s + p*w0^2 = 0
        const std::complex<double> half = bw / (2.0 * p);
        const std::complex<double> root = std::sqrt(half * half - w0 * w0);
        digital.push_back(detail::bilinear(half + root, fs2));
        digital.push_back(detail::bilinear(half - root, fs2));
    }
    const double centre = 2.0 * std::atan(w0 / fs2);
    const double c = -2.0 * std::cos(centre);
    SectionCascade sections;
    for (const auto& [a1, a2] : detail::pair_poles(digital)) sections.push_back({1.0, c, 1.0, a1, a2});
    detail::scale_to_unity(sections, 0.0);
    return sections;
}

/// Zero-phase application of a cascade to one channel.
inline std::vector<double> filtfilt(const SectionCascade& sections, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0 || sections.empty()) return {x.begin(), x.end()};
    const std::size_t pad = std::min<std::size_t>(3 * (2 * sections.size() + 1), n - 1);

    std::vector<double> ext(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
    std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
    for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

    auto run = [&sections](std::vector<double>& y) {
        for (const auto& s : sections) {
            // transposed direct form II, state set to the steady response to y[0]
            const double u = y.front();
            const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
            double z2 = s.b2 * u - s.a2 * dc * u;
            double z1 = s.b1 * u - s.a1 * dc * u + z2;
            for (double& v : y) {
                const double in = v;
                const double out = s.b0 * in + z1;
                z1 = s.b1 * in - s.a1 * out + z2;
                z2 = s.b2 * in - s.a2 * out;
                v = out;
            }
        }
    };
    run(ext);
    std::reverse(ext.begin(), ext.end());
    run(ext);
    std::reverse(ext.begin(), ext.end());
    return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

inline MultiChannelRecord apply_cascade(const MultiChannelRecord& record, const SectionCascade& sections,
                                        unsigned threads = 1) {
    Matrix out(record.channel_count(), record.sample_count());
    parallel_for(record.channel_count(), threads, [&](std::size_t k) {
        const auto y = filtfilt(sections, record.channel(k));
        std::copy(y.begin(), y.end(), out.row(k).begin());
    });
    return record.with_samples(std::move(out));
}

/// Zero-phase band-pass of every channel (the notch fields of `spec` are not used here).
inline MultiChannelRecord bandpass(const MultiChannelRecord& record, const FilterSpec& spec, unsigned threads = 1) {
    spec.validate(record.sample_rate_hz());
    return apply_cascade(record, design_bandpass(spec.low_hz, spec.high_hz, spec.order, record.sample_rate_hz()),
                         threads);
}

inline MultiChannelRecord notch(const MultiChannelRecord& record, double center_hz, double bandwidth_hz,
                                int order = 2, unsigned threads = 1) {
    detail::require(center_hz > 0.0 && bandwidth_hz > 0.0, "notch centre and bandwidth must be positive");
    const double low = center_hz - bandwidth_hz / 2.0;
    const double high = center_hz + bandwidth_hz / 2.0;
    return apply_cascade(record, design_bandstop(low, high, order, record.sample_rate_hz()), threads);
}

/// Band-pass followed by the notch, when one is configured.
inline MultiChannelRecord apply_filters(const MultiChannelRecord& record, const FilterSpec& spec,
                                        unsigned threads = 1) {
    auto out = bandpass(record, spec, threads);
    if (spec.notch_enabled())
        out = notch(out, (spec.notch_low_hz + spec.notch_high_hz) / 2.0, spec.notch_high_hz - spec.notch_low_hz,
                    spec.notch_order, threads);
    return out;
}

}  // namespace peaksync
