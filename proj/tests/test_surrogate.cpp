#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "peaksync/surrogate.hpp"
#include "peaksync/synth.hpp"

using namespace peaksync;

namespace {

MultiChannelRecord random_record(std::uint64_t seed, std::size_t r, std::size_t n) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    Matrix m(r, n);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < r; ++k) {
        labels.push_back("c" + std::to_string(k));
        for (std::size_t t = 0; t < n; ++t) m(k, t) = d(gen);
    }
    return {std::move(labels), std::move(m), 64.0};
}

PipelineConfig small_pipeline() {
    PipelineConfig p;
    p.filter = std::nullopt;
    p.detector.window_len = 64;
    return p;
}

}  // namespace

TEST(ShuffleSurrogate, PreservesMultisetPerChannel) {
    const auto rec = random_record(1, 3, 500);
    const auto s = shuffle_surrogate(rec, 77);
    EXPECT_EQ(s.labels(), rec.labels());
    EXPECT_EQ(s.sample_rate_hz(), rec.sample_rate_hz());
    EXPECT_NE(s.samples(), rec.samples());
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<double> a(rec.channel(k).begin(), rec.channel(k).end());
        std::vector<double> b(s.channel(k).begin(), s.channel(k).end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
    }
}

TEST(ShuffleSurrogate, Deterministic) {
    const auto rec = random_record(2, 2, 300);
    EXPECT_EQ(shuffle_surrogate(rec, 5).samples(), shuffle_surrogate(rec, 5).samples());
    EXPECT_NE(shuffle_surrogate(rec, 5).samples(), shuffle_surrogate(rec, 6).samples());
}

TEST(ShuffleSurrogate, ChannelsUseDifferentPermutations) {
    Matrix m(2, 64);
    for (std::size_t t = 0; t < 64; ++t) m(0, t) = m(1, t) = static_cast<double>(t);
    const auto s = shuffle_surrogate(MultiChannelRecord({"a", "b"}, m, 1.0), 3);
    EXPECT_FALSE(std::equal(s.channel(0).begin(), s.channel(0).end(), s.channel(1).begin()));
}

TEST(ShuffleSurrogate, MarkedPositionIsUniform) {
    // Pearson chi-square with 15 degrees of freedom; 37.697 is the upper
    // 0.001 quantile, so chi2 below it means p > 0.001.
    constexpr std::size_t kLen = 16;
    constexpr int kTrials = 10'000;
    Matrix m(1, kLen);
    m(0, 0) = 1.0;
    const MultiChannelRecord rec({"x"}, m, 1.0);
    std::array<int, kLen> counts{};
    for (int i = 0; i < kTrials; ++i) {
        const auto s = shuffle_surrogate(rec, static_cast<std::uint64_t>(i));
        const auto ch = s.channel(0);
        ++counts[static_cast<std::size_t>(std::find(ch.begin(), ch.end(), 1.0) - ch.begin())];
    }
    const double expected = static_cast<double>(kTrials) / kLen;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 37.697);
}

TEST(NearestRank, MatchesDirectSort) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (std::size_t m : {1u, 2u, 7u, 20u, 100u, 1001u}) {
        std::vector<double> v(m);
        for (auto& x : v) x = d(gen);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        for (double p : {1.0, 50.0, 95.0, 99.9, 100.0}) {
            // smallest k (1-based) with k >= p m / 100
            std::size_t k = 1;
            while (static_cast<double>(k) * 100.0 < p * static_cast<double>(m)) ++k;
            EXPECT_EQ(nearest_rank_percentile(v, p), sorted[k - 1]) << m << " " << p;
        }
    }
    const std::vector<double> twenty{20, 19, 18, 17, 16, 15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
    EXPECT_EQ(nearest_rank_percentile(twenty, 95.0), 19.0);
    EXPECT_EQ(nearest_rank_percentile(twenty, 96.0), 20.0);
    EXPECT_THROW(nearest_rank_percentile(std::vector<double>{}, 95.0), ValidationError);
}

TEST(Significance, InjectedPipelinePoolsEverySample) {
    const auto rec = random_record(5, 2, 10);
    SurrogateConfig cfg;
    cfg.count = 2;
    cfg.pool_window = 1;
    // Evaluate returns the first channel itself as the "series".
    auto first_channel = [](const MultiChannelRecord& s) {
        SyncSeries out;
        out.values.assign(s.channel(0).begin(), s.channel(0).end());
        out.valid_begin = 1;
        out.valid_end = 9;
        return out;
    };
    const auto result = significance_threshold(rec, {"c0", "c1"}, cfg, first_channel);
    ASSERT_EQ(result.pooled.size(), 16u);
    std::vector<double> expected;
    for (std::uint64_t i = 1; i <= 2; ++i) {
        const auto s = shuffle_surrogate(rec, i);
        expected.insert(expected.end(), s.channel(0).begin() + 1, s.channel(0).begin() + 9);
    }
    EXPECT_EQ(result.pooled, expected);
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(result.threshold, expected[15]);  // ceil(0.95 * 16) = 16
}

TEST(Significance, WindowMeans) {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7};
    EXPECT_EQ(window_means(v, 3), (std::vector<double>{2.0, 5.0}));
    EXPECT_EQ(window_means(v, 1), v);
    EXPECT_TRUE(window_means(v, 8).empty());
}

TEST(Significance, AllZeroRecordGivesZero) {
    Matrix m(3, 512);
    const MultiChannelRecord rec({"a", "b", "c"}, m, 64.0);
    SurrogateConfig cfg;
    cfg.count = 5;
    for (std::size_t window : {1u, 16u}) {
        cfg.pool_window = window;
        EXPECT_EQ(significance_threshold(rec, {"a", "b", "c"}, small_pipeline(), cfg).threshold, 0.0);
    }
}

TEST(Significance, GroupOrderAndThreadsDoNotMatter) {
    const auto rec = random_record(6, 4, 2048);
    SurrogateConfig cfg;
    cfg.count = 8;
    cfg.seed = 99;
    const auto a = significance_threshold(rec, {"c0", "c2", "c3"}, small_pipeline(), cfg);
    const auto b = significance_threshold(rec, {"c3", "c0", "c2"}, small_pipeline(), cfg, 4);
    EXPECT_EQ(a.threshold, b.threshold);
    EXPECT_EQ(a.pooled, b.pooled);
    EXPECT_EQ(a.pool_window, 64u);
}

TEST(Significance, MonotoneInPercentile) {
    const auto rec = random_record(7, 3, 2048);
    SurrogateConfig cfg;
    cfg.count = 6;
    cfg.pool_window = 1;
    double previous = -1.0;
    for (double p : {5.0, 25.0, 50.0, 75.0, 90.0, 95.0, 99.0, 99.99}) {
        cfg.percentile = p;
        const double thr = significance_threshold(rec, {"c0", "c1", "c2"}, small_pipeline(), cfg).threshold;
        EXPECT_GE(thr, previous) << p;
        previous = thr;
    }
}

TEST(Significance, Validation) {
    const auto rec = random_record(8, 2, 256);
    SurrogateConfig cfg;
    cfg.count = 1;
    EXPECT_THROW(significance_threshold(rec, {"c0", "c1"}, small_pipeline(), cfg), ValidationError);
    cfg = SurrogateConfig{};
    cfg.percentile = 100.0;
    EXPECT_THROW(significance_threshold(rec, {"c0", "c1"}, small_pipeline(), cfg), ValidationError);
    cfg = SurrogateConfig{};
    cfg.pool_window = 0;
    EXPECT_THROW(significance_threshold(rec, {"c0", "c1"}, small_pipeline(), cfg), ValidationError);
    cfg = SurrogateConfig{};
    EXPECT_THROW(significance_threshold(rec, {"c0", "zz"}, small_pipeline(), cfg), ValidationError);
    EXPECT_THROW(significance_threshold(rec, {"c0", "c0"}, small_pipeline(), cfg), ValidationError);
    EXPECT_THROW(significance_threshold(rec, {"c0"}, small_pipeline(), cfg), ValidationError);
}

TEST(Significance, CoupledSegmentExceedsThreshold) {
    // Reduced copy of the acceptance fixture: N = 20000, segment 8000-12000,
    // 20 surrogates per trial, default filter and detector at fs = 256.
    PipelineConfig pipeline;
    SurrogateConfig cfg;
    cfg.count = 20;
    int inside_ok = 0, outside_ok = 0;
    for (std::uint64_t trial = 1; trial <= 100; ++trial) {
        SynthSpec spec;
        spec.length = 20'000;
        spec.coupling = 0.9;
        spec.jitter_std = 1.0;
        spec.segment = {{8'000, 12'000}};
        spec.seed = trial;
        const auto rec = generate_record(spec);
        const auto series = run_pipeline(rec, pipeline);
        cfg.seed = 1000 * trial;
        const double thr = significance_threshold(rec, rec.labels(), pipeline, cfg, 4).threshold;
        const double inside = compound(series, 8'000, 4'000);
        const double outside = (compound(series, 0, 8'000) * 8'000 + compound(series, 12'000, 8'000) * 8'000) / 16'000;
        inside_ok += inside > thr;
        outside_ok += outside < thr;
    }
    EXPECT_GE(inside_ok, 95);
    EXPECT_GE(outside_ok, 95);
}
